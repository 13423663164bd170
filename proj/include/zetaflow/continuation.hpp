#pragma once

// Partial-fraction resolvent machinery, the integral identities behind the
// resolvent trace, the continued log-derivative of Z and its residues, and
// path integration of L.

#include <complex>
#include <functional>
#include <vector>

#include "zetaflow/heat.hpp"
#include "zetaflow/quadrature.hpp"
#include "zetaflow/repr.hpp"
#include "zetaflow/spectrum.hpp"
#include "zetaflow/zeta.hpp"

namespace zetaflow {

/// Anchor points s_1..s_N, N >= 2, with pairwise distinct squares.
class AnchorSet {
 public:
  explicit AnchorSet(std::vector<std::complex<double>> s);
  const std::vector<std::complex<double>>& s() const { return s_; }
  std::size_t size() const { return s_.size(); }

 private:
  std::vector<std::complex<double>> s_;
};

/// c_i = prod_{j != i} 1 / (s_j^2 - s_i^2).
std::vector<std::complex<double>> partial_fraction_coeffs(const AnchorSet& a);

/// sum_i s_i^{2l} c_i; zero for 0 <= l <= N-2. Accepts l up to N-1.
std::complex<double> moment_sum(const AnchorSet& a, int l);

/// sum_i c_i e^{-t s_i^2}, which is O(t^{N-1}) as t -> 0.
std::complex<double> small_t_combination(const AnchorSet& a, double t);

struct IdentityCheck {
  std::complex<double> lhs;
  std::complex<double> rhs;
};

/// lhs = int_0^inf e^{-t s^2} e^{-l^2/4t} (4 pi t)^{-1/2} dt by quadrature,
/// rhs = e^{-sl} / (2s).
IdentityCheck heat_resolvent_identity(std::complex<double> s, double l,
                                      const QuadratureOptions& options = {});

struct CauchyPlancherelCheck {
  std::complex<double> lhs;
  std::complex<double> rhs;
  /// q with P(i lambda) = q(lambda^2)(lambda^2 + s^2) + P(s); q(u) = sum q_m u^m.
  /// lhs integrates P(i lambda)/(lambda^2 + s^2) - q(lambda^2).
  std::vector<std::complex<double>> subtracted;
};

/// Regularized int_R P(i lambda)/(lambda^2 + s^2) d lambda against (pi/s) P(s).
/// Requires Re(s) > 0.
CauchyPlancherelCheck cauchy_plancherel_identity(std::complex<double> s, const PlancherelPolynomial& p);

/// (pi/s) P(s).
std::complex<double> cauchy_plancherel_rhs(std::complex<double> s, const PlancherelPolynomial& p);

/// sum_k m_k prod_i (t_k + s_i^2)^{-1}.
std::complex<double> resolvent_trace_spectral(const EigenSpectrum& es, const AnchorSet& a);

/// sum_i c_i [ (pi/s_i) dim_chi vol P(s_i) + L(s_i)/(2 s_i) ] with L the
/// log-derivative series.
std::complex<double> resolvent_trace_geometric(const LengthSpectrum& ls, const Weight& sigma, const AnchorSet& a,
                                               const TruncationPolicy& tp = {});

/// Quadrature window used by resolvent_trace_via_heat.
QuadratureOptions heat_quadrature_defaults();

/// int_0^inf sum_i c_i e^{-t s_i^2} (geometric heat trace)(t) dt. Needs N > d/2.
std::complex<double> resolvent_trace_via_heat(const LengthSpectrum& ls, const Weight& sigma, const AnchorSet& a,
                                              const TruncationPolicy& tp = {},
                                              const QuadratureOptions& options = heat_quadrature_defaults());

/// L(s) continued from a finite eigenvalue spectrum:
/// 2s sum_k m_k/(s^2 + t_k) - 2 pi dim_chi vol P(s).
class ContinuedL {
 public:
  ContinuedL(EigenSpectrum spectrum, PlancherelPolynomial p, int dim_chi, double volume);

  std::complex<double> operator()(std::complex<double> s) const;
  /// Distinct singular points: +-i sqrt(t_k), and 0 when some t_k = 0.
  std::vector<std::complex<double>> singularities() const;
  /// Expected residue at a singular point (m, or 2m at 0).
  int expected_order(std::complex<double> point) const;

  const EigenSpectrum& spectrum() const { return spectrum_; }
  const PlancherelPolynomial& plancherel() const { return p_; }
  int dim_chi() const { return dim_chi_; }
  double volume() const { return volume_; }

 private:
  EigenSpectrum spectrum_;
  PlancherelPolynomial p_;
  int dim_chi_;
  double volume_;
};

/// Square root with Re >= 0, and Im > 0 on the negative real axis.
std::complex<double> spectral_sqrt(std::complex<double> t);

struct ResidueResult {
  int order = 0;
  std::complex<double> raw;
  /// |raw - order|.
  double residual = 0.0;
};

/// (1/2 pi i) of the integral of L around the singularity within 1e-6 of
/// point: 64-node trapezoid on a circle of half the gap to the nearest other
/// singularity (radius 1 when isolated).
ResidueResult residue_order(const ContinuedL& cl, std::complex<double> point);

/// Integrand for path integration together with the points to avoid.
struct PathIntegrand {
  std::function<std::complex<double>(std::complex<double>)> f;
  std::vector<std::complex<double>> singularities;
};

/// Refers to cl, which must outlive the result.
PathIntegrand path_integrand(const ContinuedL& cl);

/// log Z(s1) - log Z(s0) = integral of L along s0 -> vertices -> s1.
/// Throws DomainError when the path passes within 1e-3 of a singularity.
std::complex<double> log_zeta_ratio(std::complex<double> s0, std::complex<double> s1, const PathIntegrand& L,
                                    const std::vector<std::complex<double>>& vertices = {});

inline constexpr double kPathClearance = 1e-3;

}  // namespace zetaflow
