#pragma once

// Euler-product side: log Z(s; sigma, chi), log R(s; sigma, chi), the
// logarithmic derivative L(s) and the factorization of R through the Z_p.

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "zetaflow/repr.hpp"
#include "zetaflow/spectrum.hpp"
#include "zetaflow/summation.hpp"

namespace zetaflow {

struct TruncationPolicy {
  double lmax = 40.0;
  double tail_eps = 1e-10;
  /// Evaluations are refused left of abscissa - abscissa_margin.
  double abscissa_margin = 0.0;
  ReductionOptions reduction{};

  void validate() const;
};

/// A truncated series value and a rigorous majorant of the omitted tail.
struct ZetaValue {
  std::complex<double> value;
  double tail_bound = 0.0;
};

/// det(Id - Ad(m a)|_nbar) = prod_j (1 - e^{-l + i theta_j})(1 - e^{-l - i theta_j}).
double det_term(const GroupData& gd, double length, std::span<const double> angles);

/// tr(chi(gamma) (x) sigma(m_gamma)) e^{-|rho| l} / det_term.
std::complex<double> L_sym(const GroupData& gd, const ClassPower& cp, const Character& sigma);

/// Powers of a length spectrum up to lmax together with the constants of
/// the tail majorant. Shared between series with different M-characters.
struct PowerTable {
  PowerTable(const LengthSpectrum& ls, double lmax);

  GroupData gd;
  double lmax = 0.0;
  std::vector<ClassPower> powers;
  std::vector<double> det;
  bool empty = true;
  /// Twist growth exponent: max log||chi(gamma_0)|| / l0.
  double k = 0.0;
  /// Growth exponent 2|rho| and the constant C' with N(R) <= C' e^{2|rho| R}.
  double h = 0.0;
  double c_prime = 0.0;
  /// Lower bound of det_term over all powers: (1 - e^{-systole})^{2n}.
  double det_min = 1.0;
  int dim_chi = 1;
};

class ZetaSeries {
 public:
  ZetaSeries(std::shared_ptr<const PowerTable> table, Character sigma, TruncationPolicy tp = {});
  ZetaSeries(const LengthSpectrum& ls, const Weight& sigma, TruncationPolicy tp = {});

  /// log Z(s) = -sum (1/j) tr(chi (x) sigma) e^{-(s+|rho|) l} / det.
  ZetaValue selberg_log(std::complex<double> s) const;
  /// log R(s) = (-1)^d sum (1/j) tr(chi (x) sigma) e^{-s l}.
  ZetaValue ruelle_log(std::complex<double> s) const;
  /// L(s) = sum l0 L_sym e^{-s l}.
  ZetaValue log_derivative(std::complex<double> s) const;

  double selberg_abscissa() const;
  double ruelle_abscissa() const;

  const PowerTable& table() const { return *table_; }
  const Character& sigma() const { return sigma_; }

 private:
  enum class Kind { selberg, ruelle, derivative };
  ZetaValue evaluate(Kind kind, std::complex<double> s) const;

  std::shared_ptr<const PowerTable> table_;
  Character sigma_;
  TruncationPolicy tp_;
  std::vector<std::complex<double>> twisted_trace_;
};

ZetaValue selberg_log(std::complex<double> s, const Weight& sigma, const LengthSpectrum& ls,
                      const TruncationPolicy& tp = {});
ZetaValue ruelle_log(std::complex<double> s, const Weight& sigma, const LengthSpectrum& ls,
                     const TruncationPolicy& tp = {});
ZetaValue log_derivative(std::complex<double> s, const Weight& sigma, const LengthSpectrum& ls,
                         const TruncationPolicy& tp = {});

/// Abscissa of the Selberg series: 2|rho| + c1 with c1 = k - |rho|, k the
/// certified twist growth. Minus infinity for an empty spectrum.
double abscissa_estimate(const LengthSpectrum& ls, const Weight& sigma);
double ruelle_abscissa_estimate(const LengthSpectrum& ls, const Weight& sigma);

/// Factorization of R through the Z_p.
class RuelleFactorization {
 public:
  RuelleFactorization(const LengthSpectrum& ls, const Weight& sigma, TruncationPolicy tp = {});

  /// log Z_p(s) = sum_{(psi, p)} log Z(s + |rho| - p; psi (x) sigma).
  ZetaValue z_p_log(std::complex<double> s, int p) const;
  /// sum_p (-1)^p log Z_p(s).
  ZetaValue ruelle_log(std::complex<double> s) const;

 private:
  GroupData gd_;
  std::vector<std::vector<ZetaSeries>> factors_;
};

ZetaValue z_p_log(std::complex<double> s, int p, const Weight& sigma, const LengthSpectrum& ls,
                  const TruncationPolicy& tp = {});
ZetaValue ruelle_factorized_log(std::complex<double> s, const Weight& sigma, const LengthSpectrum& ls,
                                const TruncationPolicy& tp = {});

}  // namespace zetaflow
