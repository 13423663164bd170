#pragma once

// The two sides of the trace formula: the spectral heat trace of an
// eigenvalue list and the geometric heat trace (identity plus hyperbolic
// contributions) of a length spectrum.

#include <complex>
#include <vector>

#include "zetaflow/repr.hpp"
#include "zetaflow/spectrum.hpp"
#include "zetaflow/zeta.hpp"

namespace zetaflow {

/// sum_k m_k e^{-t t_k}.
std::complex<double> spectral_heat_trace(const EigenSpectrum& es, double t);

/// int_R e^{-t lambda^2} P(i lambda) d lambda.
std::complex<double> plancherel_heat_integral(const PlancherelPolynomial& p, double t);

/// Degree above which plancherel_heat_integral switches to Gauss-Hermite.
inline constexpr std::size_t kClosedFormMaxDegree = 40;

struct HeatEvaluation {
  double t = 0.0;
  std::complex<double> identity_part;
  std::complex<double> hyperbolic_part;
  std::complex<double> total;
};

/// Geometric side with the class data precomputed; cheap to evaluate at
/// many t.
class GeometricHeatTrace {
 public:
  GeometricHeatTrace(const LengthSpectrum& ls, const Weight& sigma, const TruncationPolicy& tp = {});

  HeatEvaluation operator()(double t) const;
  /// d/dt of the hyperbolic part.
  std::complex<double> hyperbolic_derivative(double t) const;

  const PlancherelPolynomial& plancherel() const { return plancherel_; }
  double identity_scale() const { return identity_scale_; }

 private:
  PlancherelPolynomial plancherel_;
  double identity_scale_ = 0.0;
  // Ascending lengths and the weights l0 L_sym of the powers.
  std::vector<double> lengths_;
  std::vector<std::complex<double>> weights_;
  ReductionOptions reduction_;
};

HeatEvaluation geometric_heat_trace(const LengthSpectrum& ls, const Weight& sigma, double t,
                                    const TruncationPolicy& tp = {});

}  // namespace zetaflow
