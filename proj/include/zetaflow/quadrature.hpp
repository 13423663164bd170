#pragma once

#include <complex>
#include <functional>

namespace zetaflow {

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;
  /// Integration window in x for half-line rules; the integrand must be
  /// finite on it and negligible outside.
  double x_min = 1e-100;
  double x_max = 1e100;
  int max_levels = 12;
};

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  int evaluations = 0;
};

/// int_0^inf f(x) dx with x = exp((pi/2) sinh u) and the trapezoidal rule
/// in u, halving the step until successive estimates agree. Throws
/// QuadratureError on non-convergence or a non-finite sample.
QuadratureResult integrate_half_line(const std::function<std::complex<double>(double)>& f,
                                     const QuadratureOptions& options = {});

/// Adaptive Gauss-Kronrod (7/15) along the straight segment a -> b.
QuadratureResult integrate_segment(
    const std::function<std::complex<double>(std::complex<double>)>& f, std::complex<double> a,
    std::complex<double> b, double rel_tol = 1e-12);

}  // namespace zetaflow
