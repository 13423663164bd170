#include "zetaflow/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "zetaflow/error.hpp"
#include "zetaflow/summation.hpp"

namespace zetaflow {

QuadratureResult integrate_half_line(const std::function<std::complex<double>(double)>& f,
                                     const QuadratureOptions& options) {
  using std::numbers::pi;
  const double u_lo = std::asinh(std::log(options.x_min) / (pi / 2));
  const double u_hi = std::asinh(std::log(options.x_max) / (pi / 2));

  int evaluations = 0;
  auto sample = [&](double u) {
    const double x = std::exp((pi / 2) * std::sinh(u));
    const double jac = x * (pi / 2) * std::cosh(u);
    const std::complex<double> v = f(x) * jac;
    ++evaluations;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream os;
      os << "integrand is not finite at x=" << x;
      throw QuadratureError(os.str());
    }
    return v;
  };

  double h = 0.5;
  CompensatedSum sum;
  for (double u = std::ceil(u_lo / h) * h; u <= u_hi; u += h) sum.add(sample(u));
  std::complex<double> estimate = h * sum.value();

  for (int level = 1; level <= options.max_levels; ++level) {
    // Add the midpoints of the previous grid.
    const double step = h;
    h *= 0.5;
    for (double u = std::ceil((u_lo - h) / step) * step + h; u <= u_hi; u += step) sum.add(sample(u));
    const std::complex<double> next = h * sum.value();
    const double err = std::abs(next - estimate);
    estimate = next;
    if (level >= 3 && err <= std::max(options.rel_tol * std::abs(next), options.abs_tol))
      return {next, err, evaluations};
  }
  std::ostringstream os;
  os << "half-line quadrature did not reach rel_tol=" << options.rel_tol << " after "
     << options.max_levels << " refinements";
  throw QuadratureError(os.str());
}

QuadratureResult integrate_segment(
    const std::function<std::complex<double>(std::complex<double>)>& f, std::complex<double> a,
    std::complex<double> b, double rel_tol) {
  const std::complex<double> span = b - a;
  int evaluations = 0;
  auto g = [&](double t) {
    ++evaluations;
    return f(a + t * span) * span;
  };
  double err = 0.0, l1 = 0.0;
  std::complex<double> value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, 0.0, 1.0, 15, rel_tol, &err, &l1);
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag()))
    throw QuadratureError("segment quadrature produced a non-finite value");
  if (err > std::max(1e3 * rel_tol * l1, 1e-300)) {
    std::ostringstream os;
    os << "segment quadrature error estimate " << err << " exceeds tolerance";
    throw QuadratureError(os.str());
  }
  return {value, err, evaluations};
}

}  // namespace zetaflow
