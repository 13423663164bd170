#include "zetaflow/heat.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "zetaflow/error.hpp"
#include "zetaflow/summation.hpp"

namespace zetaflow {

namespace {

void require_positive_t(double t) {
  if (!(t > 0 && std::isfinite(t))) throw ValidationError("t must be positive and finite");
}

struct HermiteRule {
  std::vector<double> nodes, weights;
};

// 200-point Gauss-Hermite rule: Golub-Welsch nodes.
const HermiteRule& hermite_rule() {
  static const HermiteRule rule = [] {
    constexpr int n = 200;
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
    HermiteRule r;
    // Christoffel weights 1 / sum_k p_k(x)^2, p_k orthonormal.
    for (int i = 0; i < n; ++i) {
      const double x = es.eigenvalues()(i);
      double prev = 0.0, cur = std::pow(std::numbers::pi, -0.25), sum = cur * cur;
      for (int k = 0; k + 1 < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(k / (k + 1.0)) * prev;
        prev = cur;
        cur = next;
        sum += cur * cur;
      }
      r.nodes.push_back(x);
      r.weights.push_back(1.0 / sum);
    }
    return r;
  }();
  return rule;
}

// e^{-l^2/4t} below 1e-18 past this length.
double gaussian_cutoff(double t) { return std::sqrt(4.0 * t * 18.0 * std::log(10.0)); }

}  // namespace

std::complex<double> spectral_heat_trace(const EigenSpectrum& es, double t) {
  require_positive_t(t);
  CompensatedSum sum;
  for (const auto& e : es.entries()) sum.add(static_cast<double>(e.m) * std::exp(-t * e.t));
  return sum.value();
}

std::complex<double> plancherel_heat_integral(const PlancherelPolynomial& p, double t) {
  require_positive_t(t);
  const auto& a = p.even_coeffs();
  if (p.degree() <= kClosedFormMaxDegree) {
    CompensatedSum sum;
    for (std::size_t m = 0; m < a.size(); ++m) {
      const double moment = std::exp(std::lgamma(m + 0.5) - (m + 0.5) * std::log(t));
      sum.add(a[m] * (m % 2 ? -moment : moment));
    }
    return sum.value();
  }
  // int e^{-t lambda^2} P(i lambda) = t^{-1/2} int e^{-x^2} P(i x / sqrt t).
  const HermiteRule& rule = hermite_rule();
  const double scale = 1.0 / std::sqrt(t);
  CompensatedSum sum;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum.add(rule.weights[i] * p(std::complex<double>(0.0, rule.nodes[i] * scale)));
  return scale * sum.value();
}

GeometricHeatTrace::GeometricHeatTrace(const LengthSpectrum& ls, const Weight& sigma, const TruncationPolicy& tp)
    : reduction_(tp.reduction) {
  tp.validate();
  const GroupData& gd = ls.group();
  validate_m_weight(gd, sigma);
  plancherel_ = plancherel_polynomial(gd, sigma);
  identity_scale_ = ls.dim_chi() * ls.volume();
  const Character sc(sigma, RootType::D);
  for (const auto& p : powers_up_to(ls, tp.lmax)) {
    lengths_.push_back(p.length);
    weights_.push_back(p.l0 * L_sym(gd, p, sc));
  }
}

HeatEvaluation GeometricHeatTrace::operator()(double t) const {
  require_positive_t(t);
  HeatEvaluation h;
  h.t = t;
  h.identity_part = identity_scale_ * plancherel_heat_integral(plancherel_, t);
  const auto count = static_cast<std::size_t>(
      std::upper_bound(lengths_.begin(), lengths_.end(), gaussian_cutoff(t)) - lengths_.begin());
  const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
  h.hyperbolic_part = reduce_terms(
      count,
      [&](std::size_t i) { return weights_[i] * std::exp(-lengths_[i] * lengths_[i] / (4.0 * t)) * norm; },
      reduction_);
  h.total = h.identity_part + h.hyperbolic_part;
  return h;
}

std::complex<double> GeometricHeatTrace::hyperbolic_derivative(double t) const {
  require_positive_t(t);
  const auto count = static_cast<std::size_t>(
      std::upper_bound(lengths_.begin(), lengths_.end(), gaussian_cutoff(t)) - lengths_.begin());
  const double norm = 1.0 / std::sqrt(4.0 * std::numbers::pi * t);
  return reduce_terms(
      count,
      [&](std::size_t i) {
        const double l2 = lengths_[i] * lengths_[i];
        return weights_[i] * std::exp(-l2 / (4.0 * t)) * norm * (l2 / (4.0 * t * t) - 0.5 / t);
      },
      reduction_);
}

HeatEvaluation geometric_heat_trace(const LengthSpectrum& ls, const Weight& sigma, double t,
                                    const TruncationPolicy& tp) {
  return GeometricHeatTrace(ls, sigma, tp)(t);
}

}  // namespace zetaflow
