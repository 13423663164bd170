#include "zetaflow/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "zetaflow/error.hpp"
#include "zetaflow/summation.hpp"

namespace zetaflow {

using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

bool finite(cd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double point_segment_distance(cd p, cd a, cd b) {
  const cd ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  const double u = std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + u * ab));
}

}  // namespace

AnchorSet::AnchorSet(std::vector<cd> s) : s_(std::move(s)) {
  if (s_.size() < 2) throw ValidationError("an anchor set needs at least two points");
  double scale = 0.0;
  for (const cd& z : s_) {
    if (!finite(z)) throw ValidationError("anchor points must be finite");
    scale = std::max(scale, std::abs(z * z));
  }
  for (std::size_t i = 0; i < s_.size(); ++i)
    for (std::size_t j = i + 1; j < s_.size(); ++j)
      if (std::abs(s_[i] * s_[i] - s_[j] * s_[j]) <= 1e-13 * std::max(1.0, scale)) {
        std::ostringstream os;
        os << "anchor squares coincide: s[" << i << "] = " << s_[i] << ", s[" << j << "] = " << s_[j];
        throw ValidationError(os.str());
      }
}

std::vector<cd> partial_fraction_coeffs(const AnchorSet& a) {
  const auto& s = a.s();
  std::vector<cd> c(s.size(), 1.0);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j)
      if (j != i) c[i] /= s[j] * s[j] - s[i] * s[i];
  return c;
}

cd moment_sum(const AnchorSet& a, int l) {
  if (l < 0 || l > static_cast<int>(a.size()) - 1) throw ValidationError("moment index out of range");
  const auto c = partial_fraction_coeffs(a);
  CompensatedSum sum;
  for (std::size_t i = 0; i < c.size(); ++i) sum.add(std::pow(a.s()[i] * a.s()[i], l) * c[i]);
  return sum.value();
}

cd small_t_combination(const AnchorSet& a, double t) {
  if (!(t > 0 && std::isfinite(t))) throw ValidationError("t must be positive and finite");
  const auto& s = a.s();
  const std::size_t n = s.size();
  std::vector<cd> x(n);
  double xmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = s[i] * s[i];
    xmax = std::max(xmax, std::abs(x[i]));
  }

  if (t * xmax > 2.0) {
    const auto c = partial_fraction_coeffs(a);
    CompensatedSum sum;
    for (std::size_t i = 0; i < n; ++i) sum.add(c[i] * std::exp(-t * x[i]));
    return sum.value();
  }

  // sum_m (-1)^m t^{m+N-1} h_m(x) / (m+N-1)!, h_m complete homogeneous.
  constexpr int kMaxTerms = 200;
  std::vector<cd> h(kMaxTerms, 0.0);
  h[0] = 1.0;
  for (std::size_t k = 0; k < n; ++k)
    for (int m = 1; m < kMaxTerms; ++m) h[m] += x[k] * h[m - 1];
  const int base = static_cast<int>(n) - 1;
  double lead = std::exp(base * std::log(t) - std::lgamma(base + 1.0));
  CompensatedSum sum;
  for (int m = 0; m < kMaxTerms; ++m) {
    const cd term = (m % 2 ? -lead : lead) * h[m];
    sum.add(term);
    if (m > 4 && std::abs(term) < 1e-18 * std::abs(sum.value())) break;
    lead *= t / (m + base + 1);
  }
  return sum.value();
}

IdentityCheck heat_resolvent_identity(cd s, double l, const QuadratureOptions& options) {
  if (!((s * s).real() > 0)) throw ValidationError("heat-resolvent identity needs Re(s^2) > 0");
  if (!(l > 0 && std::isfinite(l))) throw ValidationError("l must be positive");
  const cd s2 = s * s;
  auto f = [&](double t) -> cd {
    const double g = std::exp(-l * l / (4.0 * t));
    if (g == 0.0) return 0.0;
    return std::exp(-t * s2) * g / std::sqrt(4.0 * kPi * t);
  };
  const auto q = integrate_half_line(f, options);
  return {q.value, std::exp(-s * l) / (2.0 * s)};
}

cd cauchy_plancherel_rhs(cd s, const PlancherelPolynomial& p) { return kPi / s * p(s); }

CauchyPlancherelCheck cauchy_plancherel_identity(cd s, const PlancherelPolynomial& p) {
  if (!(s.real() > 0)) throw ValidationError("Cauchy-Plancherel identity needs Re(s) > 0");
  // R(u) = P(i sqrt u) = sum_m a_{2m} (-u)^m, divided by (u + s^2).
  const auto& a = p.even_coeffs();
  std::vector<cd> r(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) r[m] = (m % 2 ? -1.0 : 1.0) * a[m];
  const cd root = -s * s;
  std::vector<cd> q(r.empty() ? 0 : r.size() - 1);
  cd carry = 0.0;
  for (std::size_t k = r.size(); k-- > 0;) {
    carry = r[k] + root * carry;
    if (k > 0) q[k - 1] = carry;
  }
  const cd remainder = carry;

  auto poly = [](const std::vector<cd>& c, cd u) {
    cd v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * u + c[k];
    return v;
  };
  auto subtracted = [&](cd lam) {
    const cd u = lam * lam;
    return poly(r, u) / (u + s * s) - poly(q, u);
  };
  const double cut = 10.0 * std::max(1.0, std::abs(s));
  const cd head = integrate_segment(subtracted, 0.0, cut, 1e-12).value;
  QuadratureOptions tail_opts;
  tail_opts.rel_tol = 1e-12;
  const cd tail =
      integrate_half_line([&](double x) { return remainder / ((cut + x) * (cut + x) + s * s); }, tail_opts).value;
  return {2.0 * (head + tail), cauchy_plancherel_rhs(s, p), std::move(q)};
}

cd resolvent_trace_spectral(const EigenSpectrum& es, const AnchorSet& a) {
  CompensatedSum sum;
  for (const auto& e : es.entries()) {
    cd prod = static_cast<double>(e.m);
    for (const cd& s : a.s()) {
      const cd den = e.t + s * s;
      if (std::abs(den) <= 1e-14 * std::max(1.0, std::abs(e.t))) {
        std::ostringstream os;
        os << "anchor s = " << s << " hits the pole t = " << e.t;
        throw DomainError(os.str());
      }
      prod /= den;
    }
    sum.add(prod);
  }
  return sum.value();
}

cd resolvent_trace_geometric(const LengthSpectrum& ls, const Weight& sigma, const AnchorSet& a,
                             const TruncationPolicy& tp) {
  for (const cd& s : a.s())
    if (!((s * s).real() > 0)) throw ValidationError("anchors need Re(s^2) > 0");
  const ZetaSeries series(ls, sigma, tp);
  const PlancherelPolynomial p = plancherel_polynomial(ls.group(), sigma);
  const double scale = ls.dim_chi() * ls.volume();
  const auto c = partial_fraction_coeffs(a);
  CompensatedSum sum;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const cd s = a.s()[i];
    sum.add(c[i] * (scale * cauchy_plancherel_rhs(s, p) + series.log_derivative(s).value / (2.0 * s)));
  }
  return sum.value();
}

QuadratureOptions heat_quadrature_defaults() {
  QuadratureOptions o;
  o.rel_tol = 1e-10;
  o.x_min = 1e-40;
  o.x_max = 1e100;
  o.max_levels = 14;
  return o;
}

cd resolvent_trace_via_heat(const LengthSpectrum& ls, const Weight& sigma, const AnchorSet& a,
                            const TruncationPolicy& tp, const QuadratureOptions& options) {
  const int d = ls.group().d;
  if (2 * static_cast<int>(a.size()) <= d) {
    std::ostringstream os;
    os << "heat-route resolvent trace needs N > d/2 for integrability at t = 0 (N = " << a.size() << ", d = " << d
       << ")";
    throw DomainError(os.str());
  }
  for (const cd& s : a.s())
    if (!((s * s).real() > 0)) throw ValidationError("anchors need Re(s^2) > 0");
  const GeometricHeatTrace heat(ls, sigma, tp);
  auto f = [&](double t) -> cd {
    const cd w = small_t_combination(a, t);
    if (w == cd(0.0)) return 0.0;
    return w * heat(t).total;
  };
  return integrate_half_line(f, options).value;
}

cd spectral_sqrt(cd t) {
  if (t.imag() == 0.0 && t.real() < 0.0) return {0.0, std::sqrt(-t.real())};
  return std::sqrt(t);
}

ContinuedL::ContinuedL(EigenSpectrum spectrum, PlancherelPolynomial p, int dim_chi, double volume)
    : spectrum_(std::move(spectrum)), p_(std::move(p)), dim_chi_(dim_chi), volume_(volume) {
  if (dim_chi < 1) throw ValidationError("dim_chi must be positive");
  if (!(volume > 0 && std::isfinite(volume))) throw ValidationError("volume must be positive");
}

cd ContinuedL::operator()(cd s) const {
  if (!finite(s)) throw ValidationError("s must be finite");
  CompensatedSum sum;
  const cd s2 = s * s;
  for (const auto& e : spectrum_.entries()) {
    const cd den = s2 + e.t;
    if (std::abs(den) <= 1e-15 * std::max(1.0, std::abs(e.t))) {
      std::ostringstream os;
      os << "continued L has a pole at s = " << s << " (t_k = " << e.t << ")";
      throw DomainError(os.str());
    }
    sum.add(static_cast<double>(e.m) / den);
  }
  return 2.0 * s * sum.value() - 2.0 * kPi * dim_chi_ * volume_ * p_(s);
}

std::vector<cd> ContinuedL::singularities() const {
  std::vector<cd> out;
  auto add = [&](cd z) {
    for (const cd& w : out)
      if (std::abs(w - z) <= 1e-12 * std::max(1.0, std::abs(z))) return;
    out.push_back(z);
  };
  for (const auto& e : spectrum_.entries()) {
    if (e.t == cd(0.0)) {
      add(0.0);
    } else {
      const cd r = spectral_sqrt(e.t);
      add(cd(0.0, 1.0) * r);
      add(cd(0.0, -1.0) * r);
    }
  }
  return out;
}

int ContinuedL::expected_order(cd point) const {
  int order = 0;
  for (const auto& e : spectrum_.entries()) {
    if (e.t == cd(0.0)) {
      if (std::abs(point) <= 1e-12) order += 2 * e.m;
      continue;
    }
    const cd r = spectral_sqrt(e.t);
    for (const cd& z : {cd(0.0, 1.0) * r, cd(0.0, -1.0) * r})
      if (std::abs(point - z) <= 1e-12 * std::max(1.0, std::abs(z))) order += e.m;
  }
  return order;
}

ResidueResult residue_order(const ContinuedL& cl, cd point) {
  const auto sing = cl.singularities();
  const cd* centre = nullptr;
  for (const cd& z : sing)
    if (std::abs(z - point) <= 1e-6 && (!centre || std::abs(z - point) < std::abs(*centre - point))) centre = &z;
  if (!centre) {
    std::ostringstream os;
    os << "no singularity of L within 1e-6 of " << point;
    throw DomainError(os.str());
  }
  double gap = std::numeric_limits<double>::infinity();
  for (const cd& z : sing)
    if (&z != centre) gap = std::min(gap, std::abs(z - *centre));
  const double radius = std::isfinite(gap) ? 0.5 * gap : 1.0;

  constexpr int kNodes = 64;
  CompensatedSum sum;
  for (int k = 0; k < kNodes; ++k) {
    const cd dz = std::polar(radius, 2.0 * kPi * k / kNodes);
    sum.add(cl(*centre + dz) * dz);
  }
  ResidueResult r;
  r.raw = sum.value() / static_cast<double>(kNodes);
  r.order = static_cast<int>(std::lround(r.raw.real()));
  r.residual = std::abs(r.raw - cd(r.order));
  return r;
}

PathIntegrand path_integrand(const ContinuedL& cl) {
  return {[&cl](cd s) { return cl(s); }, cl.singularities()};
}

cd log_zeta_ratio(cd s0, cd s1, const PathIntegrand& L, const std::vector<cd>& vertices) {
  std::vector<cd> pts{s0};
  pts.insert(pts.end(), vertices.begin(), vertices.end());
  pts.push_back(s1);
  for (const cd& p : pts)
    if (!finite(p)) throw ValidationError("path points must be finite");
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    for (const cd& z : L.singularities)
      if (point_segment_distance(z, pts[i], pts[i + 1]) < kPathClearance) {
        std::ostringstream os;
        os << "path segment " << pts[i] << " -> " << pts[i + 1] << " passes within " << kPathClearance
           << " of the singularity " << z;
        throw DomainError(os.str());
      }
  CompensatedSum sum;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (pts[i] != pts[i + 1]) sum.add(integrate_segment(L.f, pts[i], pts[i + 1], 1e-12).value);
  return sum.value();
}

}  // namespace zetaflow
