#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "zetaflow/cli.hpp"
#include "zetaflow/continuation.hpp"
#include "zetaflow/error.hpp"

namespace zetaflow::cli {

using cd = std::complex<double>;

namespace {

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

std::vector<cd> anchors(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> re(1.0, 3.0), im(-1.0, 1.0);
  std::vector<cd> s;
  while (static_cast<int>(s.size()) < n) {
    const cd z(re(rng), im(rng));
    bool ok = true;
    for (const cd& w : s) ok = ok && std::abs(w * w - z * z) >= 0.1;
    if (ok) s.push_back(z);
  }
  return s;
}

std::vector<VerifyCheck> lemma6(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ev(0.5, 3.0);
  double matrix = 0.0, moments = 0.0, slope_gap = 0.0;
  for (int n = 2; n <= 6; ++n) {
    const auto s = anchors(rng, n);
    const auto c = partial_fraction_coeffs(AnchorSet(s));
    Eigen::MatrixXcd v(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) v(i, j) = {u(rng), u(rng)};
    v += 3.0 * Eigen::MatrixXcd::Identity(5, 5);
    Eigen::VectorXcd diag(5);
    for (int i = 0; i < 5; ++i) diag(i) = {ev(rng), 0.5 * u(rng)};
    const Eigen::MatrixXcd a = v * diag.asDiagonal() * v.inverse();
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(5, 5), sum = Eigen::MatrixXcd::Zero(5, 5);
    for (int i = 0; i < n; ++i) {
      const Eigen::MatrixXcd r = (a + s[i] * s[i] * Eigen::MatrixXcd::Identity(5, 5)).inverse();
      prod = prod * r;
      sum += c[i] * r;
    }
    matrix = std::max(matrix, (prod - sum).norm());
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 6;
    const auto s = anchors(rng, n);
    const AnchorSet a(s);
    const auto c = partial_fraction_coeffs(a);
    for (int l = 0; l <= n - 2; ++l) {
      double scale = 0.0;
      for (int i = 0; i < n; ++i) scale += std::abs(std::pow(s[i] * s[i], l) * c[i]);
      moments = std::max(moments, std::abs(moment_sum(a, l)) / scale);
    }
  }
  for (int n : {3, 4, 5}) {
    const AnchorSet a(anchors(rng, n));
    const double slope = std::log10(std::abs(small_t_combination(a, 1e-3)) / std::abs(small_t_combination(a, 1e-4)));
    slope_gap = std::max(slope_gap, (n - 1) - slope);
  }
  return {{"lemma6", "resolvent_identity_frobenius", matrix, 1e-9},
          {"lemma6", "moment_vanishing_relative", moments, 1e-9},
          {"lemma6", "small_t_slope_deficit", slope_gap, 0.1}};
}

std::vector<VerifyCheck> identities() {
  double heat = 0.0;
  for (cd s : {cd(1.0), cd(2.0), cd(2.0, 1.0), cd(3.0, -1.0), cd(0.5)})
    for (double l : {0.2, 0.5, 1.0, 2.0, 5.0}) {
      const auto r = heat_resolvent_identity(s, l);
      heat = std::max(heat, rel(r.lhs, r.rhs));
    }
  const auto one = cauchy_plancherel_identity(cd(2.0), PlancherelPolynomial({cd(1.0)}));
  double quadratic = 0.0;
  for (cd s : {cd(1.0), cd(2.0, 0.5), cd(0.7, -1.2)}) {
    const auto r = cauchy_plancherel_identity(s, PlancherelPolynomial({cd(0.0), cd(1.0)}));
    quadratic = std::max(quadratic, rel(r.lhs, r.rhs));
  }
  return {{"identities", "heat_resolvent_relative", heat, 1e-7},
          {"identities", "cauchy_plancherel_constant", std::abs(one.lhs - std::numbers::pi / 2), 1e-10},
          {"identities", "cauchy_plancherel_quadratic_relative", quadratic, 1e-6}};
}

std::vector<VerifyCheck> trace(std::uint64_t seed, const ReductionOptions& reduction) {
  TruncationPolicy tp;
  tp.reduction = reduction;
  const Weight zero = Weight::parse("0");
  const auto ls = synthesize(GroupData::for_dimension(3), 200, 0.4, seed, 2, 1.0);
  double worst = 0.0;
  for (const auto& s : {std::vector<cd>{2.0, 3.0}, std::vector<cd>{cd(2.0, 0.5), 3.0, cd(4.0, -1.0)}}) {
    const AnchorSet a(s);
    worst = std::max(worst, rel(resolvent_trace_via_heat(ls, zero, a, tp), resolvent_trace_geometric(ls, zero, a, tp)));
  }
  return {{"trace", "two_route_resolvent_relative", worst, 1e-5}};
}

std::vector<VerifyCheck> residues(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-2.0, 10.0), im(-3.0, 3.0);
  std::uniform_int_distribution<int> mult(1, 4), count(1, 4);
  const auto p = plancherel_polynomial(GroupData::for_dimension(5), Weight::parse("1,0"));
  double residual = 0.0, mismatches = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<EigenEntry> entries;
    if (trial == 0) entries.push_back({0.0, mult(rng)});
    const std::size_t want = entries.size() + count(rng);
    while (entries.size() < want) {
      const cd t(re(rng), im(rng));
      const cd r = std::sqrt(t);
      bool ok = std::abs(t) > 0.5;
      for (const auto& e : entries) {
        const cd q = std::sqrt(e.t);
        ok = ok && std::abs(q - r) > 0.3 && std::abs(q + r) > 0.3;
      }
      if (ok) entries.push_back({t, mult(rng)});
    }
    const ContinuedL cl(EigenSpectrum(entries), p, 2, 1.7);
    for (const cd& z : cl.singularities()) {
      const auto r = residue_order(cl, z);
      residual = std::max(residual, r.residual);
      if (r.order != cl.expected_order(z)) mismatches += 1;
    }
  }
  return {{"residues", "order_mismatches", mismatches, 0.5}, {"residues", "raw_residual", residual, 1e-6}};
}

std::vector<VerifyCheck> factorization(std::uint64_t seed, const ReductionOptions& reduction) {
  TruncationPolicy tp;
  tp.reduction = reduction;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ul(0.2, 2.5), ut(0.0, 2 * std::numbers::pi);
  double per_class = 0.0, series = 0.0;
  for (int d : {3, 5}) {
    const GroupData gd = GroupData::for_dimension(d);
    std::vector<std::vector<ExteriorComponent>> parts;
    for (int p = 0; p < d; ++p) parts.push_back(exterior_decomposition(gd, p));
    for (int trial = 0; trial < 500; ++trial) {
      const double l = ul(rng);
      std::vector<double> a(gd.n);
      for (double& x : a) x = ut(rng);
      cd det_n = 1.0;
      for (double t : a) det_n *= (1.0 - std::exp(cd(l, t))) * (1.0 - std::exp(cd(l, -t)));
      cd sum = 0.0;
      for (int p = 0; p < d; ++p)
        for (const auto& c : parts[p]) sum += (p % 2 ? -1.0 : 1.0) * std::exp(p * l) * Character(c.psi, RootType::D)(a);
      per_class = std::max(per_class, std::abs(sum / det_n - 1.0));
    }
    const auto ls = synthesize(gd, 100, 0.7, seed + d, 2, 1.2);
    const Weight sigma = Weight::zero(gd.n);
    const ZetaSeries direct(ls, sigma, tp);
    const RuelleFactorization factored(ls, sigma, tp);
    for (int k = 0; k < 5; ++k) {
      const cd s(2.0 * gd.rho_norm + 3.0 + 0.5 * k, 1.5 - 0.75 * k);
      series = std::max(series, std::abs(direct.ruelle_log(s).value - factored.ruelle_log(s).value));
    }
  }
  return {{"factorization", "per_class_identity", per_class, 1e-12},
          {"factorization", "ruelle_vs_product", series, 1e-8}};
}

}  // namespace

std::vector<VerifyCheck> run_verify_suite(std::string_view suite, std::uint64_t seed,
                                          const ReductionOptions& reduction) {
  const std::vector<std::pair<std::string_view, std::function<std::vector<VerifyCheck>()>>> suites{
      {"lemma6", [&] { return lemma6(seed); }},
      {"identities", [] { return identities(); }},
      {"trace", [&] { return trace(seed, reduction); }},
      {"residues", [&] { return residues(seed); }},
      {"factorization", [&] { return factorization(seed, reduction); }},
  };
  std::vector<VerifyCheck> out;
  bool known = false;
  for (const auto& [name, fn] : suites)
    if (suite == "all" || suite == name) {
      known = true;
      const auto checks = fn();
      out.insert(out.end(), checks.begin(), checks.end());
    }
  if (!known) throw ValidationError("unknown verify suite '" + std::string(suite) + "'");
  return out;
}

}  // namespace zetaflow::cli
