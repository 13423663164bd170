#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "test_support.hpp"
#include "zetaflow/continuation.hpp"
#include "zetaflow/error.hpp"

using namespace zetaflow;
using cd = std::complex<double>;
using std::numbers::pi;

namespace {

EigenSpectrum make_spectrum(const std::vector<std::pair<cd, int>>& raw) {
  std::vector<EigenEntry> entries;
  for (const auto& [t, m] : raw) entries.push_back({t, m});
  return EigenSpectrum(entries);
}

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("anchor validation") {
  CHECK_THROWS_AS(AnchorSet({cd(1.0)}), ValidationError);
  CHECK_THROWS_AS(AnchorSet({cd(1.0), cd(-1.0)}), ValidationError);
  CHECK_THROWS_AS(AnchorSet({cd(2.0), cd(2.0)}), ValidationError);
  CHECK_NOTHROW(AnchorSet({cd(1.0), cd(2.0)}));
}

TEST_CASE("partial fraction coefficients") {
  const AnchorSet a({cd(1.0), cd(2.0)});
  const auto c = partial_fraction_coeffs(a);
  CHECK(std::abs(c[0] - 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(c[1] + 1.0 / 3.0) < 1e-15);
  CHECK(std::abs(c[0] / 2.0 + c[1] / 5.0 - 0.1) < 1e-15);

  std::mt19937_64 rng(61);
  for (int n = 2; n <= 6; ++n)
    for (int trial = 0; trial < 3; ++trial) {
      const auto s = test_support::random_anchors(rng, n);
      CHECK(test_support::resolvent_matrix_error(rng, s, partial_fraction_coeffs(AnchorSet(s))) < 1e-9);
    }
}

TEST_CASE("moment sums") {
  const AnchorSet a({cd(1.0), cd(2.0), cd(3.0)});
  CHECK(std::abs(moment_sum(a, 0)) < 1e-16);
  CHECK(std::abs(moment_sum(a, 1)) < 1e-16);
  CHECK(std::abs(moment_sum(a, 2)) > 0.1);
  CHECK_THROWS_AS(moment_sum(a, 3), ValidationError);
  CHECK_THROWS_AS(moment_sum(a, -1), ValidationError);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 6;
    const auto s = test_support::random_anchors(rng, n);
    const AnchorSet as(s);
    const auto c = partial_fraction_coeffs(as);
    for (int l = 0; l <= n - 2; ++l) {
      double scale = 0.0;
      for (int i = 0; i < n; ++i) scale += std::abs(std::pow(s[i] * s[i], l) * c[i]);
      CHECK(std::abs(moment_sum(as, l)) < 1e-9 * scale);
    }
  }
}

TEST_CASE("small-t combination") {
  const AnchorSet two({cd(1.0), cd(2.0)});
  for (double t : {1e-6, 1e-3, 0.1, 1.0, 5.0}) {
    const double exact = -std::exp(-t) * std::expm1(-3 * t) / 3.0;
    CHECK(std::abs(small_t_combination(two, t) - exact) < 1e-13 * std::abs(exact));
  }
  CHECK(std::abs(small_t_combination(two, 1e-12)) < 1e-11);

  std::mt19937_64 rng(17);
  for (int n : {3, 4, 5}) {
    const AnchorSet a(test_support::random_anchors(rng, n));
    const double t0 = 1e-4, t1 = 1e-3;
    const double slope =
        std::log10(std::abs(small_t_combination(a, t1)) / std::abs(small_t_combination(a, t0))) / std::log10(t1 / t0);
    CHECK(slope >= n - 1 - 0.1);
  }
  CHECK_THROWS_AS(small_t_combination(two, 0.0), ValidationError);
}

TEST_CASE("heat-resolvent identity") {
  const auto one = heat_resolvent_identity(cd(1.0), 1.0);
  CHECK(std::abs(one.rhs - std::exp(-1.0) / 2.0) < 1e-16);
  CHECK(std::abs(one.lhs - one.rhs) < 1e-8);
  for (cd s : {cd(1.0), cd(2.0), cd(2.0, 1.0), cd(3.0, -1.0), cd(0.5)})
    for (double l : {0.2, 0.5, 1.0, 2.0, 5.0}) {
      const auto r = heat_resolvent_identity(s, l);
      CHECK(rel(r.lhs, r.rhs) < 1e-7);
    }
  const auto base = heat_resolvent_identity(cd(2.0, 1.0), 0.5);
  const auto scaled = heat_resolvent_identity(cd(4.0, 2.0), 0.25);
  CHECK(std::abs(scaled.rhs * 2.0 - base.rhs) < 1e-15);
  CHECK_THROWS_AS(heat_resolvent_identity(cd(1.0, 2.0), 1.0), ValidationError);
}

TEST_CASE("Cauchy-Plancherel identity") {
  const PlancherelPolynomial one({cd(1.0)});
  const auto c = cauchy_plancherel_identity(cd(2.0), one);
  CHECK(std::abs(c.rhs - pi / 2) < 1e-15);
  CHECK(std::abs(c.lhs - pi / 2) < 1e-10);
  CHECK(c.subtracted.empty());

  const PlancherelPolynomial z2({cd(0.0), cd(1.0)});
  for (cd s : {cd(1.0), cd(2.0, 0.5), cd(0.7, -1.2)}) {
    const auto r = cauchy_plancherel_identity(s, z2);
    CHECK(rel(r.rhs, pi * s) < 1e-15);
    CHECK(rel(r.lhs, r.rhs) < 1e-6);
    REQUIRE(r.subtracted.size() == 1);
    CHECK(std::abs(r.subtracted[0] + 1.0) < 1e-15);
  }

  const auto p5 = plancherel_polynomial(GroupData::for_dimension(5), Weight::parse("1,0"));
  for (cd s : {cd(1.0), cd(1.5, 0.5)}) {
    const auto r = cauchy_plancherel_identity(s, p5);
    CHECK(rel(r.lhs, r.rhs) < 1e-6);
    CHECK(std::abs(cauchy_plancherel_rhs(-s, p5) + r.rhs) < 1e-13 * std::abs(r.rhs));
  }
  CHECK_THROWS_AS(cauchy_plancherel_identity(cd(0.0, 1.0), one), ValidationError);
}

TEST_CASE("spectral resolvent trace") {
  const AnchorSet a({cd(1.0), cd(2.0)});
  CHECK(std::abs(resolvent_trace_spectral(make_spectrum({{cd(0.0), 1}}), a) - 0.25) < 1e-15);
  CHECK(std::abs(resolvent_trace_spectral(make_spectrum({{cd(1.0), 1}, {cd(4.0), 2}}), a) - 0.15) < 1e-15);
  CHECK_THROWS_AS(resolvent_trace_spectral(make_spectrum({{cd(-4.0), 1}}), a), DomainError);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto es = make_spectrum(test_support::random_spectrum(rng, trial == 0));
    const AnchorSet b(test_support::random_anchors(rng, 2 + trial % 4));
    const auto c = partial_fraction_coeffs(b);
    cd two_route = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i)
      for (const auto& e : es.entries()) two_route += c[i] * static_cast<double>(e.m) / (e.t + b.s()[i] * b.s()[i]);
    const cd direct = resolvent_trace_spectral(es, b);
    CHECK(rel(direct, two_route) < 1e-12);
  }
}

TEST_CASE("geometric resolvent trace") {
  const GroupData g3 = GroupData::for_dimension(3);
  const Weight zero = Weight::parse("0");
  const AnchorSet a({cd(2.0), cd(3.0)});
  const LengthSpectrum empty(g3, {}, 1.5, 2);
  const auto p = plancherel_polynomial(g3, zero);
  const auto c = partial_fraction_coeffs(a);
  const cd pure = 3.0 * (c[0] * cauchy_plancherel_rhs(2.0, p) + c[1] * cauchy_plancherel_rhs(3.0, p));
  CHECK(std::abs(resolvent_trace_geometric(empty, zero, a) - pure) < 1e-14 * std::abs(pure));

  // One class: sum_j (l0 / 2s) L_sym e^{-s j l0} term by term.
  const LengthSpectrum single(g3, {PrimitiveClass(1.3, {0.4}, Eigen::MatrixXcd::Identity(1, 1))}, 1.0, 1);
  const Character sc(zero, RootType::D);
  cd termwise = 0.0;
  for (const auto& cp : powers_up_to(single, 40.0))
    for (std::size_t i = 0; i < c.size(); ++i) {
      const cd s = a.s()[i];
      termwise += c[i] * cp.l0 * L_sym(g3, cp, sc) * heat_resolvent_identity(s, cp.length).rhs;
    }
  const cd plancherel_part = c[0] * cauchy_plancherel_rhs(2.0, p) + c[1] * cauchy_plancherel_rhs(3.0, p);
  const cd got = resolvent_trace_geometric(single, zero, a) - plancherel_part;
  CHECK(rel(got, termwise) < 1e-12);

  CHECK_THROWS_AS(resolvent_trace_geometric(empty, zero, AnchorSet({cd(1.0, 2.0), cd(2.0)})), ValidationError);
}

TEST_CASE("resolvent trace via heat") {
  const GroupData g3 = GroupData::for_dimension(3);
  const Weight zero = Weight::parse("0");
  const LengthSpectrum empty(g3, {}, 1.5, 2);
  const AnchorSet a({cd(1.0), cd(2.0)});
  const auto c = partial_fraction_coeffs(a);
  const auto p = plancherel_polynomial(g3, zero);
  const cd closed = 3.0 * (c[0] * cauchy_plancherel_rhs(1.0, p) + c[1] * cauchy_plancherel_rhs(2.0, p));
  CHECK(rel(resolvent_trace_via_heat(empty, zero, a), closed) < 1e-8);
  CHECK_THROWS_AS(resolvent_trace_via_heat(empty, zero, AnchorSet({cd(1.0)})), ValidationError);
  CHECK_THROWS_AS(resolvent_trace_via_heat(LengthSpectrum(GroupData::for_dimension(5), {}, 1.0, 1),
                                           Weight::parse("0,0"), AnchorSet({cd(1.0), cd(2.0)})),
                  DomainError);

  // Both routes on a synthetic spectrum.
  const auto ls = synthesize(g3, 200, 0.4, 77, 2, 1.0);
  const auto start = std::chrono::steady_clock::now();
  for (const auto& s : {std::vector<cd>{2.0, 3.0}, std::vector<cd>{cd(2.0, 0.5), 3.0, cd(4.0, -1.0)}}) {
    const AnchorSet as(s);
    const cd geo = resolvent_trace_geometric(ls, zero, as);
    const cd heat = resolvent_trace_via_heat(ls, zero, as);
    CHECK(rel(heat, geo) < 1e-5);
  }
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(60));

  // Integrand ~ t^{N-1-d/2} as t -> 0.
  const GeometricHeatTrace heat(ls, zero);
  const AnchorSet three({cd(2.0), cd(3.0), cd(4.0)});
  auto integrand = [&](double t) { return std::abs(small_t_combination(three, t) * heat(t).total); };
  const double slope = std::log10(integrand(1e-3) / integrand(1e-4));
  CHECK(std::abs(slope - (3 - 1 - 1.5)) < 0.05);
}

TEST_CASE("spectral square root") {
  CHECK(spectral_sqrt(cd(-4.0)) == cd(0.0, 2.0));
  CHECK(spectral_sqrt(cd(4.0)) == cd(2.0));
  CHECK(std::abs(spectral_sqrt(cd(3.0, 4.0)) - cd(2.0, 1.0)) < 1e-15);
  CHECK(spectral_sqrt(cd(-1.0, -1e-300)).real() >= 0.0);
}

TEST_CASE("continued log-derivative") {
  const PlancherelPolynomial none;
  const ContinuedL two(make_spectrum({{cd(4.0), 2}}), none, 1, 1.0);
  const auto r = residue_order(two, cd(0.0, 2.0));
  CHECK(r.order == 2);
  CHECK(r.residual < 1e-6);
  CHECK(residue_order(two, cd(0.0, -2.0)).order == 2);
  CHECK(residue_order(ContinuedL(make_spectrum({{cd(0.0), 3}}), none, 1, 1.0), 0.0).order == 6);
  CHECK(residue_order(ContinuedL(make_spectrum({{cd(0.0), 1}}), none, 1, 1.0), 0.0).order == 2);
  CHECK_THROWS_AS(two(cd(0.0, 2.0)), DomainError);
  CHECK_THROWS_AS(residue_order(two, cd(0.0, 2.1)), DomainError);

  const auto p5 = plancherel_polynomial(GroupData::for_dimension(5), Weight::parse("1,0"));
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const ContinuedL cl(make_spectrum(test_support::random_spectrum(rng, trial == 0)), p5, 2, 1.7);
    for (const cd& z : cl.singularities()) {
      const auto res = residue_order(cl, z);
      CHECK(res.order == cl.expected_order(z));
      CHECK(res.residual < 1e-6);
    }
    // The spectral part is odd; the Plancherel part is even.
    const ContinuedL bare(cl.spectrum(), PlancherelPolynomial(), 2, 1.7);
    for (cd s : {cd(0.3, 0.2), cd(2.0, -1.0), cd(-1.5, 3.0)}) {
      const cd v = bare(s);
      CHECK(std::abs(bare(-s) + v) < 1e-12 * std::max(1.0, std::abs(v)));
      const cd even = -4.0 * pi * 2.0 * 1.7 * p5(s);
      CHECK(std::abs(cl(s) + cl(-s) - even) < 1e-12 * std::max(1.0, std::abs(cl(s))));
    }
  }

  // Substituting L into the anchor combination.
  for (int trial = 0; trial < 5; ++trial) {
    const auto es = make_spectrum(test_support::random_spectrum(rng, false));
    const ContinuedL cl(es, p5, 2, 1.7);
    const AnchorSet a(test_support::random_anchors(rng, 4));
    const auto c = partial_fraction_coeffs(a);
    cd lhs = 0.0, plancherel = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      const cd s = a.s()[i];
      lhs += c[i] * cl(s) / (2.0 * s);
      plancherel += c[i] * 2.0 * 1.7 * cauchy_plancherel_rhs(s, p5);
    }
    const cd expected = resolvent_trace_spectral(es, a) - plancherel;
    CHECK(rel(lhs, expected) < 1e-10);
  }
}

TEST_CASE("path integration of L") {
  const ContinuedL cl(make_spectrum({{cd(4.0), 2}, {cd(9.0, 1.0), 1}}), PlancherelPolynomial({cd(1.0), cd(0.5)}), 1,
                      1.0);
  const auto L = path_integrand(cl);
  const cd s0(1.0, 1.0);
  const std::vector<cd> away{cd(1.5, 1.0), cd(1.5, 1.5), cd(1.0, 1.5)};
  CHECK(std::abs(log_zeta_ratio(s0, s0, L, away)) < 1e-8);

  const std::vector<cd> around{cd(0.5, 1.5), cd(0.5, 2.5), cd(-0.5, 2.5), cd(-0.5, 1.5)};
  const cd loop = log_zeta_ratio(cd(0.0, 1.5), cd(0.0, 1.5), L, around);
  CHECK(std::abs(loop - cd(0.0, 2.0 * pi * 2.0)) < 1e-8);

  CHECK_THROWS_AS(log_zeta_ratio(cd(-1.0, 2.0), cd(1.0, 2.0), L), DomainError);
  CHECK_NOTHROW(log_zeta_ratio(cd(-1.0, 2.002), cd(1.0, 2.002), L));

  const auto ls = synthesize(GroupData::for_dimension(3), 60, 0.8, 4, 1, 1.0);
  const ZetaSeries series(ls, Weight::parse("0"));
  const PathIntegrand ld{[&](cd s) { return series.log_derivative(s).value; }, {}};
  const cd expected = series.selberg_log(5.0).value - series.selberg_log(4.0).value;
  CHECK(rel(log_zeta_ratio(4.0, 5.0, ld), expected) < 1e-6);
  const cd bent = log_zeta_ratio(4.0, 5.0, ld, {cd(4.0, 2.0), cd(5.0, -1.0)});
  CHECK(rel(bent, expected) < 1e-6);
}
