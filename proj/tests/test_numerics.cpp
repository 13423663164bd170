#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "zetaflow/error.hpp"
#include "zetaflow/quadrature.hpp"
#include "zetaflow/summation.hpp"

using namespace zetaflow;
using cd = std::complex<double>;

TEST_CASE("reduce_terms is bit identical across worker counts") {
  auto term = [](std::size_t i) { return cd(1.0 / (1.0 + i), std::sin(0.1 * i) / (1.0 + i * i)); };
  const cd ref = reduce_terms(10000, term, {1, true});
  for (unsigned w : {2u, 3u, 4u, 8u, 17u}) {
    const cd v = reduce_terms(10000, term, {w, true});
    CHECK(v.real() == ref.real());
    CHECK(v.imag() == ref.imag());
  }
  const cd loose = reduce_terms(10000, term, {4, false});
  CHECK(std::abs(loose - ref) < 1e-12);
  CHECK(reduce_terms(0, term) == cd(0.0));
}

TEST_CASE("reduce_terms propagates exceptions") {
  auto term = [](std::size_t i) -> cd {
    if (i == 700) throw DomainError("boom");
    return 1.0;
  };
  CHECK_THROWS_AS(reduce_terms(1000, term, {3, true}), DomainError);
}

TEST_CASE("compensated summation") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value().real() == 1000.0);
}

TEST_CASE("half-line quadrature") {
  using std::numbers::pi;
  auto r = integrate_half_line([](double x) { return cd(std::exp(-x)); });
  CHECK(std::abs(r.value - 1.0) < 1e-12);
  r = integrate_half_line([](double x) { return cd(1.0 / (1.0 + x * x)); });
  CHECK(std::abs(r.value - pi / 2) < 1e-12);
  r = integrate_half_line([](double x) { return cd(std::exp(-x * x), 1.0 / std::sqrt(x) * std::exp(-x)); });
  CHECK(std::abs(r.value - cd(std::sqrt(pi) / 2, std::sqrt(pi))) < 1e-11);
  CHECK_THROWS_AS(integrate_half_line([](double) { return cd(NAN); }), QuadratureError);
}

TEST_CASE("segment quadrature") {
  auto r = integrate_segment([](cd z) { return 1.0 / z; }, cd(1.0, 0.0), cd(0.0, 1.0));
  CHECK(std::abs(r.value - cd(0.0, std::numbers::pi / 2)) < 1e-13);
  r = integrate_segment([](cd z) { return std::exp(z); }, cd(0.0), cd(1.0, 2.0));
  CHECK(std::abs(r.value - (std::exp(cd(1.0, 2.0)) - 1.0)) < 1e-13);
}
