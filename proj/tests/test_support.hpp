#pragma once

// Small generators shared by the unit and acceptance suites.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "zetaflow/repr.hpp"

namespace test_support {

// Dominant weights of rank n with first coordinate <= max_first, both
// integral and half-integral classes.
inline std::vector<zetaflow::Weight> dominant_weights(int n, int max_first, zetaflow::RootType type) {
  using zetaflow::HalfInt;
  std::vector<zetaflow::Weight> out;
  for (int parity : {0, 1}) {
    std::vector<int> cur(n);
    auto rec = [&](auto&& self, int pos) -> void {
      if (pos == n) {
        zetaflow::Weight w;
        for (int v : cur) w.coords.push_back(HalfInt::from_twice(v));
        out.push_back(w);
        return;
      }
      int top = pos == 0 ? 2 * max_first + parity : cur[pos - 1];
      int bottom = parity;
      if (type == zetaflow::RootType::D && pos == n - 1) bottom = pos == 0 ? -top : -cur[pos - 1];
      for (int v = top; v >= bottom; v -= 2) {
        cur[pos] = v;
        self(self, pos + 1);
      }
    };
    if (2 * max_first + parity >= 0) rec(rec, 0);
  }
  return out;
}

inline std::vector<zetaflow::Weight> m_weights(int n, int max_first) {
  return dominant_weights(n, max_first, zetaflow::RootType::D);
}

inline std::vector<zetaflow::Weight> k_weights(int n, int max_first) {
  return dominant_weights(n, max_first, zetaflow::RootType::B);
}

inline std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// N anchors in the right half-plane with Re s in [1, 3], |Im s| <= 1 and
// squares at least 0.1 apart.
inline std::vector<std::complex<double>> random_anchors(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> re(1.0, 3.0), im(-1.0, 1.0);
  std::vector<std::complex<double>> s;
  while (static_cast<int>(s.size()) < n) {
    const std::complex<double> z(re(rng), im(rng));
    bool ok = true;
    for (const auto& w : s) ok = ok && std::abs(w - z) >= 0.1 && std::abs(w * w - z * z) >= 0.1;
    if (ok) s.push_back(z);
  }
  return s;
}

// Frobenius norm of prod_i (A + s_i^2)^{-1} - sum_i c_i (A + s_i^2)^{-1} for a
// random diagonalizable 5x5 A with eigenvalues in [0.5, 3] + i[-0.5, 0.5].
inline double resolvent_matrix_error(std::mt19937_64& rng, const std::vector<std::complex<double>>& s,
                                     const std::vector<std::complex<double>>& c) {
  using Mat = Eigen::MatrixXcd;
  std::uniform_real_distribution<double> u(-1.0, 1.0), ev(0.5, 3.0);
  Mat v(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) v(i, j) = {u(rng), u(rng)};
  v += 3.0 * Mat::Identity(5, 5);
  Eigen::VectorXcd diag(5);
  for (int i = 0; i < 5; ++i) diag(i) = {ev(rng), 0.5 * u(rng)};
  const Mat a = v * diag.asDiagonal() * v.inverse();
  Mat prod = Mat::Identity(5, 5), sum = Mat::Zero(5, 5);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Mat r = (a + s[i] * s[i] * Mat::Identity(5, 5)).inverse();
    prod = prod * r;
    sum += c[i] * r;
  }
  return (prod - sum).norm();
}

// Random finite spectrum of 1..4 entries; t = 0 is included when with_zero.
inline std::vector<std::pair<std::complex<double>, int>> random_spectrum(std::mt19937_64& rng, bool with_zero) {
  std::uniform_real_distribution<double> re(-2.0, 10.0), im(-3.0, 3.0);
  std::uniform_int_distribution<int> mult(1, 4), count(1, 4);
  std::vector<std::pair<std::complex<double>, int>> out;
  if (with_zero) out.emplace_back(0.0, mult(rng));
  const int k = count(rng);
  while (static_cast<int>(out.size()) < k + (with_zero ? 1 : 0)) {
    const std::complex<double> t(re(rng), im(rng));
    const std::complex<double> r = std::sqrt(t);
    bool ok = std::abs(t) > 0.5;
    for (const auto& e : out) {
      const std::complex<double> q = std::sqrt(e.first);
      ok = ok && std::abs(q - r) > 0.3 && std::abs(q + r) > 0.3;
    }
    if (ok) out.emplace_back(t, mult(rng));
  }
  return out;
}

// Direct evaluation of the root product defining the Plancherel density.
inline std::complex<double> root_product(const zetaflow::GroupData& gd, const zetaflow::Weight& sigma, std::complex<double> z) {
  std::vector<std::complex<double>> v{z};
  for (int j = 0; j < gd.n; ++j) v.emplace_back(sigma[j].to_double() + gd.rho_m[j].to_double());
  auto rho = gd.rho_g.as_doubles();
  std::complex<double> p = 1.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      p *= (v[i] - v[j]) / (rho[i] - rho[j]);
      p *= (v[i] + v[j]) / (rho[i] + rho[j]);
    }
  return p;
}

}  // namespace test_support
