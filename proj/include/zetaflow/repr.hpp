#pragma once

// Root data and weight combinatorics for G = Spin(d,1) with K = Spin(d)
// (type B_n) and M = Spin(d-1) (type D_n), d = 2n+1.

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zetaflow {

/// Exact element of (1/2)Z, stored as twice its value.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int value) : twice_(2 * value) {}  // NOLINT: implicit from int is intended

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr double to_double() const { return 0.5 * twice_; }

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  constexpr HalfInt operator+(HalfInt o) const { return from_twice(twice_ + o.twice_); }
  constexpr HalfInt operator-(HalfInt o) const { return from_twice(twice_ - o.twice_); }
  constexpr auto operator<=>(const HalfInt&) const = default;

  /// Parses "3", "-1", "1/2", "-3/2", "0.5" or "1.5".
  static HalfInt parse(std::string_view text);
  std::string to_string() const;

 private:
  int twice_ = 0;
};

constexpr HalfInt abs(HalfInt h) { return h.twice() < 0 ? -h : h; }

/// Highest weight in the standard orthonormal basis e_1, ..., e_rank.
struct Weight {
  std::vector<HalfInt> coords;

  Weight() = default;
  explicit Weight(std::vector<HalfInt> c) : coords(std::move(c)) {}
  Weight(std::initializer_list<HalfInt> c) : coords(c) {}

  std::size_t rank() const { return coords.size(); }
  HalfInt operator[](std::size_t i) const { return coords[i]; }
  bool is_zero() const;
  /// True when all coordinates are integers, false when all are half-odd.
  /// Throws ValidationError for a mixed tuple.
  bool integral() const;
  std::vector<double> as_doubles() const;

  static Weight zero(std::size_t rank);
  /// Comma separated coordinates, e.g. "1,0" or "1/2,-1/2".
  static Weight parse(std::string_view text);
  std::string to_string() const;

  auto operator<=>(const Weight&) const = default;
  bool operator==(const Weight&) const = default;
};

enum class RootType { B, D };

struct GroupData {
  int d = 3;
  int n = 1;
  double rho_norm = 1.0;
  Weight rho_g;  // rank n+1, type D_{n+1}
  Weight rho_m;  // rank n, type D_n

  /// Throws ValidationError unless d is odd and >= 3.
  static GroupData for_dimension(int d);
};

/// Even polynomial P(z) = sum_m a_{2m} z^{2m}.
class PlancherelPolynomial {
 public:
  PlancherelPolynomial() = default;
  explicit PlancherelPolynomial(std::vector<std::complex<double>> even_coeffs);

  /// Coefficient of z^{2m} at index m.
  const std::vector<std::complex<double>>& even_coeffs() const { return coeffs_; }
  /// Coefficient of z^k (zero for odd k).
  std::complex<double> coeff(std::size_t k) const;
  std::size_t degree() const;
  std::complex<double> operator()(std::complex<double> z) const;

 private:
  std::vector<std::complex<double>> coeffs_;
};

/// Formal Z-linear combination of highest weights.
struct VirtualRep {
  std::map<Weight, int> terms;

  void add(const Weight& w, int coeff);
  bool empty() const { return terms.empty(); }
  int coeff(const Weight& w) const;
};

/// Character of a finite dimensional representation of a torus-rank-n
/// orthogonal group, held as its weight multiset.
class Character {
 public:
  Character() = default;
  /// Irreducible character with the given highest weight.
  Character(const Weight& highest, RootType type);

  static Character trivial(std::size_t rank);

  std::complex<double> operator()(std::span<const double> angles) const;
  std::int64_t dim() const { return dim_; }
  std::size_t rank() const { return rank_; }
  /// Weights with multiplicities; each entry is (twice the coordinates, mult).
  const std::vector<std::pair<std::vector<int>, std::int64_t>>& weights() const { return weights_; }

  /// Character of the tensor product (pointwise product of characters).
  Character tensor(const Character& other) const;

 private:
  std::size_t rank_ = 0;
  std::int64_t dim_ = 0;
  std::vector<std::pair<std::vector<int>, std::int64_t>> weights_;
};

void validate_m_weight(const GroupData& gd, const Weight& sigma);
void validate_k_weight(const GroupData& gd, const Weight& tau);
bool is_dominant(const Weight& w, RootType type);

PlancherelPolynomial plancherel_polynomial(const GroupData& gd, const Weight& sigma);

std::complex<double> weyl_character(const Weight& weight, std::span<const double> angles,
                                    RootType type);
std::int64_t weyl_dim(const Weight& weight, RootType type);

/// Weight multiset of the irreducible representation with the given highest
/// weight: dominant weights with their multiplicities (Freudenthal).
std::map<Weight, std::int64_t> dominant_weight_multiplicities(const Weight& highest,
                                                               RootType type);

/// [tau|_M : sigma] for K = Spin(2n+1), M = Spin(2n).
int branching_multiplicity(const Weight& tau, const Weight& sigma);
/// All sigma with [tau|_M : sigma] = 1.
std::vector<Weight> branching_constituents(const Weight& tau);
/// i*(rep) as a virtual M-representation.
VirtualRep restrict_to_m(const VirtualRep& rep);

Weight weyl_action(const Weight& sigma);

/// (tau_plus, tau_minus) with i*(tau_plus - tau_minus) = sigma + w sigma.
std::pair<VirtualRep, VirtualRep> tau_pm_split(const Weight& sigma);

inline constexpr int kMaxPeels = 64;
/// Signed K-types m_tau(sigma) with sum m_tau i*(tau) = sigma, for Weyl
/// invariant sigma.
VirtualRep m_tau_coeffs(const Weight& sigma);

double c_sigma(const GroupData& gd, const Weight& sigma);

struct ExteriorComponent {
  Weight psi;
  int lambda = 0;
};
/// M x A decomposition of the p-th exterior power of n_C.
std::vector<ExteriorComponent> exterior_decomposition(const GroupData& gd, int p);

}  // namespace zetaflow
