#include "zetaflow/repr.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "zetaflow/error.hpp"

namespace zetaflow {

namespace {

using IntVec = std::vector<int>;

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  if (b == std::string_view::npos) return {};
  return std::string(s.substr(b, e - b + 1));
}

int parse_int(std::string_view s) {
  int v = 0;
  auto str = trim(s);
  auto [ptr, ec] = std::from_chars(str.data(), str.data() + str.size(), v);
  if (ec != std::errc() || ptr != str.data() + str.size())
    throw ValidationError("not an integer: '" + str + "'");
  return v;
}

IntVec twice_coords(const Weight& w) {
  IntVec v(w.rank());
  for (std::size_t i = 0; i < w.rank(); ++i) v[i] = w[i].twice();
  return v;
}

Weight from_twice(const IntVec& v) {
  Weight w;
  w.coords.reserve(v.size());
  for (int x : v) w.coords.push_back(HalfInt::from_twice(x));
  return w;
}

// Positive roots as integer vectors in the orthonormal basis.
std::vector<IntVec> positive_roots(std::size_t n, RootType type) {
  std::vector<IntVec> roots;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      IntVec a(n, 0), b(n, 0);
      a[i] = 1;
      a[j] = -1;
      b[i] = 1;
      b[j] = 1;
      roots.push_back(a);
      roots.push_back(b);
    }
    if (type == RootType::B) {
      IntVec c(n, 0);
      c[i] = 1;
      roots.push_back(c);
    }
  }
  return roots;
}

IntVec twice_rho(std::size_t n, RootType type) {
  IntVec r(n);
  for (std::size_t i = 0; i < n; ++i) {
    int k = static_cast<int>(n - 1 - i);
    r[i] = type == RootType::B ? 2 * k + 1 : 2 * k;
  }
  return r;
}

long long dot(const IntVec& a, const IntVec& b) {
  long long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long long>(a[i]) * b[i];
  return s;
}

IntVec dominant_representative(IntVec v, RootType type) {
  const std::size_t n = v.size();
  if (type == RootType::D && n == 1) return v;
  int negatives = 0;
  bool has_zero = false;
  for (int& x : v) {
    if (x < 0) ++negatives;
    if (x == 0) has_zero = true;
    x = std::abs(x);
  }
  std::sort(v.begin(), v.end(), std::greater<>());
  if (type == RootType::D && !has_zero && negatives % 2 == 1) v.back() = -v.back();
  return v;
}

bool dominant_twice(const IntVec& v, RootType type) {
  const std::size_t n = v.size();
  if (n == 0) return true;
  if (type == RootType::D && n == 1) return true;
  for (std::size_t i = 0; i + 2 < n; ++i)
    if (v[i] < v[i + 1]) return false;
  if (type == RootType::B) {
    if (n >= 2 && v[n - 2] < v[n - 1]) return false;
    return v[n - 1] >= 0;
  }
  return v[n - 2] >= std::abs(v[n - 1]);
}

// Coefficients of (highest - mu) in the simple-root basis, or nullopt-style
// empty vector when mu is not below highest in the root order.
bool root_level(const IntVec& highest, const IntVec& mu, RootType type, long long& level) {
  const std::size_t n = highest.size();
  std::vector<long long> partial(n);
  long long s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int diff2 = highest[i] - mu[i];
    if (diff2 % 2 != 0) return false;
    s += diff2 / 2;
    partial[i] = s;
  }
  level = 0;
  if (type == RootType::B) {
    for (auto p : partial) {
      if (p < 0) return false;
      level += p;
    }
    return true;
  }
  if (n == 1) {
    level = 0;
    return partial[0] == 0;
  }
  for (std::size_t k = 0; k + 2 < n; ++k) {
    if (partial[k] < 0) return false;
    level += partial[k];
  }
  long long sn = partial[n - 1];
  if (sn % 2 != 0) return false;
  long long an = sn / 2;
  long long an1 = partial[n - 2] - an;
  if (an < 0 || an1 < 0) return false;
  level += an + an1;
  return true;
}

void enumerate_dominant(const IntVec& highest, RootType type, std::size_t pos, IntVec& cur,
                        std::vector<std::pair<long long, IntVec>>& out) {
  const std::size_t n = highest.size();
  if (pos == n) {
    long long level = 0;
    if (root_level(highest, cur, type, level)) out.emplace_back(level, cur);
    return;
  }
  const int parity = ((highest[0] % 2) + 2) % 2;
  int top = pos == 0 ? highest[0] : cur[pos - 1];
  int bottom = 0;
  if (type == RootType::D && pos == n - 1) {
    if (n == 1) top = std::abs(top);
    bottom = -top;
  }
  for (int v = top; v >= bottom; --v) {
    if (((v % 2) + 2) % 2 != parity) continue;
    cur[pos] = v;
    enumerate_dominant(highest, type, pos + 1, cur, out);
  }
}

std::set<IntVec> weyl_orbit(const IntVec& mu, RootType type) {
  std::set<IntVec> seen{mu};
  std::vector<IntVec> frontier{mu};
  const std::size_t n = mu.size();
  if (type == RootType::D && n == 1) return seen;
  while (!frontier.empty()) {
    IntVec v = std::move(frontier.back());
    frontier.pop_back();
    std::vector<IntVec> images;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      IntVec w = v;
      std::swap(w[i], w[i + 1]);
      images.push_back(std::move(w));
    }
    IntVec w = v;
    if (type == RootType::B) {
      w[n - 1] = -w[n - 1];
    } else {
      w[n - 2] = -v[n - 1];
      w[n - 1] = -v[n - 2];
    }
    images.push_back(std::move(w));
    for (auto& img : images) {
      if (seen.insert(img).second) frontier.push_back(std::move(img));
    }
  }
  return seen;
}

std::vector<std::pair<IntVec, std::int64_t>> freudenthal(const IntVec& highest, RootType type) {
  const std::size_t n = highest.size();
  std::vector<std::pair<long long, IntVec>> dominant;
  IntVec cur(n, 0);
  enumerate_dominant(highest, type, 0, cur, dominant);
  std::sort(dominant.begin(), dominant.end());

  const auto roots = positive_roots(n, type);
  const IntVec rho = twice_rho(n, type);
  auto shifted_norm = [&](const IntVec& v) {
    long long s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      long long x = v[i] + rho[i];
      s += x * x;
    }
    return s;
  };
  const long long top_norm = shifted_norm(highest);

  std::map<IntVec, std::int64_t> mult;
  std::vector<std::pair<IntVec, std::int64_t>> result;
  for (const auto& [level, mu] : dominant) {
    std::int64_t m = 0;
    if (level == 0) {
      m = 1;
    } else {
      long long numer = 0;
      for (const auto& alpha : roots) {
        for (int k = 1;; ++k) {
          IntVec shifted = mu;
          for (std::size_t i = 0; i < n; ++i) shifted[i] += 2 * k * alpha[i];
          auto it = mult.find(dominant_representative(shifted, type));
          if (it == mult.end()) break;
          numer += static_cast<long long>(it->second) * 4 * dot(shifted, alpha);
        }
      }
      long long denom = top_norm - shifted_norm(mu);
      if (denom <= 0 || numer % denom != 0)
        throw std::logic_error("Freudenthal recursion produced a non-integral multiplicity");
      m = numer / denom;
    }
    if (m > 0) {
      mult[mu] = m;
      result.emplace_back(mu, m);
    }
  }
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------

HalfInt HalfInt::parse(std::string_view text) {
  std::string s = trim(text);
  if (s.empty()) throw ValidationError("empty weight coordinate");
  if (auto slash = s.find('/'); slash != std::string::npos) {
    int num = parse_int(std::string_view(s).substr(0, slash));
    int den = parse_int(std::string_view(s).substr(slash + 1));
    if (den == 1) return HalfInt(num);
    if (den == 2) return from_twice(num);
    throw ValidationError("weight coordinate '" + s + "' is not in (1/2)Z");
  }
  if (s.find('.') == std::string::npos) return HalfInt(parse_int(s));
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ValidationError("not a number: '" + s + "'");
  double twice = 2.0 * v;
  if (twice != std::round(twice)) throw ValidationError("weight coordinate '" + s + "' is not in (1/2)Z");
  return from_twice(static_cast<int>(std::lround(twice)));
}

std::string HalfInt::to_string() const {
  if (is_integer()) return std::to_string(twice_ / 2);
  return std::to_string(twice_) + "/2";
}

bool Weight::is_zero() const {
  return std::all_of(coords.begin(), coords.end(), [](HalfInt h) { return h.twice() == 0; });
}

bool Weight::integral() const {
  if (coords.empty()) return true;
  const bool first = coords.front().is_integer();
  for (auto c : coords)
    if (c.is_integer() != first)
      throw ValidationError("weight " + to_string() + " mixes integer and half-integer coordinates");
  return first;
}

std::vector<double> Weight::as_doubles() const {
  std::vector<double> v;
  v.reserve(coords.size());
  for (auto c : coords) v.push_back(c.to_double());
  return v;
}

Weight Weight::zero(std::size_t rank) { return Weight(std::vector<HalfInt>(rank)); }

Weight Weight::parse(std::string_view text) {
  Weight w;
  std::string s = trim(text);
  if (s.empty()) return w;
  std::size_t start = 0;
  while (true) {
    auto comma = s.find(',', start);
    w.coords.push_back(HalfInt::parse(std::string_view(s).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return w;
}

std::string Weight::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) s += ",";
    s += coords[i].to_string();
  }
  return s + ")";
}

GroupData GroupData::for_dimension(int d) {
  if (d < 3 || d % 2 == 0) throw ValidationError("d must be odd and >= 3, got " + std::to_string(d));
  GroupData gd;
  gd.d = d;
  gd.n = (d - 1) / 2;
  gd.rho_norm = gd.n;
  for (int k = gd.n; k >= 0; --k) gd.rho_g.coords.emplace_back(k);
  for (int k = gd.n - 1; k >= 0; --k) gd.rho_m.coords.emplace_back(k);
  return gd;
}

// ---------------------------------------------------------------------------

PlancherelPolynomial::PlancherelPolynomial(std::vector<std::complex<double>> even_coeffs)
    : coeffs_(std::move(even_coeffs)) {}

std::complex<double> PlancherelPolynomial::coeff(std::size_t k) const {
  if (k % 2 == 1 || k / 2 >= coeffs_.size()) return {0.0, 0.0};
  return coeffs_[k / 2];
}

std::size_t PlancherelPolynomial::degree() const {
  for (std::size_t m = coeffs_.size(); m-- > 0;)
    if (coeffs_[m] != std::complex<double>(0.0, 0.0)) return 2 * m;
  return 0;
}

std::complex<double> PlancherelPolynomial::operator()(std::complex<double> z) const {
  const std::complex<double> z2 = z * z;
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t m = coeffs_.size(); m-- > 0;) acc = acc * z2 + coeffs_[m];
  return acc;
}

void VirtualRep::add(const Weight& w, int coeff) {
  if (coeff == 0) return;
  auto& c = terms[w];
  c += coeff;
  if (c == 0) terms.erase(w);
}

int VirtualRep::coeff(const Weight& w) const {
  auto it = terms.find(w);
  return it == terms.end() ? 0 : it->second;
}

// ---------------------------------------------------------------------------

bool is_dominant(const Weight& w, RootType type) { return dominant_twice(twice_coords(w), type); }

void validate_m_weight(const GroupData& gd, const Weight& sigma) {
  if (static_cast<int>(sigma.rank()) != gd.n)
    throw ValidationError("M-weight " + sigma.to_string() + " must have rank " + std::to_string(gd.n));
  sigma.integral();
  if (!is_dominant(sigma, RootType::D))
    throw ValidationError("M-weight " + sigma.to_string() + " is not dominant");
}

void validate_k_weight(const GroupData& gd, const Weight& tau) {
  if (static_cast<int>(tau.rank()) != gd.n)
    throw ValidationError("K-weight " + tau.to_string() + " must have rank " + std::to_string(gd.n));
  tau.integral();
  if (!is_dominant(tau, RootType::B))
    throw ValidationError("K-weight " + tau.to_string() + " is not dominant");
}

PlancherelPolynomial plancherel_polynomial(const GroupData& gd, const Weight& sigma) {
  validate_m_weight(gd, sigma);
  const std::size_t n = gd.n;
  // Coordinates 1..n of the D_{n+1} weight; coordinate 0 carries z.
  std::vector<double> x(n + 1, 0.0);
  for (std::size_t j = 0; j < n; ++j) x[j + 1] = sigma[j].to_double() + gd.rho_m[j].to_double();
  const auto rho = gd.rho_g.as_doubles();

  std::vector<std::complex<double>> poly{1.0};
  double scale = 1.0;
  double denom = 1.0;
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) {
      for (double sign : {-1.0, 1.0}) {
        denom *= rho[i] + sign * rho[j];
        if (i == 0) {
          // multiply by (z + sign * x_j)
          std::vector<std::complex<double>> next(poly.size() + 1, 0.0);
          for (std::size_t k = 0; k < poly.size(); ++k) {
            next[k + 1] += poly[k];
            next[k] += poly[k] * (sign * x[j]);
          }
          poly = std::move(next);
        } else {
          scale *= x[i] + sign * x[j];
        }
      }
    }
  }
  double biggest = 0.0;
  for (auto& c : poly) {
    c *= scale / denom;
    biggest = std::max(biggest, std::abs(c));
  }
  std::vector<std::complex<double>> even;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    if (k % 2 == 0) {
      even.push_back(poly[k]);
    } else if (std::abs(poly[k]) > 1e-12 * biggest) {
      throw std::logic_error("Plancherel product has an odd coefficient");
    }
  }
  return PlancherelPolynomial(std::move(even));
}

// ---------------------------------------------------------------------------

std::map<Weight, std::int64_t> dominant_weight_multiplicities(const Weight& highest, RootType type) {
  highest.integral();
  if (!is_dominant(highest, type))
    throw ValidationError("weight " + highest.to_string() + " is not dominant");
  std::map<Weight, std::int64_t> out;
  if (highest.rank() == 0) {
    out[highest] = 1;
    return out;
  }
  for (auto& [mu, m] : freudenthal(twice_coords(highest), type)) out[from_twice(mu)] = m;
  return out;
}

Character::Character(const Weight& highest, RootType type) : rank_(highest.rank()) {
  highest.integral();
  if (!is_dominant(highest, type))
    throw ValidationError("weight " + highest.to_string() + " is not dominant");
  if (rank_ == 0) {
    weights_.emplace_back(IntVec{}, 1);
    dim_ = 1;
    return;
  }
  for (auto& [mu, m] : freudenthal(twice_coords(highest), type)) {
    for (const auto& w : weyl_orbit(mu, type)) {
      weights_.emplace_back(w, m);
      dim_ += m;
    }
  }
}

Character Character::trivial(std::size_t rank) {
  Character c;
  c.rank_ = rank;
  c.dim_ = 1;
  c.weights_.emplace_back(IntVec(rank, 0), 1);
  return c;
}

std::complex<double> Character::operator()(std::span<const double> angles) const {
  if (angles.size() != rank_)
    throw ValidationError("character of rank " + std::to_string(rank_) + " evaluated at " +
                          std::to_string(angles.size()) + " angles");
  double re = 0.0, im = 0.0;
  for (const auto& [w, m] : weights_) {
    double phase = 0.0;
    for (std::size_t j = 0; j < rank_; ++j) phase += 0.5 * w[j] * angles[j];
    re += static_cast<double>(m) * std::cos(phase);
    im += static_cast<double>(m) * std::sin(phase);
  }
  return {re, im};
}

Character Character::tensor(const Character& other) const {
  if (other.rank_ != rank_) throw ValidationError("tensor product of characters of different rank");
  std::map<IntVec, std::int64_t> acc;
  for (const auto& [a, ma] : weights_) {
    for (const auto& [b, mb] : other.weights_) {
      IntVec s(rank_);
      for (std::size_t j = 0; j < rank_; ++j) s[j] = a[j] + b[j];
      acc[s] += ma * mb;
    }
  }
  Character c;
  c.rank_ = rank_;
  c.dim_ = dim_ * other.dim_;
  c.weights_.assign(acc.begin(), acc.end());
  return c;
}

std::complex<double> weyl_character(const Weight& weight, std::span<const double> angles,
                                    RootType type) {
  if (angles.size() != weight.rank())
    throw ValidationError("weyl_character: weight rank " + std::to_string(weight.rank()) +
                          " but " + std::to_string(angles.size()) + " angles");
  return Character(weight, type)(angles);
}

std::int64_t weyl_dim(const Weight& weight, RootType type) {
  weight.integral();
  if (!is_dominant(weight, type))
    throw ValidationError("weight " + weight.to_string() + " is not dominant");
  const std::size_t n = weight.rank();
  const IntVec lam = twice_coords(weight);
  const IntVec rho = twice_rho(n, type);
  __int128 num = 1, den = 1;
  for (const auto& alpha : positive_roots(n, type)) {
    long long a = 0, b = 0;
    for (std::size_t i = 0; i < n; ++i) {
      a += static_cast<long long>(lam[i] + rho[i]) * alpha[i];
      b += static_cast<long long>(rho[i]) * alpha[i];
    }
    num *= a;
    den *= b;
    __int128 g = std::gcd(static_cast<long long>(num < 0 ? -num : num), static_cast<long long>(den));
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  if (den != 1) throw std::logic_error("Weyl dimension formula produced a non-integer");
  return static_cast<std::int64_t>(num);
}

// ---------------------------------------------------------------------------

int branching_multiplicity(const Weight& tau, const Weight& sigma) {
  if (tau.rank() != sigma.rank())
    throw ValidationError("branching: K-weight " + tau.to_string() + " and M-weight " +
                          sigma.to_string() + " differ in rank");
  if (tau.integral() != sigma.integral()) return 0;
  const std::size_t n = tau.rank();
  for (std::size_t i = 0; i < n; ++i) {
    if (i + 1 < n) {
      if (!(tau[i] >= sigma[i] && sigma[i] >= tau[i + 1])) return 0;
    } else if (!(tau[i] >= abs(sigma[i]))) {
      return 0;
    }
  }
  return 1;
}

std::vector<Weight> branching_constituents(const Weight& tau) {
  const std::size_t n = tau.rank();
  std::vector<Weight> out;
  if (n == 0) return {tau};
  Weight cur = Weight::zero(n);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    const int hi = tau[i].twice();
    const int lo = i + 1 < n ? tau[i + 1].twice() : -tau[i].twice();
    for (int v = hi; v >= lo; v -= 2) {
      cur.coords[i] = HalfInt::from_twice(v);
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

VirtualRep restrict_to_m(const VirtualRep& rep) {
  VirtualRep out;
  for (const auto& [tau, c] : rep.terms)
    for (const auto& sigma : branching_constituents(tau)) out.add(sigma, c);
  return out;
}

Weight weyl_action(const Weight& sigma) {
  Weight w = sigma;
  if (!w.coords.empty()) w.coords.back() = -w.coords.back();
  return w;
}

std::pair<VirtualRep, VirtualRep> tau_pm_split(const Weight& sigma) {
  const std::size_t n = sigma.rank();
  if (n == 0 || sigma.coords.back().twice() == 0)
    throw ValidationError("Weyl-invariant sigma " + sigma.to_string() + " has no tau+- splitting");
  sigma.integral();
  if (!is_dominant(sigma, RootType::D))
    throw ValidationError("M-weight " + sigma.to_string() + " is not dominant");
  Weight nu = sigma;
  nu.coords.back() = abs(nu.coords.back());
  VirtualRep plus, minus;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    Weight w = nu;
    int ones = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        w.coords[i] = w.coords[i] - HalfInt(1);
        ++ones;
      }
    }
    // Non-dominant nu - mu have vanishing Weyl numerator and drop out.
    if (!is_dominant(w, RootType::B)) continue;
    (ones % 2 == 0 ? plus : minus).add(w, 1);
  }
  return {plus, minus};
}

VirtualRep m_tau_coeffs(const Weight& sigma) {
  const std::size_t n = sigma.rank();
  if (n == 0) throw ValidationError("m_tau_coeffs needs a weight of positive rank");
  sigma.integral();
  if (!is_dominant(sigma, RootType::D))
    throw ValidationError("M-weight " + sigma.to_string() + " is not dominant");
  if (sigma.coords.back().twice() != 0)
    throw ValidationError("sigma " + sigma.to_string() + " is not Weyl invariant");

  VirtualRep remainder;
  remainder.add(sigma, 1);
  VirtualRep result;
  auto key = [](Weight w) {
    w.coords.back() = abs(w.coords.back());
    return w;
  };
  for (int peel = 0; !remainder.empty(); ++peel) {
    if (peel >= kMaxPeels)
      throw DomainError("m_tau_coeffs: remainder did not vanish after " + std::to_string(kMaxPeels) +
                        " peels for sigma " + sigma.to_string());
    auto top = remainder.terms.begin();
    for (auto it = remainder.terms.begin(); it != remainder.terms.end(); ++it)
      if (key(it->first) > key(top->first)) top = it;
    const Weight tau = key(top->first);
    const int c = top->second;
    result.add(tau, c);
    for (const auto& s : branching_constituents(tau)) remainder.add(s, -c);
  }
  return result;
}

double c_sigma(const GroupData& gd, const Weight& sigma) {
  validate_m_weight(gd, sigma);
  double rho_m2 = 0.0, shifted2 = 0.0;
  for (int i = 0; i < gd.n; ++i) {
    double r = gd.rho_m[i].to_double();
    double v = sigma[i].to_double() + r;
    rho_m2 += r * r;
    shifted2 += v * v;
  }
  return -gd.rho_norm * gd.rho_norm - rho_m2 + shifted2;
}

std::vector<ExteriorComponent> exterior_decomposition(const GroupData& gd, int p) {
  const int n = gd.n;
  if (p < 0 || p > gd.d - 1)
    throw ValidationError("exterior power p=" + std::to_string(p) + " outside [0, " +
                          std::to_string(gd.d - 1) + "]");
  // Weights of Lambda^p C^{2n}: sums of p distinct vectors from {+-e_i}.
  std::map<IntVec, std::int64_t> remaining;
  const int m = 2 * n;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) != p) continue;
    IntVec w(n, 0);
    for (int b = 0; b < m; ++b)
      if (mask & (1u << b)) w[b / 2] += (b % 2 == 0) ? 2 : -2;
    remaining[w] += 1;
  }
  std::vector<ExteriorComponent> out;
  while (!remaining.empty()) {
    const IntVec* top = nullptr;
    for (const auto& [w, c] : remaining)
      if (dominant_twice(w, RootType::D) && (!top || w > *top)) top = &w;
    if (!top) throw std::logic_error("exterior power weight multiset has no dominant weight left");
    const Weight psi = from_twice(*top);
    Character ch(psi, RootType::D);
    for (const auto& [w, mult] : ch.weights()) {
      auto it = remaining.find(w);
      if (it == remaining.end() || it->second < mult)
        throw std::logic_error("exterior power peeling removed a weight that is not present");
      it->second -= mult;
      if (it->second == 0) remaining.erase(it);
    }
    out.push_back({psi, p});
  }
  return out;
}

}  // namespace zetaflow
