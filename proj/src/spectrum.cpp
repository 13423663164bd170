#include "zetaflow/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>

#include "zetaflow/error.hpp"

namespace zetaflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite(std::complex<double> z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& m, int j) {
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  Eigen::MatrixXcd base = m;
  while (j > 0) {
    if (j & 1) result = result * base;
    j >>= 1;
    if (j) base = base * base;
  }
  return result;
}

}  // namespace

std::vector<double> canonical_angles(std::vector<double> angles) {
  // Folding theta to 2pi - theta is a sign change plus a 2pi shift, so folds
  // are only taken in pairs; an odd leftover stays on the smallest angle
  // unless some angle is 0.
  std::vector<std::pair<double, double>> folded;  // (folded, original)
  bool has_zero = false;
  int flips = 0;
  for (double a : angles) {
    if (!(a >= 0.0 && a < kTwoPi)) throw ValidationError("angles must lie in [0, 2pi)");
    double f = a;
    if (a > std::numbers::pi) {
      f = kTwoPi - a;
      ++flips;
    }
    if (f == 0.0) has_zero = true;
    folded.emplace_back(f, a);
  }
  std::sort(folded.begin(), folded.end(), std::greater<>());
  for (std::size_t i = 0; i < folded.size(); ++i) angles[i] = folded[i].first;
  if (!angles.empty() && (flips % 2) && !has_zero) {
    const auto& [f, a] = folded.back();
    angles.back() = a != f ? a : kTwoPi - f;
  }
  return angles;
}

PrimitiveClass::PrimitiveClass(double l0, std::vector<double> angles, Eigen::MatrixXcd chi)
    : l0_(l0), chi_(std::move(chi)) {
  if (!(std::isfinite(l0) && l0 > 0)) throw ValidationError("l0 must be positive and finite");
  angles_ = canonical_angles(std::move(angles));
  if (chi_.rows() == 0 || chi_.rows() != chi_.cols()) throw ValidationError("chi must be a nonempty square matrix");
  for (Eigen::Index i = 0; i < chi_.size(); ++i)
    if (!finite(chi_(i))) throw ValidationError("chi has a non-finite entry");

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(chi_);
  const auto& sv = svd.singularValues();
  chi_norm_ = sv(0);
  if (!(sv(sv.size() - 1) > 1e-14 * chi_norm_)) throw ValidationError("chi is not invertible");

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(chi_);
  if (es.info() == Eigen::Success) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> vsv(es.eigenvectors());
    const auto& s = vsv.singularValues();
    const double cond = s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1) : std::numeric_limits<double>::infinity();
    if (cond < 1e8) {
      diagonalizable_ = true;
      eigenvalues_ = es.eigenvalues();
    }
  }
}

std::complex<double> PrimitiveClass::chi_trace(int j) const {
  if (j < 0) throw ValidationError("power must be nonnegative");
  if (diagonalizable_) {
    std::complex<double> t = 0.0;
    for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i) t += std::pow(eigenvalues_(i), j);
    return t;
  }
  return matrix_power(chi_, j).trace();
}

LengthSpectrum::LengthSpectrum(GroupData gd, std::vector<PrimitiveClass> classes, double volume, int dim_chi)
    : gd_(std::move(gd)), classes_(std::move(classes)), volume_(volume), dim_chi_(dim_chi) {
  if (!(std::isfinite(volume) && volume > 0)) throw ValidationError("volume must be positive");
  if (dim_chi < 1) throw ValidationError("dim_chi must be positive");
  for (std::size_t i = 0; i < classes_.size(); ++i) {
    const auto& c = classes_[i];
    std::ostringstream where;
    where << "classes[" << i << "]";
    if (static_cast<int>(c.angles().size()) != gd_.n)
      throw ValidationError(where.str() + ".angles: expected " + std::to_string(gd_.n) + " angles");
    if (c.chi().rows() != dim_chi)
      throw ValidationError(where.str() + ".chi: expected size " + std::to_string(dim_chi));
  }
}

double LengthSpectrum::systole() const {
  if (classes_.empty()) return 0.0;
  double s = classes_.front().l0();
  for (const auto& c : classes_) s = std::min(s, c.l0());
  return s;
}

EigenSpectrum::EigenSpectrum(std::vector<EigenEntry> entries) : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!finite(entries_[i].t))
      throw ValidationError("entries[" + std::to_string(i) + "].t: not finite");
    if (entries_[i].m < 1)
      throw ValidationError("entries[" + std::to_string(i) + "].m: multiplicity must be positive");
  }
  std::stable_sort(entries_.begin(), entries_.end(), [](const EigenEntry& a, const EigenEntry& b) {
    if (a.t.real() != b.t.real()) return a.t.real() < b.t.real();
    return a.t.imag() < b.t.imag();
  });
}

std::vector<ClassPower> powers_up_to(const LengthSpectrum& ls, double lmax) {
  std::vector<ClassPower> out;
  const auto& classes = ls.classes();
  for (std::size_t ci = 0; ci < classes.size(); ++ci) {
    const auto& c = classes[ci];
    for (int j = 1; j * c.l0() <= lmax; ++j) {
      ClassPower p;
      p.class_index = ci;
      p.j = j;
      p.l0 = c.l0();
      p.length = j * c.l0();
      p.angles.reserve(c.angles().size());
      for (double a : c.angles()) p.angles.push_back(j * a);
      p.chi_trace = c.chi_trace(j);
      out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end(), [](const ClassPower& a, const ClassPower& b) {
    if (a.length != b.length) return a.length < b.length;
    if (a.class_index != b.class_index) return a.class_index < b.class_index;
    return a.j < b.j;
  });
  return out;
}

std::int64_t counting_function(const LengthSpectrum& ls, double r) {
  std::int64_t n = 0;
  for (const auto& c : ls.classes())
    for (int j = 1; j * c.l0() <= r; ++j) ++n;
  return n;
}

namespace {

// (length, N(length)) at each jump of the counting function up to the
// longest primitive class.
std::vector<std::pair<double, double>> counting_jumps(const LengthSpectrum& ls) {
  double top = 0.0;
  for (const auto& c : ls.classes()) top = std::max(top, c.l0());
  std::vector<double> lengths;
  for (const auto& c : ls.classes())
    for (int j = 1; j * c.l0() <= top; ++j) lengths.push_back(j * c.l0());
  std::sort(lengths.begin(), lengths.end());
  std::vector<std::pair<double, double>> jumps;
  for (std::size_t i = 0; i < lengths.size(); ++i)
    if (i + 1 == lengths.size() || lengths[i + 1] != lengths[i])
      jumps.emplace_back(lengths[i], static_cast<double>(i + 1));
  return jumps;
}

}  // namespace

double fitted_growth_exponent(const LengthSpectrum& ls) {
  const auto jumps = counting_jumps(ls);
  const std::size_t start = jumps.size() / 2;
  if (jumps.size() - start < 2) throw DomainError("too few lengths to fit a growth exponent");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(jumps.size() - start);
  for (std::size_t i = start; i < jumps.size(); ++i) {
    const double x = jumps[i].first;
    const double y = std::log(jumps[i].second * x);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = m * sxx - sx * sx;
  if (!(den > 0)) throw DomainError("degenerate length data for growth fit");
  return (m * sxy - sx * sy) / den;
}

double fitted_growth_constant(const LengthSpectrum& ls, double h) {
  if (ls.empty()) return 0.0;
  double c = 0.0, top = 0.0, inv_sum = 0.0;
  for (const auto& [r, n] : counting_jumps(ls)) c = std::max(c, n * std::exp(-h * r));
  for (const auto& cl : ls.classes()) {
    top = std::max(top, cl.l0());
    inv_sum += 1.0 / cl.l0();
  }
  // Past the longest primitive class only powers remain: N(R) <= R sum 1/l0.
  const double r_star = std::max(top, 1.0 / h);
  return std::max(c, r_star * inv_sum * std::exp(-h * r_star));
}

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : eng_(seed) {}
  // 53 random bits in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 == 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    has_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }
  Eigen::MatrixXcd unitary(int dim) {
    Eigen::MatrixXcd g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int k = 0; k < dim; ++k) g(i, k) = {normal(), normal()};
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

LengthSpectrum synthesize(const GroupData& gd, int count, double systole, std::uint64_t seed, int dim_chi,
                          double chi_norm, double volume) {
  if (count < 0) throw ValidationError("count must be nonnegative");
  if (!(systole > 0 && std::isfinite(systole))) throw ValidationError("systole must be positive");
  if (!(chi_norm >= 1 && std::isfinite(chi_norm))) throw ValidationError("chi_norm must be at least 1");
  if (dim_chi < 1) throw ValidationError("dim_chi must be positive");

  const double h = 2.0 * gd.rho_norm;
  const double base = std::expint(h * systole);
  auto mass = [&](double l) { return std::expint(h * l) - base; };

  double top = systole + 1.0 / h;
  while (mass(top) < count) top += 1.0 / h;

  auto inverse = [&](double target) {
    double lo = systole, hi = top;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (mass(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  Sampler rng(seed);
  std::vector<PrimitiveClass> classes;
  classes.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double l0 = inverse((i + rng.uniform()) * 1.0);
    std::vector<double> angles(gd.n);
    for (double& a : angles) a = kTwoPi * rng.uniform();
    Eigen::MatrixXcd u = rng.unitary(dim_chi);
    Eigen::MatrixXcd v = rng.unitary(dim_chi);
    Eigen::VectorXcd s(dim_chi);
    for (int k = 0; k < dim_chi; ++k) s(k) = 1.0 + (chi_norm - 1.0) * rng.uniform();
    classes.emplace_back(l0, std::move(angles), u * s.asDiagonal() * v);
  }
  return LengthSpectrum(gd, std::move(classes), volume, dim_chi);
}

TwistGrowthCert certify_twist_growth(const LengthSpectrum& ls, double lmax) {
  if (ls.empty()) throw ValidationError("cannot certify twist growth of an empty spectrum");
  TwistGrowthCert cert;
  for (const auto& c : ls.classes()) cert.k = std::max(cert.k, std::log(c.chi_norm()) / c.l0());
  for (const auto& p : powers_up_to(ls, lmax))
    cert.K = std::max(cert.K, std::abs(p.chi_trace) * std::exp(-cert.k * p.length));
  if (cert.K == 0.0) cert.K = std::numeric_limits<double>::min();
  return cert;
}

bool TwistGrowthCert::validates(const LengthSpectrum& ls, double lmax) const {
  for (const auto& p : powers_up_to(ls, lmax))
    if (std::abs(p.chi_trace) > K * std::exp(k * p.length) * (1 + 1e-12)) return false;
  return true;
}

// JSON

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw ValidationError(where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) bad(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad(where, std::string("missing field '") + key + "'");
  return *it;
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) bad(where, "expected an integer");
  return v.get<int>();
}

std::complex<double> as_complex(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) bad(where, "expected [re, im]");
  return {as_double(v[0], where + "[0]"), as_double(v[1], where + "[1]")};
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
  if (!out) throw ValidationError("failed writing " + path.string());
}

}  // namespace

std::string to_json_text(const LengthSpectrum& ls) {
  json classes = json::array();
  for (const auto& c : ls.classes()) {
    json chi = json::array();
    for (Eigen::Index i = 0; i < c.chi().rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < c.chi().cols(); ++k) row.push_back(complex_json(c.chi()(i, k)));
      chi.push_back(std::move(row));
    }
    classes.push_back({{"l0", c.l0()}, {"angles", c.angles()}, {"chi", std::move(chi)}});
  }
  json doc = {{"d", ls.group().d}, {"volume", ls.volume()}, {"dim_chi", ls.dim_chi()}, {"classes", std::move(classes)}};
  return doc.dump(1) + "\n";
}

LengthSpectrum length_spectrum_from_json_text(const std::string& text) {
  const json doc = parse_text(text);
  const int d = as_int(field(doc, "d", "$"), "$.d");
  GroupData gd;
  try {
    gd = GroupData::for_dimension(d);
  } catch (const ValidationError& e) {
    bad("$.d", e.what());
  }
  const double volume = as_double(field(doc, "volume", "$"), "$.volume");
  const int dim_chi = as_int(field(doc, "dim_chi", "$"), "$.dim_chi");
  if (dim_chi < 1) bad("$.dim_chi", "must be positive");
  const json& arr = field(doc, "classes", "$");
  if (!arr.is_array()) bad("$.classes", "expected an array");

  std::vector<PrimitiveClass> classes;
  classes.reserve(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "$.classes[" + std::to_string(i) + "]";
    const json& c = arr[i];
    const double l0 = as_double(field(c, "l0", where), where + ".l0");
    if (!(l0 > 0)) bad(where + ".l0", "must be positive");
    const json& ja = field(c, "angles", where);
    if (!ja.is_array() || static_cast<int>(ja.size()) != gd.n)
      bad(where + ".angles", "expected " + std::to_string(gd.n) + " angles");
    std::vector<double> angles;
    for (std::size_t k = 0; k < ja.size(); ++k)
      angles.push_back(as_double(ja[k], where + ".angles[" + std::to_string(k) + "]"));
    const json& jc = field(c, "chi", where);
    if (!jc.is_array() || static_cast<int>(jc.size()) != dim_chi)
      bad(where + ".chi", "expected " + std::to_string(dim_chi) + " rows");
    Eigen::MatrixXcd chi(dim_chi, dim_chi);
    for (int r = 0; r < dim_chi; ++r) {
      const std::string rw = where + ".chi[" + std::to_string(r) + "]";
      if (!jc[r].is_array() || static_cast<int>(jc[r].size()) != dim_chi)
        bad(rw, "expected " + std::to_string(dim_chi) + " entries");
      for (int k = 0; k < dim_chi; ++k) chi(r, k) = as_complex(jc[r][k], rw + "[" + std::to_string(k) + "]");
    }
    try {
      classes.emplace_back(l0, std::move(angles), std::move(chi));
    } catch (const ValidationError& e) {
      bad(where, e.what());
    }
  }
  try {
    return LengthSpectrum(gd, std::move(classes), volume, dim_chi);
  } catch (const ValidationError& e) {
    bad("$", e.what());
  }
}

std::string to_json_text(const EigenSpectrum& es) {
  json entries = json::array();
  for (const auto& e : es.entries()) entries.push_back({{"t", complex_json(e.t)}, {"m", e.m}});
  return json{{"entries", std::move(entries)}}.dump(1) + "\n";
}

EigenSpectrum eigen_spectrum_from_json_text(const std::string& text) {
  const json doc = parse_text(text);
  const json& arr = field(doc, "entries", "$");
  if (!arr.is_array()) bad("$.entries", "expected an array");
  std::vector<EigenEntry> entries;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "$.entries[" + std::to_string(i) + "]";
    EigenEntry e;
    e.t = as_complex(field(arr[i], "t", where), where + ".t");
    e.m = as_int(field(arr[i], "m", where), where + ".m");
    if (e.m < 1) bad(where + ".m", "multiplicity must be positive");
    entries.push_back(e);
  }
  return EigenSpectrum(std::move(entries));
}

LengthSpectrum load_length_spectrum(const std::filesystem::path& path) {
  return length_spectrum_from_json_text(read_file(path));
}
void save(const LengthSpectrum& ls, const std::filesystem::path& path) { write_file(path, to_json_text(ls)); }
EigenSpectrum load_eigen_spectrum(const std::filesystem::path& path) {
  return eigen_spectrum_from_json_text(read_file(path));
}
void save(const EigenSpectrum& es, const std::filesystem::path& path) { write_file(path, to_json_text(es)); }

}  // namespace zetaflow
