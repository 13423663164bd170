#pragma once

// Length spectra (primitive closed geodesics with holonomy and twist) and
// eigenvalue spectra, with validation, synthesis and JSON persistence.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "zetaflow/repr.hpp"

namespace zetaflow {

/// One primitive conjugacy class gamma_0.
class PrimitiveClass {
 public:
  /// Angles are reduced to a canonical representative of their M-conjugacy
  /// class. Throws ValidationError on l0 <= 0, non-finite data or a
  /// singular twist matrix.
  PrimitiveClass(double l0, std::vector<double> angles, Eigen::MatrixXcd chi);

  double l0() const { return l0_; }
  const std::vector<double>& angles() const { return angles_; }
  const Eigen::MatrixXcd& chi() const { return chi_; }
  /// Operator 2-norm of chi.
  double chi_norm() const { return chi_norm_; }
  /// tr(chi^j).
  std::complex<double> chi_trace(int j) const;

  bool operator==(const PrimitiveClass& o) const {
    return l0_ == o.l0_ && angles_ == o.angles_ && chi_ == o.chi_;
  }

 private:
  double l0_;
  std::vector<double> angles_;
  Eigen::MatrixXcd chi_;
  double chi_norm_ = 0.0;
  bool diagonalizable_ = false;
  Eigen::VectorXcd eigenvalues_;
};

/// Representative of the Spin(2n) torus class of angles in [0, 2pi) under
/// permutations and even sign changes: sorted descending, all but possibly
/// the last angle in [0, pi]. Throws ValidationError outside [0, 2pi).
std::vector<double> canonical_angles(std::vector<double> angles);

/// gamma_0^j.
struct ClassPower {
  std::size_t class_index = 0;
  int j = 1;
  double l0 = 0.0;
  double length = 0.0;
  /// j times the primitive angles, not reduced.
  std::vector<double> angles;
  std::complex<double> chi_trace;
};

class LengthSpectrum {
 public:
  LengthSpectrum(GroupData gd, std::vector<PrimitiveClass> classes, double volume, int dim_chi);

  const GroupData& group() const { return gd_; }
  const std::vector<PrimitiveClass>& classes() const { return classes_; }
  double volume() const { return volume_; }
  int dim_chi() const { return dim_chi_; }
  bool empty() const { return classes_.empty(); }
  /// Smallest l0; zero for an empty spectrum.
  double systole() const;

  bool operator==(const LengthSpectrum& o) const {
    return gd_.d == o.gd_.d && classes_ == o.classes_ && volume_ == o.volume_ && dim_chi_ == o.dim_chi_;
  }

 private:
  GroupData gd_;
  std::vector<PrimitiveClass> classes_;
  double volume_;
  int dim_chi_;
};

struct EigenEntry {
  std::complex<double> t;
  int m = 1;
  bool operator==(const EigenEntry&) const = default;
};

/// Finite truncation of spec(A#_chi(sigma)) with algebraic multiplicities,
/// kept sorted by real part (then imaginary part).
class EigenSpectrum {
 public:
  EigenSpectrum() = default;
  explicit EigenSpectrum(std::vector<EigenEntry> entries);
  const std::vector<EigenEntry>& entries() const { return entries_; }
  bool operator==(const EigenSpectrum&) const = default;

 private:
  std::vector<EigenEntry> entries_;
};

struct TwistGrowthCert {
  double K = 0.0;
  double k = 0.0;
  /// True when |tr chi(gamma)| <= K e^{k l(gamma)} on every power up to lmax.
  bool validates(const LengthSpectrum& ls, double lmax) const;
};

/// Powers gamma_0^j with j l0 <= lmax, ordered by (length, class, j).
std::vector<ClassPower> powers_up_to(const LengthSpectrum& ls, double lmax);

/// #{powers with length <= r}.
std::int64_t counting_function(const LengthSpectrum& ls, double r);

/// Least-squares slope h of log(N(R) R) against R over the upper range of
/// the primitive lengths (the N(R) ~ C e^{hR}/(hR) model).
double fitted_growth_exponent(const LengthSpectrum& ls);

/// Smallest C' with N(R) <= C' e^{hR} on the computed range, widened so
/// the bound also covers the powers beyond the longest primitive class.
double fitted_growth_constant(const LengthSpectrum& ls, double h);

/// Deterministic synthetic spectrum whose primitive counting function
/// follows Li(e^{2|rho| l}) above the systole.
LengthSpectrum synthesize(const GroupData& gd, int count, double systole, std::uint64_t seed,
                          int dim_chi, double chi_norm, double volume = 1.0);

TwistGrowthCert certify_twist_growth(const LengthSpectrum& ls, double lmax);

LengthSpectrum load_length_spectrum(const std::filesystem::path& path);
void save(const LengthSpectrum& ls, const std::filesystem::path& path);
EigenSpectrum load_eigen_spectrum(const std::filesystem::path& path);
void save(const EigenSpectrum& es, const std::filesystem::path& path);

std::string to_json_text(const LengthSpectrum& ls);
LengthSpectrum length_spectrum_from_json_text(const std::string& text);
std::string to_json_text(const EigenSpectrum& es);
EigenSpectrum eigen_spectrum_from_json_text(const std::string& text);

}  // namespace zetaflow
