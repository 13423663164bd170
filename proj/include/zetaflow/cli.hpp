#pragma once

// Command-line surface: job configuration, evaluation commands, tabular
// output and the verification suites.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "zetaflow/zeta.hpp"

namespace zetaflow::cli {

enum class Command {
  gen_spectrum,
  plancherel,
  selberg,
  ruelle,
  log_derivative,
  heat_trace,
  resolvent,
  continue_l,
  residues,
  factorization_check,
  verify,
};

Command parse_command(std::string_view name);
std::string_view command_name(Command c);

enum class Format { csv, json };

struct JobConfig {
  Command command = Command::selberg;
  /// 0 means "take it from the spectrum file" (or 3 when there is none).
  int d = 0;
  /// Empty means the zero weight.
  std::string sigma;
  std::filesystem::path spectrum_path;
  std::filesystem::path eigen_path;
  std::vector<std::complex<double>> s_grid;
  /// Extra anchors s_2..s_N for `resolvent`; s_1 runs over s_grid.
  std::vector<std::complex<double>> anchors;
  bool via_heat = false;
  TruncationPolicy truncation;
  /// Empty means standard output.
  std::filesystem::path output;
  Format format = Format::csv;
  std::uint64_t seed = 1;
  bool deterministic = false;
  // gen-spectrum, and the identity term of `continue`/`residues`.
  int count = 1000;
  double systole = 0.5;
  int dim_chi = 1;
  double chi_norm = 1.0;
  double volume = 1.0;
  std::string suite = "all";
};

struct Row {
  std::complex<double> s;
  std::complex<double> value;
  double tail_bound = 0.0;
};

/// Shortest representation that reparses to the same bits; '.' decimal
/// separator regardless of locale.
std::string format_double(double x);

/// "2", "-1.5e-3", "2+1i", "3-0.5i", "i", "-2i" or "(re,im)".
std::complex<double> parse_complex(std::string_view text);

/// CSV with header s_re,s_im,value_re,value_im,tail_bound, or a JSON array
/// of records with the same keys.
std::string format_table(const std::vector<Row>& rows, Format format);
std::vector<Row> parse_json_table(const std::string& text);

/// Writes to path, or to fallback when path is empty.
void emit_table(const std::vector<Row>& rows, Format format, const std::filesystem::path& path,
                std::ostream& fallback);

/// Exit status 0 on success, 1 on invalid input or configuration, 2 on a
/// numerical-domain error or a failed verification.
int run(const JobConfig& config, std::ostream& out, std::ostream& err);

/// Parses flags (and an optional --config file; flags win) and runs.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct VerifyCheck {
  std::string suite;
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool passed() const { return max_error < tolerance; }
};

/// Suites: lemma6, identities, trace, residues, factorization, all.
std::vector<VerifyCheck> run_verify_suite(std::string_view suite, std::uint64_t seed,
                                          const ReductionOptions& reduction);

}  // namespace zetaflow::cli
