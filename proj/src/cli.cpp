#include "zetaflow/cli.hpp"

#include <CLI11.hpp>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "zetaflow/continuation.hpp"
#include "zetaflow/error.hpp"
#include "zetaflow/heat.hpp"

namespace zetaflow::cli {

using cd = std::complex<double>;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 11> kCommands{{
    {Command::gen_spectrum, "gen-spectrum"},
    {Command::plancherel, "plancherel"},
    {Command::selberg, "selberg"},
    {Command::ruelle, "ruelle"},
    {Command::log_derivative, "log-derivative"},
    {Command::heat_trace, "heat-trace"},
    {Command::resolvent, "resolvent"},
    {Command::continue_l, "continue"},
    {Command::residues, "residues"},
    {Command::factorization_check, "factorization-check"},
    {Command::verify, "verify"},
}};

std::string format_complex(cd z) {
  std::string out = format_double(z.real());
  if (z.imag() >= 0 || std::isnan(z.imag())) out += '+';
  return out + format_double(z.imag()) + "i";
}

double parse_real(std::string_view text) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ValidationError("not a number: '" + std::string(text) + "'");
  return v;
}

struct Inputs {
  GroupData gd;
  Weight sigma;
};

Inputs group_and_sigma(const JobConfig& c, const LengthSpectrum* ls) {
  Inputs in;
  if (ls) {
    in.gd = ls->group();
    if (c.d != 0 && c.d != in.gd.d)
      throw ValidationError("-d " + std::to_string(c.d) + " conflicts with the spectrum file (d = " +
                            std::to_string(in.gd.d) + ")");
  } else {
    in.gd = GroupData::for_dimension(c.d == 0 ? 3 : c.d);
  }
  in.sigma = c.sigma.empty() ? Weight::zero(in.gd.n) : Weight::parse(c.sigma);
  validate_m_weight(in.gd, in.sigma);
  return in;
}

LengthSpectrum require_spectrum(const JobConfig& c) {
  if (c.spectrum_path.empty()) throw ValidationError(std::string(command_name(c.command)) + " needs --spectrum");
  return load_length_spectrum(c.spectrum_path);
}

EigenSpectrum require_eigen(const JobConfig& c) {
  if (c.eigen_path.empty()) throw ValidationError(std::string(command_name(c.command)) + " needs --eigen");
  return load_eigen_spectrum(c.eigen_path);
}

void require_grid(const JobConfig& c) {
  if (c.s_grid.empty()) throw ValidationError(std::string(command_name(c.command)) + " needs at least one --s value");
}

// Evaluates f on every grid point, naming the offending s on a domain error.
template <class F>
std::vector<Row> over_grid(const std::vector<cd>& grid, F&& f) {
  std::vector<Row> rows;
  for (const cd& s : grid) {
    try {
      rows.push_back(f(s));
    } catch (const DomainError& e) {
      throw DomainError("at s = " + format_complex(s) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<Row> evaluate(const JobConfig& c) {
  TruncationPolicy tp = c.truncation;
  tp.reduction.deterministic = c.deterministic;
  tp.validate();

  switch (c.command) {
    case Command::gen_spectrum:
    case Command::verify:
      break;

    case Command::plancherel: {
      require_grid(c);
      const auto in = group_and_sigma(c, nullptr);
      const auto p = plancherel_polynomial(in.gd, in.sigma);
      return over_grid(c.s_grid, [&](cd s) { return Row{s, p(s), 0.0}; });
    }

    case Command::selberg:
    case Command::ruelle:
    case Command::log_derivative: {
      require_grid(c);
      const auto ls = require_spectrum(c);
      const auto in = group_and_sigma(c, &ls);
      const ZetaSeries series(ls, in.sigma, tp);
      return over_grid(c.s_grid, [&](cd s) {
        const ZetaValue v = c.command == Command::selberg  ? series.selberg_log(s)
                            : c.command == Command::ruelle ? series.ruelle_log(s)
                                                           : series.log_derivative(s);
        return Row{s, v.value, v.tail_bound};
      });
    }

    case Command::heat_trace: {
      require_grid(c);
      for (const cd& t : c.s_grid)
        if (t.imag() != 0.0) throw ValidationError("heat-trace needs real t values, got " + format_complex(t));
      if (!c.eigen_path.empty()) {
        const auto es = load_eigen_spectrum(c.eigen_path);
        return over_grid(c.s_grid, [&](cd t) { return Row{t, spectral_heat_trace(es, t.real()), 0.0}; });
      }
      const auto ls = require_spectrum(c);
      const auto in = group_and_sigma(c, &ls);
      const GeometricHeatTrace heat(ls, in.sigma, tp);
      return over_grid(c.s_grid, [&](cd t) { return Row{t, heat(t.real()).total, 0.0}; });
    }

    case Command::resolvent: {
      require_grid(c);
      if (c.anchors.empty()) throw ValidationError("resolvent needs at least one --anchor");
      auto anchors_for = [&](cd s) {
        std::vector<cd> all{s};
        all.insert(all.end(), c.anchors.begin(), c.anchors.end());
        return AnchorSet(all);
      };
      if (!c.eigen_path.empty()) {
        const auto es = load_eigen_spectrum(c.eigen_path);
        return over_grid(c.s_grid, [&](cd s) { return Row{s, resolvent_trace_spectral(es, anchors_for(s)), 0.0}; });
      }
      const auto ls = require_spectrum(c);
      const auto in = group_and_sigma(c, &ls);
      if (c.via_heat)
        return over_grid(c.s_grid, [&](cd s) {
          return Row{s, resolvent_trace_via_heat(ls, in.sigma, anchors_for(s), tp), 0.0};
        });
      const ZetaSeries series(ls, in.sigma, tp);
      return over_grid(c.s_grid, [&](cd s) {
        const AnchorSet a = anchors_for(s);
        const auto coeffs = partial_fraction_coeffs(a);
        double tail = 0.0;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
          tail += std::abs(coeffs[i]) * series.log_derivative(a.s()[i]).tail_bound / (2.0 * std::abs(a.s()[i]));
        return Row{s, resolvent_trace_geometric(ls, in.sigma, a, tp), tail};
      });
    }

    case Command::continue_l:
    case Command::residues: {
      const auto es = require_eigen(c);
      const auto in = group_and_sigma(c, nullptr);
      const ContinuedL cl(es, plancherel_polynomial(in.gd, in.sigma), c.dim_chi, c.volume);
      if (c.command == Command::continue_l) {
        require_grid(c);
        return over_grid(c.s_grid, [&](cd s) { return Row{s, cl(s), 0.0}; });
      }
      const auto points = c.s_grid.empty() ? cl.singularities() : c.s_grid;
      return over_grid(points, [&](cd s) {
        const auto r = residue_order(cl, s);
        return Row{s, r.raw, r.residual};
      });
    }

    case Command::factorization_check: {
      require_grid(c);
      const auto ls = require_spectrum(c);
      const auto in = group_and_sigma(c, &ls);
      const ZetaSeries series(ls, in.sigma, tp);
      const RuelleFactorization factored(ls, in.sigma, tp);
      return over_grid(c.s_grid, [&](cd s) {
        const ZetaValue direct = series.ruelle_log(s);
        const ZetaValue product = factored.ruelle_log(s);
        return Row{s, direct.value - product.value, direct.tail_bound + product.tail_bound};
      });
    }
  }
  return {};
}

void write_text(const std::string& text, const std::filesystem::path& path, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path.string());
  f << text;
  if (!f) throw ValidationError("cannot write " + path.string());
}

int run_verify(const JobConfig& c, std::ostream& out) {
  ReductionOptions reduction;
  reduction.deterministic = c.deterministic;
  const auto checks = run_verify_suite(c.suite, c.seed, reduction);
  std::ostringstream os;
  os << "suite,check,max_error,tolerance,status\n";
  bool all = true;
  for (const auto& ch : checks) {
    os << ch.suite << ',' << ch.name << ',' << format_double(ch.max_error) << ',' << format_double(ch.tolerance)
       << ',' << (ch.passed() ? "PASS" : "FAIL") << '\n';
    all = all && ch.passed();
  }
  write_text(os.str(), c.output, out);
  return all ? 0 : 2;
}

}  // namespace

Command parse_command(std::string_view name) {
  for (const auto& [c, n] : kCommands)
    if (n == name) return c;
  throw ValidationError("unknown command '" + std::string(name) + "'");
}

std::string_view command_name(Command c) {
  for (const auto& [k, n] : kCommands)
    if (k == c) return n;
  return "?";
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw std::logic_error("float formatting failed");
  return std::string(buf.data(), ptr);
}

cd parse_complex(std::string_view text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ') t += ch;
  if (t.empty()) throw ValidationError("empty complex number");
  if (t.front() == '(') {
    const auto comma = t.find(',');
    if (t.back() != ')' || comma == std::string::npos) throw ValidationError("malformed complex number '" + t + "'");
    return {parse_real(std::string_view(t).substr(1, comma - 1)),
            parse_real(std::string_view(t).substr(comma + 1, t.size() - comma - 2))};
  }
  if (t.back() != 'i') return {parse_real(t), 0.0};
  t.pop_back();
  // The sign that separates real and imaginary parts, skipping exponents.
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;)
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  auto imag_of = [](std::string_view v) {
    if (v.empty() || v == "+") return 1.0;
    if (v == "-") return -1.0;
    return parse_real(v);
  };
  if (split == std::string::npos) return {0.0, imag_of(t)};
  return {parse_real(std::string_view(t).substr(0, split)), imag_of(std::string_view(t).substr(split))};
}

std::string format_table(const std::vector<Row>& rows, Format format) {
  std::ostringstream os;
  if (format == Format::csv) {
    os << "s_re,s_im,value_re,value_im,tail_bound\n";
    for (const auto& r : rows)
      os << format_double(r.s.real()) << ',' << format_double(r.s.imag()) << ',' << format_double(r.value.real())
         << ',' << format_double(r.value.imag()) << ',' << format_double(r.tail_bound) << '\n';
    return os.str();
  }
  auto num = [](double x) { return std::isfinite(x) ? format_double(x) : std::string("null"); };
  os << "[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << (i ? ",\n " : "\n ") << "{\"s_re\": " << num(r.s.real()) << ", \"s_im\": " << num(r.s.imag())
       << ", \"value_re\": " << num(r.value.real()) << ", \"value_im\": " << num(r.value.imag())
       << ", \"tail_bound\": " << num(r.tail_bound) << "}";
  }
  os << (rows.empty() ? "]\n" : "\n]\n");
  return os.str();
}

std::vector<Row> parse_json_table(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("table is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ValidationError("table must be a JSON array");
  auto get = [](const nlohmann::json& rec, const char* key) {
    const auto& v = rec.at(key);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  std::vector<Row> rows;
  try {
    for (const auto& rec : doc)
      rows.push_back({{get(rec, "s_re"), get(rec, "s_im")},
                      {get(rec, "value_re"), get(rec, "value_im")},
                      get(rec, "tail_bound")});
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed table record: ") + e.what());
  }
  return rows;
}

void emit_table(const std::vector<Row>& rows, Format format, const std::filesystem::path& path,
                std::ostream& fallback) {
  write_text(format_table(rows, format), path, fallback);
}

int run(const JobConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.command == Command::verify) return run_verify(config, out);
    if (config.command == Command::gen_spectrum) {
      const GroupData gd = GroupData::for_dimension(config.d == 0 ? 3 : config.d);
      const auto ls = synthesize(gd, config.count, config.systole, config.seed, config.dim_chi, config.chi_norm,
                                 config.volume);
      write_text(to_json_text(ls), config.output, out);
      return 0;
    }
    emit_table(evaluate(config), config.format, config.output, out);
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Twisted Selberg and Ruelle zeta functions from length-spectrum data.", "zetaflow"};
  app.set_config("--config", "", "TOML or INI file with default flag values");

  JobConfig c;
  std::string command, format = "csv";
  std::vector<std::string> s_values, t_values, anchor_values, s_line;
  std::vector<std::string> names;
  for (const auto& [k, n] : kCommands) names.emplace_back(n);

  app.add_option("command", command, "What to run")->required()->check(CLI::IsMember(names));
  app.add_option("-d,--dimension", c.d, "Odd dimension d >= 3 of the manifold");
  app.add_option("--sigma", c.sigma, "Highest weight of sigma in M-hat, e.g. 1/2,-1/2");
  app.add_option("--spectrum", c.spectrum_path, "Length spectrum JSON file");
  app.add_option("--eigen", c.eigen_path, "Eigenvalue spectrum JSON file");
  app.add_option("--s", s_values, "Evaluation points: 2, 3+1i, (3,1)");
  app.add_option("--t", t_values, "Heat-trace times (alias of --s for real points)");
  app.add_option("--s-line", s_line, "S0 S1 COUNT: COUNT points from S0 to S1")->expected(3);
  app.add_option("--anchor", anchor_values, "Extra anchors s_2..s_N for resolvent");
  app.add_flag("--via-heat", c.via_heat, "resolvent: integrate the geometric heat trace instead");
  app.add_option("--lmax", c.truncation.lmax, "Longest closed geodesic summed");
  app.add_option("--tail-eps", c.truncation.tail_eps, "Largest accepted tail majorant");
  app.add_option("--abscissa-margin", c.truncation.abscissa_margin, "Refuse s left of abscissa - margin");
  app.add_option("-o,--output", c.output, "Output file (default: stdout)");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--seed", c.seed, "Random seed");
  app.add_flag("--deterministic", c.deterministic, "Bit-identical results for any ZETAFLOW_THREADS");
  app.add_option("--count", c.count, "gen-spectrum: number of primitive classes");
  app.add_option("--systole", c.systole, "gen-spectrum: shortest length");
  app.add_option("--dim-chi", c.dim_chi, "Dimension of the twist");
  app.add_option("--chi-norm", c.chi_norm, "gen-spectrum: operator norm bound of chi");
  app.add_option("--volume", c.volume, "Volume of the manifold");
  app.add_option("--suite", c.suite, "verify: lemma6, identities, trace, residues, factorization or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    c.command = parse_command(command);
    c.format = format == "json" ? Format::json : Format::csv;
    for (const auto& v : s_values) c.s_grid.push_back(parse_complex(v));
    for (const auto& v : t_values) c.s_grid.push_back(parse_complex(v));
    if (!s_line.empty()) {
      const cd a = parse_complex(s_line[0]), b = parse_complex(s_line[1]);
      int n = 0;
      auto [ptr, ec] = std::from_chars(s_line[2].data(), s_line[2].data() + s_line[2].size(), n);
      if (ec != std::errc() || ptr != s_line[2].data() + s_line[2].size() || n < 1)
        throw ValidationError("--s-line COUNT must be a positive integer");
      for (int k = 0; k < n; ++k) c.s_grid.push_back(n == 1 ? a : a + (b - a) * (static_cast<double>(k) / (n - 1)));
    }
    for (const auto& v : anchor_values) c.anchors.push_back(parse_complex(v));
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return run(c, out, err);
}

}  // namespace zetaflow::cli
