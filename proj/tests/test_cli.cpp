#include <bit>
#include <clocale>
#include <cstdlib>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "zetaflow/cli.hpp"
#include "zetaflow/error.hpp"

using namespace zetaflow;
using namespace zetaflow::cli;
using cd = std::complex<double>;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status;
  std::string out, err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "zetaflow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "zetaflow_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("float formatting round-trips bit patterns") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 2000; ++i) {
    const double x = std::bit_cast<double>(rng());
    if (!std::isfinite(x)) continue;
    CHECK(std::bit_cast<std::uint64_t>(std::strtod(format_double(x).c_str(), nullptr)) == std::bit_cast<std::uint64_t>(x));
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(-2.0) == "-2");

  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8")) {
    CHECK(format_double(1.5) == "1.5");
    CHECK(format_table({{cd(0.5), cd(1.25, -2.5), 0.0}}, Format::csv).find("0.5,0,1.25,-2.5,0") != std::string::npos);
  }
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("complex literals") {
  CHECK(parse_complex("2") == cd(2.0));
  CHECK(parse_complex("-1.5e-3") == cd(-1.5e-3));
  CHECK(parse_complex("2+1i") == cd(2.0, 1.0));
  CHECK(parse_complex("3-0.5i") == cd(3.0, -0.5));
  CHECK(parse_complex("1e-3+2e+1i") == cd(1e-3, 20.0));
  CHECK(parse_complex("i") == cd(0.0, 1.0));
  CHECK(parse_complex("-2i") == cd(0.0, -2.0));
  CHECK(parse_complex("4-i") == cd(4.0, -1.0));
  CHECK(parse_complex("(3, -1)") == cd(3.0, -1.0));
  CHECK_THROWS_AS(parse_complex(""), ValidationError);
  CHECK_THROWS_AS(parse_complex("3x"), ValidationError);
  CHECK_THROWS_AS(parse_complex("(3,1"), ValidationError);
}

TEST_CASE("tables") {
  const std::vector<Row> rows{{cd(4.0, 0.5), cd(-0.1508511357143317, 1e-300), 1.3659200082467667e-51},
                              {cd(0.1), cd(3.0), 0.0}};
  const std::string csv = format_table(rows, Format::csv);
  CHECK(csv.rfind("s_re,s_im,value_re,value_im,tail_bound\n", 0) == 0);
  CHECK(csv.find("4,0.5,-0.1508511357143317,1e-300,1.3659200082467667e-51\n") != std::string::npos);

  const auto back = parse_json_table(format_table(rows, Format::json));
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].s == rows[i].s);
    CHECK(back[i].value == rows[i].value);
    CHECK(back[i].tail_bound == rows[i].tail_bound);
  }
  CHECK(parse_json_table(format_table({}, Format::json)).empty());
  CHECK_THROWS_AS(parse_json_table("{\"s_re\": 1}"), ValidationError);
  CHECK_THROWS_AS(parse_json_table("[{\"s_re\": 1}]"), ValidationError);

  const fs::path p = scratch("table.csv");
  std::ostringstream unused;
  emit_table(rows, Format::csv, p, unused);
  CHECK(slurp(p) == csv);
  CHECK(unused.str().empty());
  CHECK_THROWS_AS(emit_table(rows, Format::csv, "/nonexistent-dir/x.csv", unused), ValidationError);
}

TEST_CASE("commands and exit statuses") {
  const fs::path empty = scratch("empty.json");
  {
    std::ofstream f(empty);
    f << "{\"d\": 3, \"volume\": 1, \"dim_chi\": 1, \"classes\": []}";
  }
  auto zeros = invoke({"selberg", "--spectrum", empty.string(), "--s", "0.5", "--s", "2+1i"});
  CHECK(zeros.status == 0);
  CHECK(zeros.out == "s_re,s_im,value_re,value_im,tail_bound\n0.5,0,0,0,0\n2,1,0,0,0\n");

  const fs::path a = scratch("gen_a.json"), b = scratch("gen_b.json");
  CHECK(invoke({"gen-spectrum", "--count", "1000", "--seed", "7", "-o", a.string()}).status == 0);
  CHECK(invoke({"gen-spectrum", "--count", "1000", "--seed", "7", "-o", b.string()}).status == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(load_length_spectrum(a).classes().size() == 1000);

  CHECK(invoke({"ruelle", "--spectrum", a.string(), "--s", "5"}).status == 0);
  const auto domain = invoke({"selberg", "--spectrum", a.string(), "--s", "0.5"});
  CHECK(domain.status == 2);
  CHECK(domain.err.find("s = 0.5+0i") != std::string::npos);

  CHECK(invoke({"selberg", "--s", "3"}).status == 1);
  CHECK(invoke({"selberg", "--spectrum", a.string()}).status == 1);
  CHECK(invoke({"selberg", "--spectrum", (scratch("missing.json")).string(), "--s", "3"}).status == 1);
  CHECK(invoke({"selberg", "--spectrum", a.string(), "--s", "3", "-d", "5"}).status == 1);
  CHECK(invoke({"selberg", "--spectrum", a.string(), "--s", "3", "--sigma", "1,0"}).status == 1);
  CHECK(invoke({"selberg", "--spectrum", a.string(), "--s", "3", "--lmax", "-1"}).status == 1);
  CHECK(invoke({"no-such-command"}).status == 1);
  CHECK(invoke({"heat-trace", "--spectrum", a.string(), "--t", "1+1i"}).status == 1);
  CHECK(invoke({"resolvent", "--spectrum", a.string(), "--s", "3"}).status == 1);
  CHECK(invoke({"verify", "--suite", "nope"}).status == 1);

  const fs::path eig = scratch("eig.json");
  {
    std::ofstream f(eig);
    f << "{\"entries\": [{\"t\": [4, 0], \"m\": 2}, {\"t\": [0, 0], \"m\": 3}]}";
  }
  const auto res = invoke({"residues", "--eigen", eig.string(), "--format", "json"});
  REQUIRE(res.status == 0);
  for (const auto& r : parse_json_table(res.out)) {
    const double expected = std::abs(r.s) < 1e-12 ? 6.0 : 2.0;
    CHECK(std::abs(r.value - expected) < 1e-6);
  }
  const auto pole = invoke({"continue", "--eigen", eig.string(), "--s", "2i"});
  CHECK(pole.status == 2);
  CHECK(pole.err.find("t_k") != std::string::npos);

  const auto line = invoke({"plancherel", "-d", "3", "--s-line", "0", "2", "3"});
  CHECK(line.out == "s_re,s_im,value_re,value_im,tail_bound\n0,0,0,0,0\n1,0,1,0,0\n2,0,4,0,0\n");

  const auto verify = invoke({"verify", "--suite", "lemma6"});
  CHECK(verify.status == 0);
  CHECK(verify.out.find("FAIL") == std::string::npos);
}

TEST_CASE("config file with flags winning") {
  const fs::path spec = scratch("cfg_spectrum.json");
  REQUIRE(invoke({"gen-spectrum", "--count", "50", "--seed", "3", "-o", spec.string()}).status == 0);
  const fs::path cfg = scratch("job.toml");
  {
    std::ofstream f(cfg);
    f << "spectrum = \"" << spec.string() << "\"\nformat = \"json\"\nlmax = 30\ns = [\"4\", \"5+1i\"]\n";
  }
  const auto from_file = invoke({"selberg", "--config", cfg.string()});
  REQUIRE(from_file.status == 0);
  CHECK(parse_json_table(from_file.out).size() == 2);

  const auto overridden = invoke({"selberg", "--config", cfg.string(), "--format", "csv", "--s", "6"});
  REQUIRE(overridden.status == 0);
  CHECK(overridden.out.rfind("s_re,", 0) == 0);
  CHECK(overridden.out.find("\n6,0,") != std::string::npos);
  CHECK(overridden.out.find("\n4,0,") == std::string::npos);
}
