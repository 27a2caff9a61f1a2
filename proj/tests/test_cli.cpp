#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "caphj/csv.hpp"
#include "caphj/frac_core.hpp"
#include "caphj/run_config.hpp"
#include "doctest.h"

using namespace caphj;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  fs::path dir = fs::temp_directory_path() / "caphj_unit_cli";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("emit_path_csv writes the canonical (t,value) serialization") {
  fs::path dir = temp_dir();
  TimeGrid g = TimeGrid::uniform(1.0, 2);
  SampledPath p(g, {1.0, 0.5, 1.0 / 3.0});
  fs::path file = dir / "path.csv";
  emit_path_csv(p, file.string());
  Table back = read_csv(file.string());
  REQUIRE(back.names == std::vector<std::string>{"t", "value"});
  REQUIRE(back.rows() == 3);
  CHECK(back.columns[1][2] == 1.0 / 3.0);
}

TEST_CASE("emit_csv: header-only tables, formatting, round trip") {
  fs::path dir = temp_dir();
  Table empty;
  empty.add_column("t");
  empty.add_column("value");
  fs::path p_empty = dir / "empty.csv";
  emit_csv(empty, p_empty.string());
  CHECK(slurp(p_empty) == "t,value\n");

  Table one;
  one.add_column("t");
  one.add_column("value");
  one.push_row({0.1, 1.0 / 3.0});
  fs::path p_one = dir / "one.csv";
  emit_csv(one, p_one.string());
  Table back = read_csv(p_one.string());
  REQUIRE(back.rows() == 1);
  CHECK(back.columns[0][0] == 0.1);
  CHECK(back.columns[1][0] == 1.0 / 3.0);  // 17 significant digits round-trip

  CHECK_THROWS_AS(one.push_row({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(emit_csv(one, "/nonexistent_dir_xyz/out.csv"), std::invalid_argument);
}

TEST_CASE("config parsing: comments, duplicates, missing cmd") {
  fs::path dir = temp_dir();
  fs::path cfg = dir / "good.cfg";
  {
    std::ofstream out(cfg);
    out << "# a comment\ncmd = rate\nD = 1.2\nalpha = 0.5  # trailing comment\n";
  }
  RunConfig config = parse_config_file(cfg.string());
  CHECK(config.cmd == "rate");
  CHECK(config.get_real("D") == 1.2);
  CHECK(config.get_real("alpha") == 0.5);

  fs::path dup = dir / "dup.cfg";
  {
    std::ofstream out(dup);
    out << "cmd = rate\nD = 1\nD = 2\n";
  }
  CHECK_THROWS_AS(parse_config_file(dup.string()), std::invalid_argument);

  fs::path nocmd = dir / "nocmd.cfg";
  {
    std::ofstream out(nocmd);
    out << "D = 1\n";
  }
  CHECK_THROWS_AS(parse_config_file(nocmd.string()), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_file((dir / "missing.cfg").string()), std::invalid_argument);
}

TEST_CASE("validation rejects unknown keys, subcommands and bad numbers") {
  RunConfig config;
  config.cmd = "fode";
  config.kv = {{"alpha", "0.5"}, {"A", "1"}, {"k", "1"}, {"bogus", "3"}};
  CHECK_THROWS_WITH_AS(validate_config(config),
                       doctest::Contains("unknown parameter 'bogus'"),
                       std::invalid_argument);
  config.kv.erase("bogus");
  CHECK_NOTHROW(validate_config(config));
  config.kv.erase("A");
  CHECK_THROWS_WITH_AS(validate_config(config), doctest::Contains("requires parameter 'A'"),
                       std::invalid_argument);
  config.cmd = "frobnicate";
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);

  RunConfig bad;
  bad.cmd = "rate";
  bad.kv = {{"D", "1.2x"}, {"alpha", "0.5"}};
  CHECK_THROWS_WITH_AS(bad.get_real("D"), doctest::Contains("'D'"), std::invalid_argument);
}

TEST_CASE("run: preconditions surface as invalid_argument naming the parameter") {
  fs::path dir = temp_dir();
  RunConfig config;
  config.cmd = "fode";
  config.kv = {{"alpha", "1.5"}, {"A", "1"}, {"k", "1"}};
  CHECK_THROWS_WITH_AS(run(config, dir.string()), doctest::Contains("alpha"),
                       std::invalid_argument);
  config.kv = {{"alpha", "0.5"}, {"A", "-1"}, {"k", "1"}};
  CHECK_THROWS_WITH_AS(run(config, dir.string()), doctest::Contains("A"),
                       std::invalid_argument);
}

TEST_CASE("run: hj with the ergodic solution as initial datum stays near it") {
  fs::path dir = temp_dir();
  RunConfig hj;
  hj.cmd = "hj";
  hj.kv = {{"alpha", "0.5"}, {"f", "sinsq"}, {"g", "vstar"}, {"n", "32"},
           {"T", "5"},       {"M", "32"},    {"out", "hj_vstar"}};
  run(hj, dir.string());
  std::string summary = slurp(dir / "hj_vstar_summary.txt");
  CHECK(summary.find("asymptotic_gap") != std::string::npos);
  // the gap of a stationary start stays at the discretization floor
  std::istringstream in(summary);
  std::string line;
  double gap = 1e300;
  while (std::getline(in, line)) {
    if (line.rfind("asymptotic_gap", 0) == 0) gap = std::stod(line.substr(line.find('=') + 1));
  }
  CHECK(gap <= 0.05);
}

TEST_CASE("run: small fode and rate runs produce the expected artifacts") {
  fs::path dir = temp_dir();
  RunConfig fode;
  fode.cmd = "fode";
  fode.kv = {{"alpha", "0.5"}, {"A", "1"},      {"k", "1"},
             {"T", "10"},      {"M", "64"},     {"out", "fode_small.csv"}};
  run(fode, dir.string());
  Table t = read_csv((dir / "fode_small.csv").string());
  REQUIRE(t.names.size() == 5);
  CHECK(t.names[1] == "E_numeric");
  CHECK(t.rows() == 65);
  CHECK(t.columns[1][0] == 1.0);  // E(0) = 1

  RunConfig rate;
  rate.cmd = "rate";
  rate.kv = {{"D", "1.5"}, {"alpha", "0.5"}, {"out", "rate.csv"}};
  run(rate, dir.string());
  Table r = read_csv((dir / "rate.csv").string());
  CHECK(r.columns[4][0] == 0.0);  // exponent at D = 3/2
  CHECK(r.columns[5][0] == 0.0);  // flagged non-decaying

  RunConfig caputo;
  caputo.cmd = "caputo";
  caputo.kv = {{"alpha", "0.5"}, {"beta", "2"}, {"M", "128"}, {"out", "caputo_small.csv"}};
  run(caputo, dir.string());
  Table c = read_csv((dir / "caputo_small.csv").string());
  REQUIRE(c.names == std::vector<std::string>{"t", "numeric", "exact", "abs_err"});
  CHECK(c.rows() == 128);
  CHECK(c.columns[3][127] <= 1e-2);  // coarse grid still lands near the power rule

  RunConfig beta;
  beta.cmd = "beta";
  beta.kv = {{"alpha", "0.5"}, {"invert", "1"}, {"out", "beta_half.csv"}};
  run(beta, dir.string());
  Table b = read_csv((dir / "beta_half.csv").string());
  CHECK(b.columns[1][0] == doctest::Approx(0.5).epsilon(1e-12));
}
