#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "caphj/errors.hpp"
#include "caphj/run_config.hpp"

namespace {

// Collects flag values into the flat key-value map shared with config files.
struct KvCollector {
  caphj::RunConfig config;
  std::string out_dir = ".";

  void add_option(CLI::App* app, const std::string& flag, const std::string& key,
                  const std::string& desc) {
    app->add_option_function<std::string>(
        flag, [this, key](const std::string& v) { config.kv[key] = v; }, desc);
  }
};

int dispatch(const caphj::RunConfig& config, const std::string& out_dir) {
  try {
    caphj::run(config, out_dir);
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error (validation): " << e.what() << "\n";
    return 2;
  } catch (const caphj::numerical_error& e) {
    std::cerr << "error (numerical): " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"caphj: Caputo-time Hamilton-Jacobi laboratory"};
  app.require_subcommand(1);

  KvCollector kc;

  std::string config_path;
  CLI::App* run_cmd = app.add_subcommand("run", "run a key = value config file");
  run_cmd->add_option("config", config_path, "config file path")->required();
  run_cmd->add_option("--out-dir", kc.out_dir, "directory for output artifacts");

  struct Sub {
    const char* name;
    const char* desc;
    std::vector<std::pair<const char*, const char*>> options;  // flag -> key
  };
  const std::vector<Sub> subs = {
      {"caputo", "discrete Caputo derivative of t^beta against the power rule",
       {{"--alpha", "alpha"}, {"--beta", "beta"}, {"--M", "M"}, {"--T", "T"},
        {"--grid", "grid"}, {"--gamma", "gamma"}, {"--out", "out"}}},
      {"mlf", "Mittag-Leffler evaluation: point value or decay ladder with bounds",
       {{"--alpha", "alpha"}, {"--z", "z"}, {"--tmin", "tmin"}, {"--tmax", "tmax"},
        {"--count", "count"}, {"--out", "out"}}},
      {"beta", "regularized incomplete beta / its half-level inverse",
       {{"--alpha", "alpha"}, {"--z0", "z0"}, {"--z1", "z1"}, {"--invert", "invert"},
        {"--out", "out"}}},
      {"counterexample", "oscillating function with nonnegative Caputo derivative",
       {{"--alpha", "alpha"}, {"--kmax", "kmax"}, {"--resolution", "resolution"},
        {"--out", "out"}}},
      {"fode", "fractional relaxation d^alpha E + A E^k = 0 with decay envelope",
       {{"--alpha", "alpha"}, {"--A", "A"}, {"--k", "k"}, {"--T", "T"}, {"--M", "M"},
        {"--grid", "grid"}, {"--gamma", "gamma"}, {"--eps", "eps"}, {"--out", "out"}}},
      {"hj", "torus Hamilton-Jacobi evolution with ergodic/Aubry diagnostics",
       {{"--alpha", "alpha"}, {"--m", "m"}, {"--dim", "dim"}, {"--n", "n"}, {"--T", "T"},
        {"--M", "M"}, {"--grid", "grid"}, {"--gamma", "gamma"}, {"--a", "a"},
        {"--f", "f"}, {"--g", "g"}, {"--snapshots", "snapshots"}, {"--out", "out"}}},
      {"rate", "box-counting convergence rate bound on the Aubry set",
       {{"--D", "D"}, {"--alpha", "alpha"}, {"--t", "t"}, {"--out", "out"}}},
  };
  for (const auto& sub : subs) {
    CLI::App* cmd = app.add_subcommand(sub.name, sub.desc);
    for (const auto& [flag, key] : sub.options) kc.add_option(cmd, flag, key, key);
    cmd->add_option("--out-dir", kc.out_dir, "directory for output artifacts");
    kc.add_option(cmd, "--seed", "seed", "reserved (no stochastic component)");
  }

  CLI11_PARSE(app, argc, argv);

  if (run_cmd->parsed()) {
    try {
      kc.config = caphj::parse_config_file(config_path);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error (validation): " << e.what() << "\n";
      return 2;
    }
  } else {
    kc.config.cmd = app.get_subcommands().front()->get_name();
  }
  return dispatch(kc.config, kc.out_dir);
}
