#pragma once

#include <map>
#include <string>

namespace caphj {

/// A run: subcommand plus its flat key-value parameters. Unknown keys are
/// rejected at validation; all numeric parameters are checked against the
/// target module's preconditions before dispatch.
struct RunConfig {
  std::string cmd;
  std::map<std::string, std::string> kv;

  bool has(const std::string& key) const { return kv.count(key) > 0; }
  /// Typed getters; throw std::invalid_argument naming the key on bad input.
  double get_real(const std::string& key) const;
  double get_real(const std::string& key, double fallback) const;
  int get_int(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  std::string get_str(const std::string& key, const std::string& fallback) const;
};

/// Parses a flat `key = value` file with # comments; the `cmd` key selects
/// the subcommand.
RunConfig parse_config_file(const std::string& path);

/// Rejects unknown keys and missing required keys for config.cmd.
void validate_config(const RunConfig& config);

/// Dispatches to the module behind config.cmd, writing artifacts under
/// out_dir (relative output paths are resolved against it). Returns the
/// process exit code contract: 0 ok; throws std::invalid_argument
/// (validation, exit 2) or numerical_error (exit 3).
void run(const RunConfig& config, const std::string& out_dir);

}  // namespace caphj
