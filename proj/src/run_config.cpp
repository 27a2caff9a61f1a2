#include "caphj/run_config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <stdexcept>

namespace caphj {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

double RunConfig::get_real(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("missing required parameter '" + key + "'");
  try {
    size_t pos = 0;
    double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("parameter '" + key + "' is not a number: " + it->second);
  }
}

double RunConfig::get_real(const std::string& key, double fallback) const {
  return has(key) ? get_real(key) : fallback;
}

int RunConfig::get_int(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::invalid_argument("missing required parameter '" + key + "'");
  try {
    size_t pos = 0;
    long v = std::stol(it->second, &pos, 10);
    if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw std::invalid_argument("parameter '" + key + "' is not an integer: " + it->second);
  }
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::string RunConfig::get_str(const std::string& key, const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file " + path);
  RunConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key or value");
    }
    if (key == "cmd") {
      config.cmd = value;
    } else if (!config.kv.emplace(key, value).second) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": duplicate key " + key);
    }
  }
  if (config.cmd.empty()) {
    throw std::invalid_argument(path + ": config must set cmd = <subcommand>");
  }
  return config;
}

void validate_config(const RunConfig& config) {
  static const std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>>
      schema = {
          // cmd -> {required keys, optional keys}
          {"caputo", {{"alpha", "beta"}, {"M", "T", "grid", "gamma", "out"}}},
          {"mlf", {{"alpha"}, {"z", "tmin", "tmax", "count", "out"}}},
          {"beta", {{"alpha"}, {"z0", "z1", "invert", "out"}}},
          {"counterexample", {{"alpha"}, {"kmax", "resolution", "out"}}},
          {"fode", {{"alpha", "A", "k"}, {"T", "M", "grid", "gamma", "eps", "out"}}},
          {"hj", {{"alpha", "f", "n", "T", "M"}, {"m", "dim", "grid", "gamma", "a", "g",
                                                  "snapshots", "out"}}},
          {"rate", {{"D", "alpha"}, {"t", "out"}}},
      };
  auto it = schema.find(config.cmd);
  if (it == schema.end()) {
    throw std::invalid_argument("unknown subcommand '" + config.cmd + "'");
  }
  const auto& [required, optional] = it->second;
  for (const auto& key : required) {
    if (!config.has(key)) {
      throw std::invalid_argument("subcommand '" + config.cmd +
                                  "' requires parameter '" + key + "'");
    }
  }
  for (const auto& [key, value] : config.kv) {
    (void)value;
    if (key == "seed") continue;  // reserved, accepted everywhere, unused
    if (!required.count(key) && !optional.count(key)) {
      throw std::invalid_argument("unknown parameter '" + key + "' for subcommand '" +
                                  config.cmd + "'");
    }
  }
}

}  // namespace caphj
