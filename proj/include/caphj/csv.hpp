#pragma once

#include <string>
#include <vector>

namespace caphj {

/// Rectangular table of named real columns.
struct Table {
  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;

  void add_column(std::string name) {
    names.push_back(std::move(name));
    columns.emplace_back();
  }
  void push_row(const std::vector<double>& row);
  size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Writes the table: header row of names, then rows of 17-significant-digit
/// decimal floats, newline terminated. Byte-stable across runs on identical
/// inputs. Throws std::invalid_argument for ragged tables or unwritable paths.
void emit_csv(const Table& table, const std::string& path);

/// Reads a CSV written by emit_csv (used by round-trip checks).
Table read_csv(const std::string& path);

/// One double, 17 significant digits, shared by all text emitters.
std::string format_real(double v);

struct SampledPath;  // frac_core

/// Canonical two-column (t,value) serialization of a sampled path.
void emit_path_csv(const SampledPath& path, const std::string& file);

}  // namespace caphj
