#include "caphj/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "caphj/frac_core.hpp"

namespace caphj {

void Table::push_row(const std::vector<double>& row) {
  if (row.size() != columns.size()) {
    throw std::invalid_argument("Table::push_row: row width mismatch");
  }
  for (size_t c = 0; c < row.size(); ++c) columns[c].push_back(row[c]);
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void emit_csv(const Table& table, const std::string& path) {
  for (const auto& col : table.columns) {
    if (col.size() != table.rows()) {
      throw std::invalid_argument("emit_csv: table is not rectangular");
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("emit_csv: cannot open path " + path);
  for (size_t c = 0; c < table.names.size(); ++c) {
    if (c) out << ',';
    out << table.names[c];
  }
  out << '\n';
  for (size_t r = 0; r < table.rows(); ++r) {
    for (size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out << ',';
      out << format_real(table.columns[c][r]);
    }
    out << '\n';
  }
  if (!out) throw std::invalid_argument("emit_csv: write failed for " + path);
}

void emit_path_csv(const SampledPath& path, const std::string& file) {
  Table table;
  table.add_column("t");
  table.add_column("value");
  for (size_t j = 0; j < path.values.size(); ++j) {
    table.push_row({path.grid.node(static_cast<int>(j)), path.values[j]});
  }
  emit_csv(table, file);
}

Table read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("read_csv: cannot open path " + path);
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("read_csv: empty file");
  std::stringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) table.add_column(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::vector<double> values;
    while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
    table.push_row(values);
  }
  return table;
}

}  // namespace caphj
