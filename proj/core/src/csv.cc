#include "wsnloc/csv.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wsnloc/error.h"

namespace wsnloc {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw IoError("csv: missing column '" + name + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("'" + path + "' is empty");
  table.header = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      throw IoError("'" + path + "': row has " + std::to_string(cells.size()) + " cells, expected " +
                    std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_csv(const CsvTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out << ',';
      out << cells[k];
    }
    out << '\n';
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

namespace {
const char* const kAxisNames[] = {"x_m", "y_m", "z_m"};
}

void write_positions_csv(const Matrix& positions, const std::string& path) {
  CsvTable table;
  table.header = {"node"};
  for (Eigen::Index k = 0; k < positions.cols(); ++k) table.header.emplace_back(kAxisNames[k]);
  for (Eigen::Index i = 0; i < positions.rows(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (Eigen::Index k = 0; k < positions.cols(); ++k) row.push_back(format_number(positions(i, k)));
    table.rows.push_back(std::move(row));
  }
  write_csv(table, path);
}

Matrix read_positions_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  std::vector<std::size_t> axes;
  for (const char* name : kAxisNames) {
    for (std::size_t k = 0; k < table.header.size(); ++k) {
      if (table.header[k] == name) axes.push_back(k);
    }
  }
  if (axes.size() < 2) throw IoError("'" + path + "': expected x_m and y_m columns");
  const std::size_t node_col = table.column("node");
  Matrix z(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(axes.size()));
  for (const auto& row : table.rows) {
    const long node = std::stol(row[node_col]);
    if (node < 0 || node >= z.rows()) throw IoError("'" + path + "': node index out of range");
    for (std::size_t k = 0; k < axes.size(); ++k) {
      z(node, static_cast<Eigen::Index>(k)) = std::stod(row[axes[k]]);
    }
  }
  return z;
}

}  // namespace wsnloc
