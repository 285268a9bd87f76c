#include "wsnloc/scenario.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "wsnloc/csv.h"
#include "wsnloc/error.h"

namespace wsnloc {

bool Scenario::is_anchor(int i) const {
  return std::find(anchors.begin(), anchors.end(), i) != anchors.end();
}

std::vector<int> Scenario::unknowns() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i) {
    if (!is_anchor(i)) out.push_back(i);
  }
  return out;
}

void Scenario::validate() const {
  const int n = size();
  const int p = dim();
  if (p != 2 && p != 3) throw ConfigError("scenario: dimension p must be 2 or 3");
  if (n < p + 1) {
    throw ConfigError("scenario: need N >= p+1 nodes, got N=" + std::to_string(n));
  }
  std::set<int> seen;
  for (int a : anchors) {
    if (a < 0 || a >= n) throw ConfigError("scenario: anchor index " + std::to_string(a) + " out of range");
    if (!seen.insert(a).second) throw ConfigError("scenario: duplicate anchor " + std::to_string(a));
  }
  const double extent[3] = {area.width, area.height, area.depth};
  constexpr double kSlack = 1e-9;
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < p; ++k) {
      const double v = positions(i, k);
      if (!std::isfinite(v) || v < -kSlack || v > extent[k] + kSlack) {
        throw ConfigError("scenario: node " + std::to_string(i) + " lies outside the area");
      }
    }
  }
}

Matrix distance_matrix(const Matrix& positions) {
  const auto n = positions.rows();
  Matrix d = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(i, j) = (positions.row(i) - positions.row(j)).norm();
      d(j, i) = d(i, j);
    }
  }
  return d;
}

Scenario generate_scenario(const ScenarioSpec& spec, Rng& rng) {
  if (spec.mode == ScenarioMode::kExplicit) {
    Scenario s = read_scenario_csv(spec.positions_file);
    s.area.width = std::max(s.area.width, spec.area.width);
    s.area.height = std::max(s.area.height, spec.area.height);
    s.area.depth = std::max(s.area.depth, spec.area.depth);
    s.validate();
    return s;
  }
  if (spec.p != 2 && spec.p != 3) throw ConfigError("scenario: p must be 2 or 3");
  if (spec.n < spec.p + 1) throw ConfigError("scenario: need N >= p+1");
  if (!(spec.area.width > 0 && spec.area.height > 0 && (spec.p == 2 || spec.area.depth > 0))) {
    throw ConfigError("scenario: area extents must be positive");
  }

  Scenario s;
  s.area = spec.area;
  s.anchors = spec.anchors;
  s.positions.resize(spec.n, spec.p);

  if (spec.mode == ScenarioMode::kGrid) {
    if (spec.p != 2) throw ConfigError("scenario: grid mode supports p = 2 only");
    int rows = spec.rows;
    int cols = spec.cols;
    if (rows <= 0 || cols <= 0) {
      cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(spec.n))));
      rows = (spec.n + cols - 1) / cols;
    }
    if (rows * cols < spec.n) {
      throw ConfigError("scenario: grid " + std::to_string(rows) + "x" + std::to_string(cols) +
                        " cannot hold " + std::to_string(spec.n) + " nodes");
    }
    const double dx = cols > 1 ? spec.area.width / (cols - 1) : 0.0;
    const double dy = rows > 1 ? spec.area.height / (rows - 1) : 0.0;
    for (int i = 0; i < spec.n; ++i) {
      s.positions(i, 0) = (i % cols) * dx;
      s.positions(i, 1) = (i / cols) * dy;
    }
  } else {
    const double extent[3] = {spec.area.width, spec.area.height, spec.area.depth};
    for (int i = 0; i < spec.n; ++i) {
      for (int k = 0; k < spec.p; ++k) s.positions(i, k) = uniform(rng, 0.0, extent[k]);
    }
  }
  s.validate();
  return s;
}

void write_scenario_csv(const Scenario& scenario, const std::string& path) {
  static const char* const kAxes[] = {"x_m", "y_m", "z_m"};
  CsvTable table;
  table.header = {"node"};
  for (int k = 0; k < scenario.dim(); ++k) table.header.emplace_back(kAxes[k]);
  table.header.emplace_back("is_anchor");
  for (int i = 0; i < scenario.size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    for (int k = 0; k < scenario.dim(); ++k) row.push_back(format_number(scenario.positions(i, k)));
    row.emplace_back(scenario.is_anchor(i) ? "1" : "0");
    table.rows.push_back(std::move(row));
  }
  write_csv(table, path);
}

Scenario read_scenario_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  Scenario s;
  s.positions = read_positions_csv(path);
  // A plain positions file (no is_anchor column) has no anchors.
  if (std::find(table.header.begin(), table.header.end(), "is_anchor") != table.header.end()) {
    const std::size_t anchor_col = table.column("is_anchor");
    const std::size_t node_col = table.column("node");
    for (const auto& row : table.rows) {
      if (row[anchor_col] == "1") s.anchors.push_back(std::stoi(row[node_col]));
    }
  }
  std::sort(s.anchors.begin(), s.anchors.end());
  // Area defaults to the bounding box when the caller does not override it.
  const RowVector hi = s.positions.colwise().maxCoeff();
  s.area.width = hi(0);
  s.area.height = hi(1);
  s.area.depth = s.positions.cols() > 2 ? hi(2) : 0.0;
  return s;
}

}  // namespace wsnloc
