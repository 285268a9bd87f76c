#pragma once

#include <string>
#include <vector>

#include "wsnloc/random.h"
#include "wsnloc/types.h"

namespace wsnloc {

// Axis-aligned deployment box anchored at the origin (meters). depth is only
// meaningful for p = 3.
struct Area {
  double width = 5.0;
  double height = 9.0;
  double depth = 0.0;
};

// Ground truth for one deployment: true positions (N x p), anchor indices and
// the deployment area.
struct Scenario {
  Matrix positions;
  std::vector<int> anchors;
  Area area;

  int size() const { return static_cast<int>(positions.rows()); }
  int dim() const { return static_cast<int>(positions.cols()); }
  bool is_anchor(int i) const;
  std::vector<int> unknowns() const;

  // Throws ConfigError when N < p+1, p not in {2,3}, an anchor index is out of
  // range or duplicated, or a position lies outside the area.
  void validate() const;
};

// Pairwise Euclidean distances (m).
Matrix distance_matrix(const Matrix& positions);

enum class ScenarioMode { kGrid, kUniform, kExplicit };

struct ScenarioSpec {
  ScenarioMode mode = ScenarioMode::kUniform;
  int n = 50;
  int p = 2;
  Area area;
  int rows = 0;  // grid mode; 0 picks a near-square layout
  int cols = 0;
  std::vector<int> anchors;
  std::string positions_file;  // explicit mode
};

// Grid mode places rows x cols points with uniform spacing covering the area
// (corners included) and keeps the first n in row-major order. Uniform mode
// samples i.i.d. in the area. Explicit mode reads the scenario CSV and takes
// anchors from its is_anchor column; spec.anchors is ignored there.
Scenario generate_scenario(const ScenarioSpec& spec, Rng& rng);

// Scenario CSV: header node,x_m,y_m[,z_m],is_anchor. Reading also accepts a
// positions CSV without is_anchor (no anchors).
void write_scenario_csv(const Scenario& scenario, const std::string& path);
Scenario read_scenario_csv(const std::string& path);

}  // namespace wsnloc
