#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "wsnloc/channel.h"
#include "wsnloc/random.h"
#include "wsnloc/types.h"

namespace wsnloc {

// Distances are floored at this value inside log terms and gradients (m).
inline constexpr double kMinDistance = 1e-3;

// Undirected measurement graph with anchors. For node i, unknown_neighbors is
// the set of non-anchor neighbors and anchor_neighbors the anchor neighbors.
class LocalizationGraph {
 public:
  LocalizationGraph(int n_nodes, std::vector<std::pair<int, int>> edges, std::vector<int> anchors);

  // Connects every pair closer than `radius`.
  static LocalizationGraph within_radius(const Matrix& positions, std::vector<int> anchors,
                                         double radius);

  int size() const { return n_nodes_; }
  bool is_anchor(int i) const { return anchor_[static_cast<std::size_t>(i)]; }
  bool connected() const;

  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  // Edges whose endpoints are both non-anchors; gossip pairs are drawn from these.
  const std::vector<std::pair<int, int>>& gossip_edges() const { return gossip_edges_; }
  const std::vector<int>& unknown_neighbors(int i) const {
    return unknown_neighbors_[static_cast<std::size_t>(i)];
  }
  const std::vector<int>& anchor_neighbors(int i) const {
    return anchor_neighbors_[static_cast<std::size_t>(i)];
  }
  const std::vector<int>& anchors() const { return anchors_; }

 private:
  int n_nodes_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::pair<int, int>> gossip_edges_;
  std::vector<int> anchors_;
  std::vector<bool> anchor_;
  std::vector<std::vector<int>> unknown_neighbors_;
  std::vector<std::vector<int>> anchor_neighbors_;
};

// Node i's copy of the positions it optimizes: itself plus its non-anchor
// neighbors. ids is sorted; positions row k belongs to ids[k].
struct LocalMap {
  int owner = 0;
  std::vector<int> ids;
  Matrix positions;

  // Row of `node` in positions, or -1.
  int index_of(int node) const;
  RowVector owner_position() const;
};

// Builds every node's map from a common initial estimate. Anchor nodes get a
// single-entry map holding their known position.
std::vector<LocalMap> make_local_maps(const LocalizationGraph& graph, const Matrix& initial);

// (-rssi - PL0) / (10 eta), an N(log10 d, sigma2 / (100 eta^2)) variable.
double log_residual(double rssi, const ChannelParams& params);

// Fresh residual for every edge (one RSSI draw per undirected edge); symmetric,
// zero off the edge set.
Matrix sample_log_residuals(const LocalizationGraph& graph, const Matrix& distances,
                            const ChannelParams& params, Rng& rng);

// f_i = sum_{j in N_i} (l_ij - log10 ||z_i - z_j||)^2 + sum_{k in M_i} (l_ik - log10 ||z_i - z_k||)^2.
// `known` holds anchor positions in the anchor rows (other rows ignored).
double local_cost(const LocalMap& map, const LocalizationGraph& graph, const Matrix& residuals,
                  const Matrix& known);

// Gradient of local_cost with respect to map.positions (same shape). Each pair
// term at distance d contributes -2 r (z_i - z_j) / (d^2 ln 10) to z_i and the
// opposite to z_j, with d floored at kMinDistance.
Matrix local_gradient(const LocalMap& map, const LocalizationGraph& graph, const Matrix& residuals,
                      const Matrix& known);

LocalMap local_step(const LocalMap& map, const Matrix& gradient, double gamma);

// Pairwise averaging of every entry both maps hold.
std::pair<LocalMap, LocalMap> gossip_step(const LocalMap& a, const LocalMap& b);

struct DomleEnvironment {
  LocalizationGraph graph;
  Matrix known;      // anchor rows hold true positions
  Matrix distances;  // true distances, drive the RSSI draws
  ChannelParams channel;
};

// One tick: fresh residuals, a local gradient step at every non-anchor node,
// then one uniformly drawn gossip edge. Throws ConfigError when no gossip edge
// exists.
void domle_round(std::vector<LocalMap>& maps, const DomleEnvironment& env, double gamma,
                 std::uint64_t tick, const RandomStream& stream);

// Row i is node i's own estimate (anchors: their known position).
Matrix owner_positions(const std::vector<LocalMap>& maps, const DomleEnvironment& env);

}  // namespace wsnloc
