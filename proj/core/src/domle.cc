#include "wsnloc/domle.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>

#include "wsnloc/error.h"

namespace wsnloc {

LocalizationGraph::LocalizationGraph(int n_nodes, std::vector<std::pair<int, int>> edges,
                                     std::vector<int> anchors)
    : n_nodes_(n_nodes),
      anchors_(std::move(anchors)),
      anchor_(static_cast<std::size_t>(n_nodes), false),
      unknown_neighbors_(static_cast<std::size_t>(n_nodes)),
      anchor_neighbors_(static_cast<std::size_t>(n_nodes)) {
  for (int a : anchors_) {
    if (a < 0 || a >= n_nodes) throw ConfigError("graph: anchor index out of range");
    anchor_[static_cast<std::size_t>(a)] = true;
  }
  for (auto [i, j] : edges) {
    if (i == j || i < 0 || j < 0 || i >= n_nodes || j >= n_nodes) {
      throw ConfigError("graph: invalid edge " + std::to_string(i) + "-" + std::to_string(j));
    }
    edges_.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  for (auto [i, j] : edges_) {
    (is_anchor(j) ? anchor_neighbors_ : unknown_neighbors_)[static_cast<std::size_t>(i)].push_back(j);
    (is_anchor(i) ? anchor_neighbors_ : unknown_neighbors_)[static_cast<std::size_t>(j)].push_back(i);
    if (!is_anchor(i) && !is_anchor(j)) gossip_edges_.emplace_back(i, j);
  }
  for (auto& v : unknown_neighbors_) std::sort(v.begin(), v.end());
  for (auto& v : anchor_neighbors_) std::sort(v.begin(), v.end());
}

LocalizationGraph LocalizationGraph::within_radius(const Matrix& positions, std::vector<int> anchors,
                                                   double radius) {
  const int n = static_cast<int>(positions.rows());
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((positions.row(i) - positions.row(j)).norm() <= radius) edges.emplace_back(i, j);
    }
  }
  return LocalizationGraph(n, std::move(edges), std::move(anchors));
}

bool LocalizationGraph::connected() const {
  if (n_nodes_ == 0) return true;
  std::vector<bool> seen(static_cast<std::size_t>(n_nodes_), false);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = true;
  int count = 1;
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (const auto* nbrs : {&unknown_neighbors(i), &anchor_neighbors(i)}) {
      for (int j : *nbrs) {
        if (!seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = true;
          ++count;
          frontier.push(j);
        }
      }
    }
  }
  return count == n_nodes_;
}

int LocalMap::index_of(int node) const {
  const auto it = std::lower_bound(ids.begin(), ids.end(), node);
  if (it == ids.end() || *it != node) return -1;
  return static_cast<int>(it - ids.begin());
}

RowVector LocalMap::owner_position() const { return positions.row(index_of(owner)); }

std::vector<LocalMap> make_local_maps(const LocalizationGraph& graph, const Matrix& initial) {
  std::vector<LocalMap> maps(static_cast<std::size_t>(graph.size()));
  for (int i = 0; i < graph.size(); ++i) {
    auto& map = maps[static_cast<std::size_t>(i)];
    map.owner = i;
    map.ids = {i};
    if (!graph.is_anchor(i)) {
      const auto& nbrs = graph.unknown_neighbors(i);
      map.ids.insert(map.ids.end(), nbrs.begin(), nbrs.end());
      std::sort(map.ids.begin(), map.ids.end());
    }
    map.positions.resize(static_cast<Eigen::Index>(map.ids.size()), initial.cols());
    for (std::size_t k = 0; k < map.ids.size(); ++k) {
      map.positions.row(static_cast<Eigen::Index>(k)) = initial.row(map.ids[k]);
    }
  }
  return maps;
}

double log_residual(double rssi, const ChannelParams& params) {
  return (-rssi - params.pl0) / (10.0 * params.eta);
}

Matrix sample_log_residuals(const LocalizationGraph& graph, const Matrix& distances,
                            const ChannelParams& params, Rng& rng) {
  Matrix residuals = Matrix::Zero(graph.size(), graph.size());
  for (auto [i, j] : graph.edges()) {
    const double r = log_residual(sample_rssi(i, j, distances(i, j), params, rng).value, params);
    residuals(i, j) = r;
    residuals(j, i) = r;
  }
  return residuals;
}

namespace {

// Distance with the kMinDistance floor. Coincident estimates (e.g. rows that
// saturated the same box corner in doMDS) get the floored cost and no pull
// along the undefined direction.
double floored_distance(const RowVector& diff) { return std::max(diff.norm(), kMinDistance); }

template <typename PairFn>
void for_each_term(const LocalMap& map, const LocalizationGraph& graph, const Matrix& known,
                   PairFn&& fn) {
  const int i = map.owner;
  const int row_i = map.index_of(i);
  const RowVector zi = map.positions.row(row_i);
  for (int j : graph.unknown_neighbors(i)) {
    const int row_j = map.index_of(j);
    fn(j, row_j, RowVector(zi - map.positions.row(row_j)));
  }
  for (int k : graph.anchor_neighbors(i)) fn(k, -1, RowVector(zi - known.row(k)));
}

}  // namespace

double local_cost(const LocalMap& map, const LocalizationGraph& graph, const Matrix& residuals,
                  const Matrix& known) {
  if (graph.is_anchor(map.owner)) return 0.0;
  double cost = 0.0;
  for_each_term(map, graph, known, [&](int j, int, const RowVector& diff) {
    const double d = floored_distance(diff);
    const double r = residuals(map.owner, j) - std::log10(d);
    cost += r * r;
  });
  return cost;
}

Matrix local_gradient(const LocalMap& map, const LocalizationGraph& graph, const Matrix& residuals,
                      const Matrix& known) {
  Matrix grad = Matrix::Zero(map.positions.rows(), map.positions.cols());
  if (graph.is_anchor(map.owner)) return grad;
  const int row_i = map.index_of(map.owner);
  for_each_term(map, graph, known, [&](int j, int row_j, const RowVector& diff) {
    const double d = floored_distance(diff);
    const double r = residuals(map.owner, j) - std::log10(d);
    const RowVector term = (-2.0 * r / (d * d * std::numbers::ln10)) * diff;
    grad.row(row_i) += term;
    if (row_j >= 0) grad.row(row_j) -= term;
  });
  return grad;
}

LocalMap local_step(const LocalMap& map, const Matrix& gradient, double gamma) {
  LocalMap next = map;
  next.positions -= gamma * gradient;
  return next;
}

std::pair<LocalMap, LocalMap> gossip_step(const LocalMap& a, const LocalMap& b) {
  LocalMap out_a = a;
  LocalMap out_b = b;
  for (std::size_t ka = 0; ka < a.ids.size(); ++ka) {
    const int kb = b.index_of(a.ids[ka]);
    if (kb < 0) continue;
    const auto ra = static_cast<Eigen::Index>(ka);
    const RowVector mean = 0.5 * (a.positions.row(ra) + b.positions.row(kb));
    out_a.positions.row(ra) = mean;
    out_b.positions.row(kb) = mean;
  }
  return {std::move(out_a), std::move(out_b)};
}

void domle_round(std::vector<LocalMap>& maps, const DomleEnvironment& env, double gamma,
                 std::uint64_t tick, const RandomStream& stream) {
  const auto& graph = env.graph;
  if (graph.gossip_edges().empty()) {
    throw ConfigError("doMLE: no edge joins two non-anchor nodes; gossip is impossible");
  }
  Rng rssi_rng = stream.substream(tick, StreamPurpose::kEdgeRssi);
  const Matrix residuals = sample_log_residuals(graph, env.distances, env.channel, rssi_rng);

  for (int i = 0; i < graph.size(); ++i) {
    if (graph.is_anchor(i)) continue;
    auto& map = maps[static_cast<std::size_t>(i)];
    map = local_step(map, local_gradient(map, graph, residuals, env.known), gamma);
  }

  Rng gossip_rng = stream.substream(tick, StreamPurpose::kGossip);
  const auto& edges = graph.gossip_edges();
  const auto [i, j] = edges[static_cast<std::size_t>(uniform_index(gossip_rng, static_cast<int>(edges.size())))];
  auto [mi, mj] = gossip_step(maps[static_cast<std::size_t>(i)], maps[static_cast<std::size_t>(j)]);
  maps[static_cast<std::size_t>(i)] = std::move(mi);
  maps[static_cast<std::size_t>(j)] = std::move(mj);
}

Matrix owner_positions(const std::vector<LocalMap>& maps, const DomleEnvironment& env) {
  Matrix z(env.graph.size(), env.known.cols());
  for (int i = 0; i < env.graph.size(); ++i) {
    z.row(i) = env.graph.is_anchor(i) ? RowVector(env.known.row(i))
                                      : maps[static_cast<std::size_t>(i)].owner_position();
  }
  return z;
}

}  // namespace wsnloc
