#include "wsnloc/domds.h"

#include <cmath>
#include <string>

#include "wsnloc/error.h"
#include "wsnloc/mds.h"

namespace wsnloc {

DomdsVariant parse_domds_variant(std::string_view name) {
  if (name == "literal") return DomdsVariant::kLiteral;
  if (name == "decoupled") return DomdsVariant::kDecoupled;
  throw ConfigError("unknown doMDS variant '" + std::string(name) +
                    "' (expected literal|decoupled)");
}

std::string_view to_string(DomdsVariant variant) {
  return variant == DomdsVariant::kLiteral ? "literal" : "decoupled";
}

int AtsEvent::receiver_count() const {
  int count = 0;
  for (auto r : received) count += r;
  return count;
}

AtsEvent sample_ats(int n_nodes, double q, Rng& rng) {
  if (!(q > 0.0 && q < 1.0)) {
    throw ConfigError("ATS reception probability must lie in (0, 1), got " + std::to_string(q));
  }
  if (n_nodes < 2) throw ConfigError("ATS needs at least two nodes");
  AtsEvent ev;
  ev.q = q;
  ev.broadcaster = uniform_index(rng, n_nodes);
  ev.received.assign(static_cast<std::size_t>(n_nodes), 0);
  for (int i = 0; i < n_nodes; ++i) {
    if (i == ev.broadcaster) continue;
    ev.received[static_cast<std::size_t>(i)] = bernoulli(rng, q) ? 1 : 0;
  }
  return ev;
}

CommStats& CommStats::operator+=(const CommStats& other) {
  ticks += other.ticks;
  broadcasts_sent += other.broadcasts_sent;
  messages_delivered += other.messages_delivered;
  scalars_transmitted += other.scalars_transmitted;
  return *this;
}

double delta_estimate(int n_nodes, double own_row_avg, std::optional<double> sender_row_avg,
                      double q) {
  double delta = own_row_avg / n_nodes;
  if (sender_row_avg) delta += *sender_row_avg / q;
  return delta;
}

double mhat_entry(double row_avg_i, double row_avg_j, double s_ij, double delta_i) {
  return 0.5 * (row_avg_i + row_avg_j) - 0.5 * (s_ij + delta_i);
}

RowVector compute_y(const NodeState& node, double delta, double s_to_sender, bool received,
                    const std::optional<RowAverageMsg>& msg, int n_nodes, double q) {
  const double m_ii = mhat_entry(node.last_row_avg, node.last_row_avg, 0.0, delta);
  RowVector y = m_ii * node.u_row;
  if (received) {
    if (!msg) {
      throw ProtocolError("node " + std::to_string(node.id) +
                          " flagged as phase-1 receiver but no message was delivered");
    }
    const double m_is = mhat_entry(node.last_row_avg, msg->row_avg, s_to_sender, delta);
    y += (n_nodes / q) * m_is * msg->u_row;
  }
  return y;
}

Matrix compute_lambda_matrix(const NodeState& node, const RowVector& y, bool received,
                             const std::optional<ProductMsg>& msg, int n_nodes, double q) {
  Matrix lam = node.u_row.transpose() * y;
  if (received) {
    if (!msg) {
      throw ProtocolError("node " + std::to_string(node.id) +
                          " flagged as phase-2 receiver but no message was delivered");
    }
    lam += (n_nodes / q) * msg->product;
  }
  return lam;
}

NodeState node_update(const NodeState& node, const RowVector& y, const Matrix& lambda_matrix,
                      double gamma, const ProjectionBox& box) {
  NodeState next = node;
  const RowVector moved = node.u_row + gamma * (y - node.u_row * lambda_matrix);
  next.u_row = moved.cwiseMax(-box.alpha).cwiseMin(box.alpha);
  next.lambda = node.lambda + gamma * (lambda_matrix.diagonal().transpose() - node.lambda);
  return next;
}

RowVector node_position(const NodeState& node) {
  return node.lambda.cwiseMax(0.0).cwiseSqrt().cwiseProduct(node.u_row);
}

DomdsEnvironment::DomdsEnvironment(Matrix distances_in, ObservationModel observation_in,
                                   ChannelParams channel_in, double q_in, DomdsVariant variant_in,
                                   ProjectionBox box_in)
    : distances(std::move(distances_in)),
      observation(std::move(observation_in)),
      channel(channel_in),
      q(q_in),
      variant(variant_in),
      box(box_in) {
  if (distances.rows() < 2) throw ConfigError("doMDS needs at least two nodes");
  if (!(q > 0.0 && q < 1.0)) {
    throw ConfigError("doMDS: ATS q must lie in (0, 1), got " + std::to_string(q));
  }
  if (observation.size() != distances.rows()) {
    throw ConfigError("doMDS: observation matrix size does not match N");
  }
  channel.validate();
  box.validate();
}

std::vector<NodeState> domds_init(int n, int p, Rng& rng) {
  const OjaState init = oja_init(n, p, rng);
  std::vector<NodeState> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& node = nodes[static_cast<std::size_t>(i)];
    node.id = i;
    node.u_row = init.u.row(i);
    node.lambda = RowVector::Zero(p);
  }
  return nodes;
}

SparseObservation domds_measure(std::vector<NodeState>& nodes, const DomdsEnvironment& env,
                                std::uint64_t tick, const RandomStream& stream) {
  Rng obs_rng = stream.substream(tick, StreamPurpose::kObservation);
  SparseObservation obs = sample_observation(env.distances, env.observation, env.channel, obs_rng);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].last_row_avg = obs.row_avg(static_cast<Eigen::Index>(i));
  }
  return obs;
}

TickEstimates domds_exchange(const std::vector<NodeState>& nodes, const SparseObservation& obs,
                             const DomdsEnvironment& env, std::uint64_t tick,
                             const RandomStream& stream) {
  const int n = env.size();
  const auto p = nodes.front().u_row.size();
  const double q = env.q;

  TickEstimates out;
  out.row_avg = obs.row_avg;
  out.stats.ticks = 1;

  // Phase 1.
  Rng ats_rng = stream.substream(tick, StreamPurpose::kAtsFirst);
  const AtsEvent first = sample_ats(n, q, ats_rng);
  const RowAverageMsg msg1{first.broadcaster, nodes[static_cast<std::size_t>(first.broadcaster)].u_row,
                           obs.row_avg(first.broadcaster)};
  out.stats.broadcasts_sent += 1;
  out.stats.messages_delivered += static_cast<std::uint64_t>(first.receiver_count());
  out.stats.scalars_transmitted += msg1.scalars();

  std::optional<AtsEvent> delta_ats;
  if (env.variant == DomdsVariant::kDecoupled) {
    Rng delta_rng = stream.substream(tick, StreamPurpose::kAtsDelta);
    delta_ats = sample_ats(n, q, delta_rng);
    out.stats.broadcasts_sent += 1;
    out.stats.messages_delivered += static_cast<std::uint64_t>(delta_ats->receiver_count());
    out.stats.scalars_transmitted += 1;
  }

  const std::optional<RowAverageMsg> delivered1 = msg1;
  const std::optional<RowAverageMsg> nothing1;
  out.y.resize(n, p);
  for (int i = 0; i < n; ++i) {
    const auto& node = nodes[static_cast<std::size_t>(i)];
    const bool got1 = first.received[static_cast<std::size_t>(i)] != 0;

    std::optional<double> delta_source;
    if (delta_ats) {
      if (delta_ats->received[static_cast<std::size_t>(i)]) {
        delta_source = obs.row_avg(delta_ats->broadcaster);
      }
    } else if (got1) {
      delta_source = msg1.row_avg;
    }
    const double delta = delta_estimate(n, node.last_row_avg, delta_source, q);
    out.y.row(i) = compute_y(node, delta, obs.s(i, first.broadcaster), got1,
                             got1 ? delivered1 : nothing1, n, q);
  }

  // Phase 2.
  Rng ats2_rng = stream.substream(tick, StreamPurpose::kAtsSecond);
  const AtsEvent second = sample_ats(n, q, ats2_rng);
  const auto& sender = nodes[static_cast<std::size_t>(second.broadcaster)];
  const std::optional<ProductMsg> delivered2 =
      ProductMsg{second.broadcaster, sender.u_row.transpose() * out.y.row(second.broadcaster)};
  const std::optional<ProductMsg> nothing2;
  out.stats.broadcasts_sent += 1;
  out.stats.messages_delivered += static_cast<std::uint64_t>(second.receiver_count());
  out.stats.scalars_transmitted += delivered2->scalars();

  out.lambda.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const bool got2 = second.received[static_cast<std::size_t>(i)] != 0;
    out.lambda.push_back(compute_lambda_matrix(nodes[static_cast<std::size_t>(i)], out.y.row(i),
                                               got2, got2 ? delivered2 : nothing2, n, q));
  }
  return out;
}

TickEstimates domds_estimates(const std::vector<NodeState>& nodes, const DomdsEnvironment& env,
                              std::uint64_t tick, const RandomStream& stream) {
  std::vector<NodeState> local = nodes;
  const SparseObservation obs = domds_measure(local, env, tick, stream);
  return domds_exchange(local, obs, env, tick, stream);
}

CommStats domds_round(std::vector<NodeState>& nodes, const DomdsEnvironment& env, double gamma,
                      std::uint64_t tick, const RandomStream& stream) {
  const SparseObservation obs = domds_measure(nodes, env, tick, stream);
  const TickEstimates est = domds_exchange(nodes, obs, env, tick, stream);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i] = node_update(nodes[i], est.y.row(static_cast<Eigen::Index>(i)), est.lambda[i], gamma,
                           env.box);
  }
  return est.stats;
}

Matrix network_u(const std::vector<NodeState>& nodes) {
  Matrix u(static_cast<Eigen::Index>(nodes.size()), nodes.front().u_row.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) u.row(static_cast<Eigen::Index>(i)) = nodes[i].u_row;
  return u;
}

Matrix network_positions(const std::vector<NodeState>& nodes) {
  Matrix z(static_cast<Eigen::Index>(nodes.size()), nodes.front().u_row.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    z.row(static_cast<Eigen::Index>(i)) = node_position(nodes[i]);
  }
  return z;
}

Matrix empirical_y_bias(const Matrix& u, const DomdsEnvironment& env, int draws,
                        const RandomStream& stream) {
  const int n = env.size();
  std::vector<NodeState> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    nodes[static_cast<std::size_t>(i)] = NodeState{i, u.row(i), RowVector::Zero(u.cols()), 0.0};
  }
  const Matrix m = double_center(env.distances.cwiseAbs2());
  Matrix sum = Matrix::Zero(n, u.cols());
  for (int k = 0; k < draws; ++k) {
    sum += domds_estimates(nodes, env, static_cast<std::uint64_t>(k) + 1, stream).y;
  }
  return sum / draws - m * u;
}

}  // namespace wsnloc
