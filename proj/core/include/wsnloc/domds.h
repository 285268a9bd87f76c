#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "wsnloc/channel.h"
#include "wsnloc/oja.h"
#include "wsnloc/random.h"
#include "wsnloc/types.h"

namespace wsnloc {

// How each node estimates the grand mean delta.
//  kLiteral:   from the phase-1 broadcast, i.e. the same draw that drives Y.
//  kDecoupled: from a third, independent transmission sequence, which makes
//              E[Y | past] = M U hold exactly at the cost of one extra
//              one-scalar broadcast per tick.
enum class DomdsVariant { kLiteral, kDecoupled };

DomdsVariant parse_domds_variant(std::string_view name);
std::string_view to_string(DomdsVariant variant);

// One asynchronous-transmission draw: a uniform broadcaster and independent
// Bernoulli(q) receivers; the broadcaster never receives its own message.
struct AtsEvent {
  int broadcaster = 0;
  std::vector<std::uint8_t> received;
  double q = 0.0;

  int receiver_count() const;
};

AtsEvent sample_ats(int n_nodes, double q, Rng& rng);

struct NodeState {
  int id = 0;
  RowVector u_row;          // U_n(i), 1 x p
  RowVector lambda;         // lambda_n(i), 1 x p
  double last_row_avg = 0;  // S_n-bar(i) of the latest tick
};

// Phase 1: U_{n-1}(sender) and the sender's row average. p + 1 scalars.
struct RowAverageMsg {
  int sender = 0;
  RowVector u_row;
  double row_avg = 0.0;

  std::size_t scalars() const { return static_cast<std::size_t>(u_row.size()) + 1; }
};

// Phase 2: U_{n-1}(sender)^T Y_n(sender). p^2 scalars.
struct ProductMsg {
  int sender = 0;
  Matrix product;

  std::size_t scalars() const { return static_cast<std::size_t>(product.size()); }
};

struct CommStats {
  std::uint64_t ticks = 0;
  std::uint64_t broadcasts_sent = 0;
  std::uint64_t messages_delivered = 0;
  std::uint64_t scalars_transmitted = 0;

  CommStats& operator+=(const CommStats& other);
};

// delta_n(i) = S-bar(i)/N + S-bar(sender) Q_i / q. `sender_row_avg` is empty
// when node i did not receive the broadcast.
double delta_estimate(int n_nodes, double own_row_avg, std::optional<double> sender_row_avg,
                      double q);

// Mhat_n(i,j) = (S-bar(i) + S-bar(j))/2 - (S_n(i,j) + delta_n(i))/2.
double mhat_entry(double row_avg_i, double row_avg_j, double s_ij, double delta_i);

// Y_n(i) = Mhat(i,i) U(i) + (N/q) U(sender) Mhat(i,sender) Q_i.
// `s_to_sender` is node i's own observation S_n(i, sender). Throws
// ProtocolError when `received` is set but `msg` is empty.
RowVector compute_y(const NodeState& node, double delta, double s_to_sender, bool received,
                    const std::optional<RowAverageMsg>& msg, int n_nodes, double q);

// Lambda_n(i) = U(i)^T Y(i) + (N/q) [U(sender)^T Y(sender)] Q'_i.
Matrix compute_lambda_matrix(const NodeState& node, const RowVector& y, bool received,
                             const std::optional<ProductMsg>& msg, int n_nodes, double q);

// U(i) <- Pi_K[U(i) + gamma (Y(i) - U(i) Lambda(i))],
// lambda(i) <- lambda(i) + gamma (diag(Lambda(i)) - lambda(i)).
NodeState node_update(const NodeState& node, const RowVector& y, const Matrix& lambda_matrix,
                      double gamma, const ProjectionBox& box);

// Componentwise sqrt(max(lambda_k, 0)) u_k(i), in the node's native column
// order (every node shares it).
RowVector node_position(const NodeState& node);

// Everything a tick needs besides node state.
struct DomdsEnvironment {
  Matrix distances;
  ObservationModel observation;
  ChannelParams channel;
  double q = 0.85;  // ATS reception probability
  DomdsVariant variant = DomdsVariant::kLiteral;
  ProjectionBox box;

  DomdsEnvironment(Matrix distances, ObservationModel observation, ChannelParams channel, double q,
                   DomdsVariant variant = DomdsVariant::kLiteral, ProjectionBox box = {});

  int size() const { return static_cast<int>(distances.rows()); }
};

// U_0 rows uniform in [-1, 1]^p (same draws as oja_init), lambda_0 = 0.
std::vector<NodeState> domds_init(int n, int p, Rng& rng);

// Per-tick local estimates, before the update. Exposed for diagnostics.
struct TickEstimates {
  Matrix y;                     // N x p, row i = Y_n(i)
  std::vector<Matrix> lambda;   // Lambda_n(i), p x p each
  Vector row_avg;               // S-bar_n(i)
  CommStats stats;
};

// [Measures] step: draws this tick's sparse observation and stores each node's
// row average in its state.
SparseObservation domds_measure(std::vector<NodeState>& nodes, const DomdsEnvironment& env,
                                std::uint64_t tick, const RandomStream& stream);

// Both broadcast phases given this tick's observation.
TickEstimates domds_exchange(const std::vector<NodeState>& nodes, const SparseObservation& obs,
                             const DomdsEnvironment& env, std::uint64_t tick,
                             const RandomStream& stream);

// domds_measure + domds_exchange on a copy of `nodes`.
TickEstimates domds_estimates(const std::vector<NodeState>& nodes, const DomdsEnvironment& env,
                              std::uint64_t tick, const RandomStream& stream);

// One tick: measure, phase-1 broadcast, Y, phase-2 broadcast, update.
CommStats domds_round(std::vector<NodeState>& nodes, const DomdsEnvironment& env, double gamma,
                      std::uint64_t tick, const RandomStream& stream);

Matrix network_u(const std::vector<NodeState>& nodes);
Matrix network_positions(const std::vector<NodeState>& nodes);

// Monte Carlo mean of Y_n - M U over `draws` independent ticks at fixed U.
// Measures the bias of the literal variant.
Matrix empirical_y_bias(const Matrix& u, const DomdsEnvironment& env, int draws,
                        const RandomStream& stream);

}  // namespace wsnloc
