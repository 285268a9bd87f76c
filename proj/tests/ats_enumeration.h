#pragma once

#include <optional>
#include <vector>

#include "oracles.h"
#include "wsnloc/domds.h"

namespace wsnloc::oracle {

// Exact expectations of one doMDS tick over every transmission outcome, for
// p = 1, noiseless full observation s and a fixed U. Cost grows as 8^N.
struct TickExpectation {
  Vector mean_y;
  Vector mean_lambda;
  Vector mean_direction;  // E[Y(i) - U(i) Lambda(i)]
  Vector var_y;
};

inline TickExpectation enumerate_tick(const Matrix& s, const Vector& u, DomdsVariant variant, double q) {
  const int n = static_cast<int>(s.rows());
  const Vector row_avg = s.rowwise().sum() / n;
  std::vector<NodeState> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back(NodeState{i, RowVector{{u(i)}}, RowVector::Zero(1), row_avg(i)});
  const auto outcomes = oracle::ats_outcomes(n, q);
  const std::vector<oracle::AtsOutcome> literal_delta = {{0, {}, 1.0}};
  const auto& delta_outcomes = variant == DomdsVariant::kDecoupled ? outcomes : literal_delta;

  TickExpectation e{Vector::Zero(n), Vector::Zero(n), Vector::Zero(n), Vector::Zero(n)};
  Vector second = Vector::Zero(n);
  for (const auto& first : outcomes) {
    for (const auto& dlt : delta_outcomes) {
      const RowAverageMsg msg{first.broadcaster, nodes[static_cast<std::size_t>(first.broadcaster)].u_row,
                              row_avg(first.broadcaster)};
      Vector y(n);
      for (int i = 0; i < n; ++i) {
        const bool got = first.received[static_cast<std::size_t>(i)] != 0;
        std::optional<double> source;
        if (variant == DomdsVariant::kDecoupled) {
          if (dlt.received[static_cast<std::size_t>(i)]) source = row_avg(dlt.broadcaster);
        } else if (got) {
          source = msg.row_avg;
        }
        const double delta = delta_estimate(n, row_avg(i), source, q);
        y(i) = compute_y(nodes[static_cast<std::size_t>(i)], delta, s(i, first.broadcaster), got,
                         got ? std::optional<RowAverageMsg>(msg) : std::nullopt, n, q)(0);
      }
      const double w = first.prob * dlt.prob;
      e.mean_y += w * y;
      second += w * y.cwiseAbs2();
      for (const auto& phase2 : outcomes) {
        const ProductMsg prod{phase2.broadcaster,
                              Matrix::Constant(1, 1, u(phase2.broadcaster) * y(phase2.broadcaster))};
        for (int i = 0; i < n; ++i) {
          const bool got2 = phase2.received[static_cast<std::size_t>(i)] != 0;
          const double lam =
              compute_lambda_matrix(nodes[static_cast<std::size_t>(i)], RowVector{{y(i)}}, got2,
                                    got2 ? std::optional<ProductMsg>(prod) : std::nullopt, n, q)(0, 0);
          e.mean_lambda(i) += w * phase2.prob * lam;
          e.mean_direction(i) += w * phase2.prob * (y(i) - u(i) * lam);
        }
      }
    }
  }
  e.var_y = second - e.mean_y.cwiseAbs2();
  return e;
}

}  // namespace wsnloc::oracle
