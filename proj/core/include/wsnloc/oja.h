#pragma once

#include <cstdint>
#include <string_view>

#include "wsnloc/random.h"
#include "wsnloc/types.h"

namespace wsnloc {

// gamma_n = a / n^beta.
struct StepSchedule {
  double a = 0.015;
  double beta = 0.7;

  double operator()(std::uint64_t n) const;

  // True when sum gamma = inf and sum gamma^2 < inf, i.e. 0.5 < beta <= 1.
  bool convergent() const { return beta > 0.5 && beta <= 1.0; }

  // Throws ConfigError for a <= 0 or beta outside [0.5, 1]. beta = 0.5 is
  // accepted; callers are expected to warn.
  void validate() const;
};

// Hypercube K = [-alpha, alpha]^{N x p}.
struct ProjectionBox {
  double alpha = 2.0;

  void validate() const;
};

struct OjaState {
  Matrix u;        // N x p eigenvector estimates
  Vector lambda;   // p eigenvalue estimates
  std::uint64_t iter = 0;
  // Same recursion as lambda applied to the whole p x p matrix U^T m_n U;
  // its diagonal always equals lambda. Used by the rotation-invariant readout.
  Matrix lambda_matrix;
};

// How eigenvector/eigenvalue estimates are turned into coordinates.
//   kDiagonal: column k is sqrt(lambda_k) u_k.
//   kRitz:     U sqrt(L) with L the p x p lambda_matrix. Unaffected by the
//              basis rotation the symmetric subspace rule leaves undetermined.
enum class Readout { kDiagonal, kRitz };

Readout parse_readout(std::string_view name);
std::string_view to_string(Readout readout);

// U_0 entries uniform in [-1, 1], lambda_0 = 0.
OjaState oja_init(int n, int p, Rng& rng);

// Componentwise clamp to [-alpha, alpha].
Matrix project_box(const Matrix& u, const ProjectionBox& box);

// u <- Pi_K[u + gamma (m_n u - u (u^T m_n u))]; iter is incremented.
OjaState oja_step(const OjaState& state, const Matrix& m_n, double gamma,
                  const ProjectionBox& box = {});

// lambda_k <- lambda_k + gamma (u_k^T m_n u_k - lambda_k), using the u held by `state`.
Vector eigenvalue_step(const OjaState& state, const Matrix& m_n, double gamma);

// One full tick: both recursions driven by the same U_{n-1}.
OjaState oja_update(const OjaState& state, const Matrix& m_n, double gamma,
                    const ProjectionBox& box = {});

// Column k is sqrt(max(lambda_k, 0)) u_k; columns sorted by lambda descending.
Matrix assemble_positions(const OjaState& state);

// U sqrt(L) where L is the symmetric part of `lambda_matrix` with negative
// eigenvalues clamped to 0. Rows are coordinates in the basis of L's
// eigenvectors, largest first.
Matrix ritz_positions(const Matrix& u, const Matrix& lambda_matrix);

Matrix assemble_positions(const OjaState& state, Readout readout);

// U L U^T, the Gram matrix implied by the current estimates.
Matrix reconstructed_gram(const OjaState& state);

// Mean field h(U) = MU - U (U^T M U).
Matrix mean_field(const Matrix& u, const Matrix& m);

// V(U) = exp(||U||_F^2) / tr(U^T M U). Throws DomainError if tr(U^T M U) <= 0.
double lyapunov(const Matrix& u, const Matrix& m);

// Analytic gradient of lyapunov for symmetric m:
//   grad V = V (2U - 2 M U / tr(U^T M U)).
// For p = 1 this equals -2 V / (u^T M u) h(u).
Matrix lyapunov_gradient(const Matrix& u, const Matrix& m);

// Centralized martingale increment at fixed U for one stochastic draw m_n of M:
//   xi = (m_n U - M U) + U (U^T M U - U^T m_n U),
// so that the Oja step reads U + gamma (h(U) + xi) before projection.
Matrix oja_noise(const Matrix& u, const Matrix& m_n, const Matrix& m);

}  // namespace wsnloc
