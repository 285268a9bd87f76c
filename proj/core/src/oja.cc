#include "wsnloc/oja.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "wsnloc/error.h"

namespace wsnloc {

double StepSchedule::operator()(std::uint64_t n) const {
  return a / std::pow(static_cast<double>(std::max<std::uint64_t>(n, 1)), beta);
}

void StepSchedule::validate() const {
  if (!(a > 0.0)) throw ConfigError("schedule: a must be > 0, got " + std::to_string(a));
  if (!(beta >= 0.5 && beta <= 1.0)) {
    throw ConfigError("schedule: beta must lie in [0.5, 1], got " + std::to_string(beta));
  }
}

void ProjectionBox::validate() const {
  if (!(alpha > 1.0)) throw ConfigError("box: alpha must be > 1, got " + std::to_string(alpha));
}

Readout parse_readout(std::string_view name) {
  if (name == "diagonal") return Readout::kDiagonal;
  if (name == "ritz") return Readout::kRitz;
  throw ConfigError("unknown readout '" + std::string(name) + "' (expected diagonal|ritz)");
}

std::string_view to_string(Readout readout) {
  return readout == Readout::kDiagonal ? "diagonal" : "ritz";
}

OjaState oja_init(int n, int p, Rng& rng) {
  OjaState state{Matrix(n, p), Vector::Zero(p), 0, Matrix::Zero(p, p)};
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < p; ++k) state.u(i, k) = uniform(rng, -1.0, 1.0);
  }
  return state;
}

Matrix project_box(const Matrix& u, const ProjectionBox& box) {
  return u.cwiseMax(-box.alpha).cwiseMin(box.alpha);
}

OjaState oja_step(const OjaState& state, const Matrix& m_n, double gamma, const ProjectionBox& box) {
  const Matrix mu = m_n * state.u;
  const Matrix utmu = state.u.transpose() * mu;
  OjaState next = state;
  next.u = project_box(state.u + gamma * (mu - state.u * utmu), box);
  ++next.iter;
  return next;
}

Vector eigenvalue_step(const OjaState& state, const Matrix& m_n, double gamma) {
  const auto p = state.u.cols();
  Vector next = state.lambda;
  for (Eigen::Index k = 0; k < p; ++k) {
    const double rayleigh = state.u.col(k).dot(m_n * state.u.col(k));
    next(k) += gamma * (rayleigh - state.lambda(k));
  }
  return next;
}

OjaState oja_update(const OjaState& state, const Matrix& m_n, double gamma, const ProjectionBox& box) {
  const Matrix mu = m_n * state.u;
  const Matrix utmu = state.u.transpose() * mu;
  OjaState next;
  next.u = project_box(state.u + gamma * (mu - state.u * utmu), box);
  next.lambda = state.lambda + gamma * (utmu.diagonal() - state.lambda);
  next.iter = state.iter + 1;
  const Matrix& prev = state.lambda_matrix.size() ? state.lambda_matrix
                                                  : Matrix(state.lambda.asDiagonal());
  next.lambda_matrix = prev + gamma * (utmu - prev);
  next.lambda_matrix.diagonal() = next.lambda;
  return next;
}

Matrix assemble_positions(const OjaState& state) {
  const auto p = state.u.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return state.lambda(a) > state.lambda(b); });
  Matrix z(state.u.rows(), p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    z.col(k) = std::sqrt(std::max(state.lambda(src), 0.0)) * state.u.col(src);
  }
  return z;
}

Matrix ritz_positions(const Matrix& u, const Matrix& lambda_matrix) {
  const Matrix sym = 0.5 * (lambda_matrix + lambda_matrix.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  const auto p = sym.rows();
  // Eigen sorts ascending; reverse so the leading coordinate comes first.
  Matrix root(p, p);
  for (Eigen::Index k = 0; k < p; ++k) {
    const auto src = p - 1 - k;
    root.col(k) = std::sqrt(std::max(es.eigenvalues()(src), 0.0)) * es.eigenvectors().col(src);
  }
  return u * root;
}

Matrix assemble_positions(const OjaState& state, Readout readout) {
  if (readout == Readout::kDiagonal) return assemble_positions(state);
  const Matrix lam = state.lambda_matrix.size() ? state.lambda_matrix
                                                : Matrix(state.lambda.asDiagonal());
  return ritz_positions(state.u, lam);
}

Matrix reconstructed_gram(const OjaState& state) {
  const Matrix lam = state.lambda_matrix.size() ? state.lambda_matrix
                                                : Matrix(state.lambda.asDiagonal());
  const Matrix g = state.u * lam * state.u.transpose();
  return 0.5 * (g + g.transpose());
}

Matrix mean_field(const Matrix& u, const Matrix& m) {
  const Matrix mu = m * u;
  return mu - u * (u.transpose() * mu);
}

double lyapunov(const Matrix& u, const Matrix& m) {
  const double quad = (u.transpose() * m * u).trace();
  if (!(quad > 0.0)) {
    throw DomainError("lyapunov: tr(U^T M U) must be > 0, got " + std::to_string(quad));
  }
  return std::exp(u.squaredNorm()) / quad;
}

Matrix lyapunov_gradient(const Matrix& u, const Matrix& m) {
  const double quad = (u.transpose() * m * u).trace();
  const double v = lyapunov(u, m);
  return v * (2.0 * u - (2.0 / quad) * (m * u));
}

Matrix oja_noise(const Matrix& u, const Matrix& m_n, const Matrix& m) {
  const Matrix mu = m * u;
  const Matrix mnu = m_n * u;
  return (mnu - mu) + u * (u.transpose() * mu - u.transpose() * mnu);
}

}  // namespace wsnloc
