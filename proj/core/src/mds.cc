#include "wsnloc/mds.h"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "wsnloc/error.h"

namespace wsnloc {

Matrix similarity_from_positions(const Matrix& positions) {
  const auto n = positions.rows();
  Matrix s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s(i, i) = 0.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d2 = (positions.row(i) - positions.row(j)).squaredNorm();
      s(i, j) = d2;
      s(j, i) = d2;
    }
  }
  return s;
}

Matrix centering_projector(int n) {
  return Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
}

Matrix double_center(const Matrix& s) {
  const auto n = s.rows();
  const Vector row_mean = s.rowwise().mean();
  const RowVector col_mean = s.colwise().mean();
  const double grand = s.mean();
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      m(i, j) = -0.5 * (s(i, j) - row_mean(i) - col_mean(j) + grand);
    }
  }
  return m;
}

double gram_entry_decomposed(int i, int j, const Matrix& s) {
  const double dbar_i = s.row(i).mean();
  const double dbar_j = s.row(j).mean();
  const double delta = s.rowwise().mean().mean();
  return 0.5 * (dbar_i + dbar_j) - 0.5 * (s(i, j) + delta);
}

Matrix symmetrize(const Matrix& s) { return 0.5 * (s + s.transpose()); }

EigenPairs top_eigs(const Matrix& m, int p) {
  if (m.rows() != m.cols()) throw DomainError("top_eigs: matrix must be square");
  if (p < 1 || p > m.rows()) throw DomainError("top_eigs: p out of range");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    throw DomainError("top_eigs: matrix is not symmetric (max asymmetry " + std::to_string(asym) +
                      ")");
  }

  // Eigen returns ascending eigenvalues.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) throw DomainError("top_eigs: eigensolver did not converge");
  const auto n = m.rows();
  EigenPairs out{Vector(p), Matrix(n, p)};
  for (int k = 0; k < p; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    Vector u = solver.eigenvectors().col(n - 1 - k);
    Eigen::Index arg = 0;
    u.cwiseAbs().maxCoeff(&arg);
    if (u(arg) < 0.0) u = -u;
    out.vectors.col(k) = u;
  }
  return out;
}

Matrix batch_mds(const Matrix& s_hat, int p) {
  const Matrix m = double_center(symmetrize(s_hat));
  const EigenPairs eig = top_eigs(m, p);
  // Relative floor so that round-off on a rank-deficient Gram is not mistaken
  // for a positive eigenvalue.
  const double floor = 1e-10 * std::max(1.0, std::abs(eig.values(0)));
  if (!(eig.values(p - 1) > floor)) {
    throw DegenerateGeometryError("batch_mds: eigenvalue lambda_" + std::to_string(p) + " = " +
                                  std::to_string(eig.values(p - 1)) +
                                  " is not positive; configuration does not span " +
                                  std::to_string(p) + " dimensions");
  }
  return eig.vectors * eig.values.cwiseSqrt().asDiagonal();
}

Alignment parse_alignment(std::string_view name) {
  if (name == "none") return Alignment::kNone;
  if (name == "procrustes") return Alignment::kProcrustes;
  if (name == "anchor") return Alignment::kAnchor;
  throw ConfigError("unknown alignment '" + std::string(name) +
                    "' (expected none|procrustes|anchor)");
}

std::string_view to_string(Alignment alignment) {
  switch (alignment) {
    case Alignment::kNone: return "none";
    case Alignment::kProcrustes: return "procrustes";
    case Alignment::kAnchor: return "anchor";
  }
  return "none";
}

RigidFit procrustes_align(const Matrix& est, const Matrix& truth, std::span<const int> fit_rows) {
  if (est.rows() != truth.rows() || est.cols() != truth.cols()) {
    throw DomainError("procrustes_align: shape mismatch");
  }
  const auto p = est.cols();
  if (est.rows() < p) throw DomainError("procrustes_align: need N >= p");

  Matrix a, b;
  if (fit_rows.empty()) {
    a = est;
    b = truth;
  } else {
    a.resize(static_cast<Eigen::Index>(fit_rows.size()), p);
    b.resize(a.rows(), p);
    for (std::size_t k = 0; k < fit_rows.size(); ++k) {
      a.row(static_cast<Eigen::Index>(k)) = est.row(fit_rows[k]);
      b.row(static_cast<Eigen::Index>(k)) = truth.row(fit_rows[k]);
    }
  }
  const RowVector mean_a = a.colwise().mean();
  const RowVector mean_b = b.colwise().mean();
  const Matrix cross = (a.rowwise() - mean_a).transpose() * (b.rowwise() - mean_b);

  RigidFit fit;
  Eigen::JacobiSVD<Matrix> svd(cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double tol = 1e-12 * std::max(1.0, sv(0));
  if (sv(p - 1) <= tol) {
    fit.rotation = Matrix::Identity(p, p);
    fit.translation_only = true;
  } else {
    // Maximizes tr(R C) over O(p); no determinant correction, reflections allowed.
    fit.rotation = svd.matrixV() * svd.matrixU().transpose();
  }
  fit.translation = (mean_b - mean_a * fit.rotation.transpose()).transpose();
  fit.aligned = (est * fit.rotation.transpose()).rowwise() + fit.translation.transpose();
  return fit;
}

double rmse(const Matrix& est, const Matrix& truth, Alignment align, std::span<const int> anchors) {
  if (est.rows() != truth.rows() || est.cols() != truth.cols()) {
    throw DomainError("rmse: shape mismatch");
  }
  Matrix aligned;
  switch (align) {
    case Alignment::kNone: aligned = est; break;
    case Alignment::kProcrustes: aligned = procrustes_align(est, truth).aligned; break;
    case Alignment::kAnchor:
      if (anchors.empty()) throw ConfigError("rmse: anchor alignment requires anchors");
      aligned = procrustes_align(est, truth, anchors).aligned;
      break;
  }
  return std::sqrt((aligned - truth).rowwise().squaredNorm().mean());
}

}  // namespace wsnloc
