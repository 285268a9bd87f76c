#pragma once

#include <span>
#include <string_view>

#include "wsnloc/scenario.h"
#include "wsnloc/types.h"

namespace wsnloc {

// s(i,j) = ||z_i - z_j||^2.
Matrix similarity_from_positions(const Matrix& positions);
inline Matrix similarity_from_positions(const Scenario& scenario) {
  return similarity_from_positions(scenario.positions);
}

// J_perp = I - 11^T / N.
Matrix centering_projector(int n);

// -1/2 J_perp S J_perp, evaluated in O(N^2) through row, column and grand means.
Matrix double_center(const Matrix& s);

// Per-entry form of the Gram matrix:
//   M(i,j) = (dbar2(i) + dbar2(j)) / 2 - (s(i,j) + delta) / 2
// with dbar2(i) the i-th row mean of s and delta the grand mean. Agrees with
// double_center for symmetric s.
double gram_entry_decomposed(int i, int j, const Matrix& s);

// (s + s^T) / 2.
Matrix symmetrize(const Matrix& s);

struct EigenPairs {
  Vector values;  // descending
  Matrix vectors; // unit columns, largest-magnitude entry positive
};

// Top-p eigenpairs of a symmetric matrix. Throws DomainError when the input is
// asymmetric by more than 1e-9 (relative to its largest entry).
EigenPairs top_eigs(const Matrix& m, int p);

// Classical MDS: symmetrize, double center, and return (sqrt(l1) u1, ...,
// sqrt(lp) up). Throws DegenerateGeometryError when l_p <= 0.
Matrix batch_mds(const Matrix& s_hat, int p);

enum class Alignment { kNone, kProcrustes, kAnchor };

Alignment parse_alignment(std::string_view name);
std::string_view to_string(Alignment alignment);

struct RigidFit {
  Matrix aligned;      // R est_i + t for every row
  Matrix rotation;     // p x p orthogonal (reflections allowed)
  Vector translation;  // p
  bool translation_only = false;  // cross-covariance was rank deficient
};

// Least-squares rigid fit (orthogonal group plus translation, no scaling) of
// est onto truth. The fit uses fit_rows when non-empty, every row otherwise;
// the transform is then applied to all rows.
RigidFit procrustes_align(const Matrix& est, const Matrix& truth,
                          std::span<const int> fit_rows = {});

// sqrt((1/N) sum ||zhat_i - z_i||^2) after the requested alignment. kAnchor fits
// on `anchors` only.
double rmse(const Matrix& est, const Matrix& truth, Alignment align,
            std::span<const int> anchors = {});

}  // namespace wsnloc
