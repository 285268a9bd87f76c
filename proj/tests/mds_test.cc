#include "wsnloc/mds.h"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "wsnloc/error.h"
#include "wsnloc/random.h"

namespace wsnloc {
namespace {

Matrix Triangle() {
  Matrix z(3, 2);
  z << 0.0, 0.0, 1.0, 0.0, 0.5, std::sqrt(3.0) / 2.0;
  return z;
}

Matrix RandomCloud(int n, int p, std::uint64_t seed, double scale = 5.0) {
  Rng rng(seed);
  Matrix z(n, p);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < p; ++k) z(i, k) = uniform(rng, 0.0, scale);
  }
  return z;
}

Matrix Rotation2(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

TEST(SimilarityTest, TwoPoints) {
  Matrix z(2, 2);
  z << 0.0, 0.0, 3.0, 0.0;
  Matrix expected(2, 2);
  expected << 0.0, 9.0, 9.0, 0.0;
  EXPECT_TRUE(similarity_from_positions(z).isApprox(expected));
}

TEST(SimilarityTest, EquilateralTriangle) {
  const Matrix s = similarity_from_positions(Triangle());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(s(i, j), i == j ? 0.0 : 1.0, 1e-15);
  }
}

TEST(SimilarityTest, CenteredGramIdentity) {
  // s = c 1^T + 1 c^T - 2 Z Z^T with Z barycentric and c_i = ||Z_i||^2.
  const Matrix z = RandomCloud(10, 2, 1);
  const Matrix zc = z.rowwise() - z.colwise().mean();
  const Vector c = zc.rowwise().squaredNorm();
  const Vector one = Vector::Ones(10);
  const Matrix rhs = c * one.transpose() + one * c.transpose() - 2.0 * zc * zc.transpose();
  EXPECT_LE((similarity_from_positions(z) - rhs).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CenteringTest, ProjectorIdentities) {
  for (int n : {2, 5, 17}) {
    const Matrix j = centering_projector(n);
    EXPECT_LE((j * Vector::Ones(n)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LE((j * j - j).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DoubleCenterTest, TriangleByHand) {
  Matrix expected(3, 3);
  expected << 1.0 / 3, -1.0 / 6, -1.0 / 6, -1.0 / 6, 1.0 / 3, -1.0 / 6, -1.0 / 6, -1.0 / 6, 1.0 / 3;
  const Matrix m = double_center(similarity_from_positions(Triangle()));
  EXPECT_LE((m - expected).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((m - oracle::barycentric_gram(Triangle())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DoubleCenterTest, ZeroStaysZero) {
  EXPECT_EQ(double_center(Matrix::Zero(4, 4)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(DoubleCenterTest, MatchesExplicitProjectorOnArbitraryInput) {
  Rng rng(2);
  Matrix s(7, 7);
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) s(i, j) = uniform(rng, -3.0, 3.0);
  }
  EXPECT_LE((double_center(s) - oracle::double_center(s)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(DoubleCenterTest, RowSumsVanish) {
  const Matrix m = double_center(similarity_from_positions(RandomCloud(12, 3, 3)));
  EXPECT_LE(m.rowwise().sum().cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE(m.colwise().sum().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(DoubleCenterTest, GramOfBarycentricCoordinatesOnManyScenarios) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Matrix z = RandomCloud(10 + static_cast<int>(seed % 7), 2 + static_cast<int>(seed % 2),
                                 100 + seed);
    const Matrix m = double_center(similarity_from_positions(z));
    ASSERT_LE((m - oracle::barycentric_gram(z)).cwiseAbs().maxCoeff(), 1e-10) << seed;
  }
}

TEST(GramEntryTest, TriangleByHand) {
  const Matrix s = similarity_from_positions(Triangle());
  EXPECT_NEAR(gram_entry_decomposed(0, 1, s), -1.0 / 6.0, 1e-12);
  EXPECT_NEAR(gram_entry_decomposed(0, 0, s), 1.0 / 3.0, 1e-12);
  EXPECT_EQ(gram_entry_decomposed(1, 2, Matrix::Zero(3, 3)), 0.0);
}

TEST(GramEntryTest, AgreesWithDoubleCenterOnSymmetricInput) {
  Rng rng(4);
  Matrix a(9, 9);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) a(i, j) = uniform(rng, 0.0, 10.0);
  }
  const Matrix s = symmetrize(a);
  const Matrix m = double_center(s);
  for (int i = 0; i < 9; ++i) {
    for (int j = 0; j < 9; ++j) EXPECT_NEAR(gram_entry_decomposed(i, j, s), m(i, j), 1e-12);
  }
}

TEST(TopEigsTest, Diagonal) {
  const Matrix m = Vector{{3.0, 1.0, 0.0}}.asDiagonal();
  const EigenPairs e = top_eigs(m, 2);
  EXPECT_NEAR(e.values(0), 3.0, 1e-14);
  EXPECT_NEAR(e.values(1), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(0, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(1, 1)), 1.0, 1e-14);
}

TEST(TopEigsTest, TriangleGram) {
  const EigenPairs e = top_eigs(double_center(similarity_from_positions(Triangle())), 3);
  EXPECT_NEAR(e.values(0), 0.5, 1e-12);
  EXPECT_NEAR(e.values(1), 0.5, 1e-12);
  EXPECT_NEAR(e.values(2), 0.0, 1e-12);
}

TEST(TopEigsTest, ResidualOrderAndSignConvention) {
  Rng rng(5);
  Matrix a(20, 20);
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) a(i, j) = uniform(rng, -1.0, 1.0);
  }
  const Matrix m = symmetrize(a);
  const EigenPairs e = top_eigs(m, 20);
  Matrix rebuilt = Matrix::Zero(20, 20);
  for (int k = 0; k < 20; ++k) {
    const Vector u = e.vectors.col(k);
    EXPECT_NEAR(u.norm(), 1.0, 1e-12);
    EXPECT_LE((m * u - e.values(k) * u).norm(), 1e-10 * m.norm());
    if (k > 0) EXPECT_GE(e.values(k - 1), e.values(k));
    Eigen::Index at;
    u.cwiseAbs().maxCoeff(&at);
    EXPECT_GT(u(at), 0.0);
    rebuilt += e.values(k) * u * u.transpose();
  }
  EXPECT_LE((rebuilt - m).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(TopEigsTest, RejectsAsymmetricInput) {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 1) = 0.5;
  EXPECT_THROW(top_eigs(m, 1), DomainError);
  m(1, 0) = 0.5 + 1e-12;
  EXPECT_NO_THROW(top_eigs(m, 1));
}

TEST(BatchMdsTest, TrianglePreservesDistances) {
  const Matrix z = batch_mds(similarity_from_positions(Triangle()), 2);
  const Matrix s = similarity_from_positions(z);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(s(i, j), i == j ? 0.0 : 1.0, 1e-12);
  }
}

TEST(BatchMdsTest, ExactRecoveryUpToRigidMotion) {
  const Matrix truth = RandomCloud(20, 2, 6);
  const Matrix s = similarity_from_positions(truth);
  const Matrix z = batch_mds(s, 2);
  EXPECT_LE(rmse(z, truth, Alignment::kProcrustes), 1e-9);
  EXPECT_LE((similarity_from_positions(z) - s).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(BatchMdsTest, IsometryInThreeDimensions) {
  const Matrix truth = RandomCloud(15, 3, 7);
  const Matrix s = similarity_from_positions(truth);
  EXPECT_LE((similarity_from_positions(batch_mds(s, 3)) - s).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(BatchMdsTest, CollinearIsDegenerate) {
  Matrix z(4, 2);
  z << 0, 0, 1, 1, 2, 2, 3.5, 3.5;
  try {
    batch_mds(similarity_from_positions(z), 2);
    FAIL() << "expected DegenerateGeometryError";
  } catch (const DegenerateGeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("lambda_2"), std::string::npos) << e.what();
  }
}

TEST(ProcrustesTest, IdentityFit) {
  const Matrix z = RandomCloud(8, 2, 8);
  const RigidFit fit = procrustes_align(z, z);
  EXPECT_LE((fit.rotation - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE(fit.translation.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((fit.aligned - z).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProcrustesTest, RecoversRotationAndShift) {
  const Matrix truth = RandomCloud(8, 2, 9);
  const Matrix moved =
      (truth * Rotation2(std::numbers::pi / 2).transpose()).rowwise() + RowVector{{5.0, 3.0}};
  EXPECT_LE(rmse(moved, truth, Alignment::kProcrustes), 1e-12);
}

TEST(ProcrustesTest, RecoversReflection) {
  const Matrix truth = RandomCloud(8, 2, 10);
  Matrix mirrored = truth;
  mirrored.col(1) *= -1.0;
  const RigidFit fit = procrustes_align(mirrored, truth);
  EXPECT_LE((fit.aligned - truth).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(fit.rotation.determinant(), -1.0, 1e-12);
}

TEST(ProcrustesTest, RankDeficientFallsBackToTranslation) {
  Matrix est = Matrix::Zero(4, 2);
  const Matrix truth = RandomCloud(4, 2, 11);
  const RigidFit fit = procrustes_align(est, truth);
  EXPECT_TRUE(fit.translation_only);
  EXPECT_LE((fit.aligned.rowwise() - truth.colwise().mean()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProcrustesTest, AnchorFitUsesOnlyAnchors) {
  const Matrix truth = RandomCloud(6, 2, 12);
  Matrix est = (truth * Rotation2(0.7).transpose()).rowwise() + RowVector{{-1.0, 2.0}};
  est(5, 0) += 3.0;  // off-anchor error must not leak into the fit
  const std::vector<int> anchors = {0, 1, 2};
  const RigidFit fit = procrustes_align(est, truth, anchors);
  for (int i = 0; i < 5; ++i) EXPECT_LE((fit.aligned.row(i) - truth.row(i)).norm(), 1e-12);
}

TEST(RmseTest, ShiftWithAndWithoutAlignment) {
  const Matrix truth = RandomCloud(10, 2, 13);
  const Matrix shifted = truth.rowwise() + RowVector{{1.0, 0.0}};
  EXPECT_EQ(rmse(truth, truth, Alignment::kNone), 0.0);
  EXPECT_NEAR(rmse(shifted, truth, Alignment::kNone), 1.0, 1e-12);
  EXPECT_LE(rmse(shifted, truth, Alignment::kProcrustes), 1e-12);
}

TEST(RmseTest, ProcrustesInvariantUnderRigidMotion) {
  const Matrix truth = RandomCloud(12, 2, 14);
  Rng rng(15);
  Matrix est = truth;
  for (int i = 0; i < est.rows(); ++i) est.row(i) += RowVector{{standard_normal(rng), standard_normal(rng)}} * 0.3;
  const double base = rmse(est, truth, Alignment::kProcrustes);
  for (int k = 0; k < 20; ++k) {
    Matrix r = Rotation2(uniform(rng, 0.0, 2 * std::numbers::pi));
    if (k % 2) r.col(0) *= -1.0;
    const RowVector t{{uniform(rng, -10, 10), uniform(rng, -10, 10)}};
    const Matrix moved = (est * r.transpose()).rowwise() + t;
    EXPECT_NEAR(rmse(moved, truth, Alignment::kProcrustes), base, 1e-10);
  }
}

TEST(AlignmentTest, Names) {
  for (auto a : {Alignment::kNone, Alignment::kProcrustes, Alignment::kAnchor}) {
    EXPECT_EQ(parse_alignment(to_string(a)), a);
  }
  EXPECT_THROW(parse_alignment("affine"), ConfigError);
}

}  // namespace
}  // namespace wsnloc
