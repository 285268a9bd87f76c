#include "wsnloc/channel.h"

#include <cmath>

#include <gtest/gtest.h>

#include "oracles.h"
#include "wsnloc/error.h"

namespace wsnloc {
namespace {

ChannelParams Testbed() { return ChannelParams{-61.71, 2.44, 28.16, 1}; }

ChannelParams Params(double pl0, double eta, double sigma2, int t = 1) {
  return ChannelParams{pl0, eta, sigma2, t};
}

TEST(PathLossTest, ReferenceDistanceGivesPl0) {
  EXPECT_DOUBLE_EQ(path_loss(1.0, Testbed()), -61.71);
  EXPECT_DOUBLE_EQ(path_loss(1.0, Params(0.0, 2.0, 0.0)), 0.0);
}

TEST(PathLossTest, TenMeters) { EXPECT_NEAR(path_loss(10.0, Testbed()), -37.31, 1e-12); }

TEST(PathLossTest, RejectsNonPositiveDistance) {
  EXPECT_THROW(path_loss(0.0, Testbed()), DomainError);
  EXPECT_THROW(path_loss(-1.0, Testbed()), DomainError);
}

TEST(SampleRssiTest, NoiselessIsDeterministic) {
  Rng rng(1);
  const RssiSample s = sample_rssi(0, 1, 2.0, Params(0.0, 2.0, 0.0), rng);
  EXPECT_NEAR(s.value, -6.020599913279624, 1e-12);
  EXPECT_EQ(s.src, 0);
  EXPECT_EQ(s.dst, 1);
}

TEST(SampleRssiTest, RejectsSelfLink) {
  Rng rng(1);
  EXPECT_THROW(sample_rssi(3, 3, 1.0, Testbed(), rng), DomainError);
}

TEST(SampleRssiTest, MomentsMatchModel) {
  const ChannelParams p = Testbed();
  Rng rng(7);
  oracle::Stats st;
  for (int k = 0; k < 1'000'000; ++k) st.add(sample_rssi(0, 1, 5.0, p, rng).value);
  EXPECT_NEAR(st.mean(), -path_loss(5.0, p), 3.0 * std::sqrt(p.sigma2 / 1e6));
  EXPECT_NEAR(st.variance() / p.sigma2, 1.0, 0.05);
}

TEST(BiasConstantTest, NoNoiseIsOne) { EXPECT_DOUBLE_EQ(bias_constant(Params(0, 2.44, 0.0)), 1.0); }

TEST(BiasConstantTest, TestbedValue) {
  EXPECT_NEAR(bias_constant(Testbed()), 1.1335876777240141, 1e-13);
}

TEST(BiasConstantTest, DoublingSamplesTakesSquareRoot) {
  const double c1 = bias_constant(Params(-61.71, 2.44, 28.16, 1));
  const double c2 = bias_constant(Params(-61.71, 2.44, 28.16, 2));
  EXPECT_NEAR(c2, std::sqrt(c1), 1e-14);
  EXPECT_NEAR(c2, 1.064700745620108, 1e-13);
}

TEST(EstimateSqDistanceTest, NoiselessInversion) {
  const ChannelParams p = Params(-61.71, 2.44, 0.0);
  EXPECT_NEAR(estimate_sq_distance(-path_loss(2.0, p), p), 4.0, 1e-12);
}

TEST(EstimateSqDistanceTest, BiasConstantCancelsAtMeanRssi) {
  for (double sigma2 : {0.0, 1.0, 28.16, 60.0}) {
    const ChannelParams p = Params(-61.71, 2.44, sigma2);
    const double c = bias_constant(p);
    for (double d : {0.3, 1.0, 4.2, 11.0}) {
      EXPECT_NEAR(estimate_sq_distance(-path_loss(d, p), p) * std::pow(c, 4) / (d * d), 1.0, 1e-12)
          << "sigma2=" << sigma2 << " d=" << d;
    }
  }
}

TEST(EstimateSqDistanceTest, UnbiasedAtThreeMeters) {
  const ChannelParams p = Testbed();
  Rng rng(11);
  oracle::Stats st;
  for (int k = 0; k < 1'000'000; ++k) st.add(sample_sq_distance(0, 1, 3.0, p, rng));
  EXPECT_NEAR(st.mean(), 9.0, 3.0 * st.std_error());
}

TEST(EstimateSqDistanceTest, UnbiasedWithSampleAveraging) {
  const ChannelParams p = Params(-61.71, 2.44, 28.16, 4);
  Rng rng(12);
  oracle::Stats st;
  for (int k = 0; k < 200'000; ++k) st.add(sample_sq_distance(0, 1, 2.0, p, rng));
  EXPECT_NEAR(st.mean(), 4.0, 3.0 * st.std_error());
}

TEST(EstimateSqDistanceTest, VarianceAtUnitDistance) {
  const ChannelParams p = Testbed();
  const double c = bias_constant(p);
  const double expected = std::pow(c, 8) - 1.0;
  EXPECT_NEAR(expected, 1.7267224341826548, 1e-12);
  Rng rng(13);
  oracle::Stats st;
  for (int k = 0; k < 1'000'000; ++k) st.add(sample_sq_distance(0, 1, 1.0, p, rng));
  EXPECT_NEAR(st.variance() / expected, 1.0, 0.05);
}

TEST(ObservationModelTest, RejectsOutOfRangeProbabilities) {
  EXPECT_THROW(ObservationModel::uniform(3, 0.0), ConfigError);
  EXPECT_THROW(ObservationModel::uniform(3, 1.2), ConfigError);
  Matrix q = Matrix::Constant(3, 3, 0.5);
  q(1, 1) = 7.0;  // diagonal is not used
  EXPECT_NO_THROW(ObservationModel{q});
  q(0, 2) = -0.1;
  EXPECT_THROW(ObservationModel{q}, ConfigError);
}

TEST(ChannelParamsTest, Validation) {
  EXPECT_NO_THROW(Testbed().validate());
  EXPECT_THROW(Params(0, 0.0, 1.0).validate(), ConfigError);
  EXPECT_THROW(Params(0, 2.0, -1.0).validate(), ConfigError);
  EXPECT_THROW(Params(0, 2.0, 1.0, 0).validate(), ConfigError);
}

Matrix FivePointDistances() {
  Matrix z(5, 2);
  z << 0.0, 0.0, 1.0, 0.0, 0.5, 2.0, 3.0, 1.0, 1.5, 1.2;
  return oracle::squared_distances(z).cwiseSqrt();
}

TEST(SampleObservationTest, FullNoiselessObservationIsExact) {
  const Matrix d = FivePointDistances();
  Rng rng(3);
  const SparseObservation obs =
      sample_observation(d, ObservationModel::uniform(5, 1.0), Params(-61.71, 2.44, 0.0), rng);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i == j) {
        EXPECT_EQ(obs.s(i, j), 0.0);
        EXPECT_EQ(obs.mask(i, j), 0);
      } else {
        EXPECT_NEAR(obs.s(i, j), d(i, j) * d(i, j), 1e-12);
        EXPECT_EQ(obs.mask(i, j), 1);
      }
    }
  }
}

TEST(SampleObservationTest, MatchesLiteralRssiRoute) {
  // With q = 1 no Bernoulli draws are consumed, so both routes read the same
  // normals in the same order.
  const Matrix d = FivePointDistances();
  const ChannelParams p = Params(-61.71, 2.44, 28.16, 3);
  Rng a(21), b(21);
  const SparseObservation obs = sample_observation(d, ObservationModel::uniform(5, 1.0), p, a);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      const double literal = sample_sq_distance(i, j, d(i, j), p, b);
      EXPECT_NEAR(obs.s(i, j) / literal, 1.0, 1e-12);
    }
  }
}

TEST(SampleObservationTest, StructuralInvariants) {
  const Matrix d = FivePointDistances();
  Rng rng(4);
  for (int tick = 0; tick < 200; ++tick) {
    const SparseObservation obs =
        sample_observation(d, ObservationModel::uniform(5, 0.6), Testbed(), rng);
    for (int i = 0; i < 5; ++i) {
      EXPECT_EQ(obs.s(i, i), 0.0);
      for (int j = 0; j < 5; ++j) {
        EXPECT_GE(obs.s(i, j), 0.0);
        if (!obs.mask(i, j)) EXPECT_EQ(obs.s(i, j), 0.0);
      }
      EXPECT_EQ(obs.row_avg(i), obs.s.row(i).sum() / 5.0);
    }
  }
}

TEST(SampleObservationTest, EntriesUnbiasedAndMaskRate) {
  const Matrix d = FivePointDistances();
  const ObservationModel model = ObservationModel::uniform(5, 0.8);
  Rng rng(5);
  std::vector<oracle::Stats> s(25);
  oracle::Stats mask_rate;
  for (int tick = 0; tick < 100'000; ++tick) {
    const SparseObservation obs = sample_observation(d, model, Testbed(), rng);
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) {
        if (i == j) continue;
        s[static_cast<std::size_t>(5 * i + j)].add(obs.s(i, j));
        mask_rate.add(obs.mask(i, j));
      }
    }
  }
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      if (i == j) continue;
      const auto& st = s[static_cast<std::size_t>(5 * i + j)];
      EXPECT_NEAR(st.mean(), d(i, j) * d(i, j), 3.0 * st.std_error()) << i << "," << j;
    }
  }
  EXPECT_NEAR(mask_rate.mean(), 0.8, 0.01);
}

TEST(SampleObservationTest, DirectionsAreIndependentDraws) {
  const Matrix d = FivePointDistances();
  Rng rng(6);
  const SparseObservation obs =
      sample_observation(d, ObservationModel::uniform(5, 1.0), Testbed(), rng);
  EXPECT_NE(obs.s(0, 1), obs.s(1, 0));
}

}  // namespace
}  // namespace wsnloc
