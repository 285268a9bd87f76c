#include "wsnloc/channel.h"

#include <cmath>
#include <numbers>
#include <string>

#include "wsnloc/error.h"

namespace wsnloc {

void ChannelParams::validate() const {
  if (!(eta > 0.0)) throw ConfigError("channel: eta must be > 0, got " + std::to_string(eta));
  if (!(sigma2 >= 0.0))
    throw ConfigError("channel: sigma2 must be >= 0, got " + std::to_string(sigma2));
  if (t_samples < 1)
    throw ConfigError("channel: t_samples must be >= 1, got " + std::to_string(t_samples));
  if (!std::isfinite(pl0)) throw ConfigError("channel: pl0 must be finite");
}

ObservationModel ObservationModel::uniform(int n, double q) {
  return ObservationModel(Matrix::Constant(n, n, q));
}

ObservationModel::ObservationModel(Matrix q) : q_(std::move(q)) {
  if (q_.rows() != q_.cols()) throw ConfigError("observation: q matrix must be square");
  for (Eigen::Index i = 0; i < q_.rows(); ++i) {
    for (Eigen::Index j = 0; j < q_.cols(); ++j) {
      if (i == j) continue;
      if (!(q_(i, j) > 0.0 && q_(i, j) <= 1.0)) {
        throw ConfigError("observation: q(" + std::to_string(i) + "," + std::to_string(j) +
                          ") = " + std::to_string(q_(i, j)) + " outside (0, 1]");
      }
    }
  }
}

double path_loss(double d, const ChannelParams& params) {
  if (!(d > 0.0)) throw DomainError("path_loss: distance must be > 0, got " + std::to_string(d));
  return params.pl0 + 10.0 * params.eta * std::log10(d / ChannelParams::kReferenceDistance);
}

RssiSample sample_rssi(int i, int j, double d, const ChannelParams& params, Rng& rng) {
  if (i == j) throw DomainError("sample_rssi: src and dst must differ");
  const double noise = std::sqrt(params.sigma2) * standard_normal(rng);
  return {-path_loss(d, params) + noise, i, j};
}

double bias_constant(const ChannelParams& params) {
  const double ten_eta = 10.0 * params.eta;
  return std::pow(10.0, params.sigma2 * std::numbers::ln10 /
                            (2.0 * params.t_samples * ten_eta * ten_eta));
}

double estimate_sq_distance(double mean_rssi, const ChannelParams& params) {
  const double c = bias_constant(params);
  const double c4 = (c * c) * (c * c);
  return std::pow(10.0, (-mean_rssi - params.pl0) / (5.0 * params.eta)) / c4;
}

double sample_sq_distance(int i, int j, double d, const ChannelParams& params, Rng& rng) {
  double sum = 0.0;
  for (int t = 0; t < params.t_samples; ++t) sum += sample_rssi(i, j, d, params, rng).value;
  return estimate_sq_distance(sum / params.t_samples, params);
}

SparseObservation sample_observation(const Scenario& scenario, const ObservationModel& obs,
                                     const ChannelParams& params, Rng& rng) {
  return sample_observation(distance_matrix(scenario.positions), obs, params, rng);
}

SparseObservation sample_observation(const Matrix& distances, const ObservationModel& obs,
                                     const ChannelParams& params, Rng& rng) {
  const auto n = distances.rows();
  if (obs.size() != n) throw ConfigError("sample_observation: q matrix size does not match N");

  // PL(d) cancels against PL0 in the exponent, leaving
  //   D = d^2 10^{-noise/(5 eta)} / C^4,
  // which needs one exp per pair instead of log10 + pow.
  const double c = bias_constant(params);
  const double inv_c4 = 1.0 / ((c * c) * (c * c));
  const double sigma = std::sqrt(params.sigma2);
  const double noise_scale = -std::numbers::ln10 / (5.0 * params.eta);

  SparseObservation out{Matrix::Zero(n, n), MaskMatrix::Zero(n, n), Vector::Zero(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double q = obs.q(static_cast<int>(i), static_cast<int>(j));
      if (!bernoulli(rng, q)) continue;
      const double d = distances(i, j);
      if (!(d > 0.0)) throw DomainError("sample_observation: coincident nodes have no path loss");
      double noise = 0.0;
      for (int t = 0; t < params.t_samples; ++t) noise += sigma * standard_normal(rng);
      noise /= params.t_samples;
      out.mask(i, j) = 1;
      out.s(i, j) = d * d * std::exp(noise_scale * noise) * inv_c4 / q;
    }
    out.row_avg(i) = out.s.row(i).sum() / static_cast<double>(n);
  }
  return out;
}

}  // namespace wsnloc
