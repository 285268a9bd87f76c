#pragma once

#include "wsnloc/random.h"
#include "wsnloc/scenario.h"
#include "wsnloc/types.h"

namespace wsnloc {

// Log-normal shadowing parameters. The reference distance d0 is fixed at 1 m.
struct ChannelParams {
  double pl0 = -61.71;   // dB
  double eta = 2.44;     // path-loss exponent
  double sigma2 = 28.16; // dB^2
  int t_samples = 1;     // RSSI samples averaged per distance estimate

  static constexpr double kReferenceDistance = 1.0;

  void validate() const;
};

struct RssiSample {
  double value;  // dB
  int src;
  int dst;
};

// Per-link observation probabilities q_ij in (0, 1]. The diagonal is ignored.
class ObservationModel {
 public:
  static ObservationModel uniform(int n, double q);
  explicit ObservationModel(Matrix q);

  int size() const { return static_cast<int>(q_.rows()); }
  double q(int i, int j) const { return q_(i, j); }
  const Matrix& matrix() const { return q_; }

 private:
  Matrix q_;
};

// One tick of sparse squared-distance observations. Row i is what node i
// holds locally.
struct SparseObservation {
  Matrix s;        // q_ij^{-1} A(i,j) D(i,j), zero where unobserved (m^2)
  MaskMatrix mask; // Bernoulli outcomes A(i,j)
  Vector row_avg;  // (1/N) sum_j s(i,j)
};

// PL(d) = PL0 + 10 eta log10(d).
double path_loss(double d, const ChannelParams& params);

// -PL(d) + eps with eps ~ N(0, sigma2).
RssiSample sample_rssi(int i, int j, double d, const ChannelParams& params, Rng& rng);

// C = 10^{sigma2 ln10 / (2 T (10 eta)^2)}; C^4 removes the log-normal bias of
// the inverted path-loss model.
double bias_constant(const ChannelParams& params);

// Unbiased squared-distance estimate 10^{(-mean_rssi - PL0)/(5 eta)} / C^4.
double estimate_sq_distance(double mean_rssi, const ChannelParams& params);

// Averages t_samples fresh RSSI draws on the link and inverts them.
double sample_sq_distance(int i, int j, double d, const ChannelParams& params, Rng& rng);

// Full tick of Bernoulli-masked, reweighted observations. The overload taking
// a distance matrix avoids recomputing it inside simulation loops.
SparseObservation sample_observation(const Scenario& scenario, const ObservationModel& obs,
                                     const ChannelParams& params, Rng& rng);
SparseObservation sample_observation(const Matrix& distances, const ObservationModel& obs,
                                     const ChannelParams& params, Rng& rng);

}  // namespace wsnloc
