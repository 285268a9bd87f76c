#pragma once

// Reference computations the tests compare the library against. Each one is
// written the slow, obvious way and shares no code with core/.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace wsnloc::oracle {

using Mat = Eigen::MatrixXd;

// -1/2 J S J with J = I - 11^T/N formed explicitly.
inline Mat double_center(const Mat& s) {
  const auto n = s.rows();
  const Mat j = Mat::Identity(n, n) - Mat::Constant(n, n, 1.0 / static_cast<double>(n));
  return -0.5 * j * s * j;
}

// Z Z^T of barycentric coordinates.
inline Mat barycentric_gram(const Mat& z) {
  const Mat c = z.rowwise() - z.colwise().mean();
  return c * c.transpose();
}

inline Mat squared_distances(const Mat& z) {
  const auto n = z.rows();
  Mat s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) s(i, j) = (z.row(i) - z.row(j)).squaredNorm();
  }
  return s;
}

// Welford accumulator for Monte Carlo means.
class Stats {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  std::int64_t count() const { return n_; }
  double mean() const { return mean_; }
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
  double std_error() const { return std::sqrt(variance() / static_cast<double>(n_)); }
  double second_moment() const { return variance() * (n_ - 1) / n_ + mean_ * mean_; }

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

// Central differences of a scalar function of a matrix argument.
inline Mat central_gradient(const std::function<double(const Mat&)>& f, const Mat& x, double h) {
  Mat g(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      Mat xp = x, xm = x;
      xp(i, j) += h;
      xm(i, j) -= h;
      g(i, j) = (f(xp) - f(xm)) / (2.0 * h);
    }
  }
  return g;
}

// Every outcome of one transmission-sequence draw on n nodes with its
// probability: broadcaster uniform, each other node hears it w.p. q.
struct AtsOutcome {
  int broadcaster;
  std::vector<std::uint8_t> received;
  double prob;
};

inline std::vector<AtsOutcome> ats_outcomes(int n, double q) {
  std::vector<AtsOutcome> out;
  for (int b = 0; b < n; ++b) {
    const int others = n - 1;
    for (int mask = 0; mask < (1 << others); ++mask) {
      AtsOutcome o{b, std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0), 1.0 / n};
      int bit = 0;
      for (int i = 0; i < n; ++i) {
        if (i == b) continue;
        const bool hit = (mask >> bit++) & 1;
        o.received[static_cast<std::size_t>(i)] = hit ? 1 : 0;
        o.prob *= hit ? q : 1.0 - q;
      }
      out.push_back(std::move(o));
    }
  }
  return out;
}

}  // namespace wsnloc::oracle
