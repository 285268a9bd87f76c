#include "wsnloc/random.h"

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

namespace wsnloc {

double standard_normal(Rng& rng) {
  boost::random::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

double uniform01(Rng& rng) {
  boost::random::uniform_01<double> dist;
  return dist(rng);
}

double uniform(Rng& rng, double lo, double hi) {
  boost::random::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

bool bernoulli(Rng& rng, double p) {
  if (p >= 1.0) return true;
  boost::random::bernoulli_distribution<double> dist(p);
  return dist(rng);
}

int uniform_index(Rng& rng, int n) {
  boost::random::uniform_int_distribution<int> dist(0, n - 1);
  return dist(rng);
}

}  // namespace wsnloc
