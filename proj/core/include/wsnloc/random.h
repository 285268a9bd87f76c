#pragma once

#include <cstdint>
#include <limits>

namespace wsnloc {

// SplitMix64: a 64-bit counter passed through a bijective finalizer. Each
// output depends only on (seed, counter), which makes streams cheap to fork.
// Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// Independent purposes draw from disjoint sub-streams so that, e.g., switching
// the doMDS variant does not perturb the observation noise.
enum class StreamPurpose : std::uint64_t {
  kScenario = 1,
  kInit = 2,
  kObservation = 3,
  kAtsFirst = 4,
  kAtsSecond = 5,
  kAtsDelta = 6,
  kEdgeRssi = 7,
  kGossip = 8,
  kTest = 99,
};

// Root of all randomness for one replica. substream(tick, purpose) returns a
// fresh generator that is a pure function of (seed, tick, purpose).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed) {}

  static RandomStream for_replica(std::uint64_t master_seed, std::uint64_t replica) {
    return RandomStream(Rng::mix(Rng::mix(master_seed) ^ (replica + 0x632be59bd9b4e019ULL)));
  }

  Rng substream(std::uint64_t tick, StreamPurpose purpose) const {
    std::uint64_t key = Rng::mix(seed_ ^ Rng::mix(tick + 0x9e3779b97f4a7c15ULL));
    key = Rng::mix(key ^ (static_cast<std::uint64_t>(purpose) * 0xd1b54a32d192ed03ULL));
    return Rng(key);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Draws backed by Boost.Random so that the sequence is identical across
// standard-library implementations.
double standard_normal(Rng& rng);
double uniform01(Rng& rng);
double uniform(Rng& rng, double lo, double hi);
bool bernoulli(Rng& rng, double p);
int uniform_index(Rng& rng, int n);

}  // namespace wsnloc
