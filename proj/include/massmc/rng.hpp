#pragma once

#include <cstdint>
#include <random>

namespace massmc {

/// Advances a splitmix64 state and returns the next output word.
std::uint64_t splitmix64(std::uint64_t& state);

// Deterministic random stream. The engine (mt19937_64) is fully specified by
// the standard; all distributions are implemented here rather than taken from
// <random> so that replay is stable across standard-library versions.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  // Stream `stream_id` of a master seed: the (stream_id+1)-th output of a
  // splitmix64 sequence seeded at `master_seed` becomes the engine seed.
  // Distinct ids give independent streams regardless of scheduling.
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t state = master_seed;
    std::uint64_t seed = 0;
    for (std::uint64_t i = 0; i <= stream_id; ++i) seed = splitmix64(state);
    gen_.seed(seed);
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53 bits of precision.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; the second leg of each pair is cached.
  double normal();

  /// Uniform integer in [0, n), exact (rejection sampling).
  std::uint64_t below(std::uint64_t n);

  /// Poisson draw; Knuth for small mean, Hormann's PTRS otherwise.
  long poisson(double mean);

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace massmc
