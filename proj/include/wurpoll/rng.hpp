#pragma once

#include <cstdint>

namespace wurpoll {

// Deterministic counter-free PRNG (splitmix64). One independent stream per
// (seed, stream, substream) triple so adding nodes or reordering draws in one
// stream never perturbs another.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng for_stream(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t substream = 0);

  std::uint64_t next_u64();

  // Uniform in [0, 1).
  double next_unit();

  // Standard normal scaled by sigma (Box-Muller, no caching).
  double next_gaussian(double sigma);

  bool next_bernoulli(double p);

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

}  // namespace wurpoll
