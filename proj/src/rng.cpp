#include "wurpoll/rng.hpp"

#include <cmath>

namespace wurpoll {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t stream,
                    std::uint64_t substream) {
  std::uint64_t s = mix(seed);
  s = mix(s ^ (0xa5a5a5a5a5a5a5a5ULL + stream));
  s = mix(s ^ (0x5a5a5a5a5a5a5a5aULL + substream));
  return Rng(s);
}

std::uint64_t Rng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::next_unit() {
  // 53 high bits -> double in [0, 1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_gaussian(double sigma) {
  if (sigma == 0.0) return 0.0;
  double u1 = next_unit();
  double u2 = next_unit();
  // avoid log(0)
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  return sigma * r * std::cos(6.283185307179586476925286766559 * u2);
}

bool Rng::next_bernoulli(double p) { return next_unit() < p; }

std::uint64_t Rng::next_below(std::uint64_t n) {
  // modulo bias is irrelevant for simulation-sized n
  return n == 0 ? 0 : next_u64() % n;
}

}  // namespace wurpoll
