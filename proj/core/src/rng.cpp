#include "gpfail/rng.hpp"

#include "gpfail/normal.hpp"

namespace gpfail {

double Rng::uniform01() {
  // (x >> 11) is uniform on {0, ..., 2^53 - 1}; forcing the low bit keeps
  // the result strictly inside (0, 1) in exact double arithmetic, so
  // inverse-CDF transforms stay finite.
  return static_cast<double>((engine_() >> 11) | 1) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

double Rng::normal() { return normal_quantile(uniform01()); }

std::uint64_t Rng::below(std::uint64_t n) {
  // Rejection sampling to avoid modulo bias.
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace gpfail
