#pragma once

#include <cstdint>
#include <random>

namespace gpfail {

// Deterministic random source. Uniforms come straight from the top 53 bits
// of mt19937_64 output and normals go through the inverse CDF, so streams
// are reproducible bit for bit across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on the open interval (0, 1).
  double uniform01();

  // Uniform on [lo, hi).
  double uniform(double lo, double hi);

  // Standard normal deviate.
  double normal();

  // Uniform integer in {0, ..., n - 1}.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Stable seed derivation for independent substreams (replications,
// per-purpose streams inside a run).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace gpfail
