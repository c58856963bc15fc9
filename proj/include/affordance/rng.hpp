#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace affordance {

/// Seeded random source with platform-independent derived draws.
///
/// std::mt19937_64 output is fully specified by the standard, but the
/// std::*_distribution adaptors are not, so the index and real draws are
/// implemented here to keep experiments replayable bit-for-bit everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform01();

  bool bernoulli(double p) { return uniform01() < p; }

  /// Standard normal draw (Box-Muller, no cached second value).
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// Deterministically mixes a base seed with stream identifiers (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> streams);

}  // namespace affordance
