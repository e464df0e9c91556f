#pragma once

#include <cstdint>
#include <random>

#include "certlearn/bitstring.hpp"

namespace certlearn {

/// Seeded generator with platform-independent draws.
///
/// Wraps mt19937_64 (fully specified by the standard) and implements the
/// bounded/real draws directly, so streams and every CSV derived from them are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Child seed for stream `index` of `master` (splitmix64 finalizer).
  static std::uint64_t derive(std::uint64_t master, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double unit();
  bool bernoulli(double p) { return unit() < p; }
  BitString bits(std::size_t width);

 private:
  std::mt19937_64 engine_;
};

}  // namespace certlearn
