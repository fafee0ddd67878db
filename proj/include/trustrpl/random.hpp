#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace trustrpl {

/// Deterministic random source for one simulation run.
///
/// Backed by the 64-bit Mersenne Twister, whose output sequence is fixed by
/// the C++ standard. The standard distribution adaptors are not portable
/// across library implementations, so every derived draw below is computed
/// here from raw 64-bit words.
class SeededRandom {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64";

  explicit SeededRandom(std::uint64_t seed = 1) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform double in [lo, hi].
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n). `n` must be positive.
  std::uint64_t index(std::uint64_t n);

  bool bernoulli(double p);

  /// Number of successes in `trials` independent Bernoulli(p) draws.
  std::uint64_t binomial(std::uint64_t trials, double p);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace trustrpl
