#include "trustrpl/random.hpp"

#include "trustrpl/types.hpp"

namespace trustrpl {

double SeededRandom::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRandom::uniform(double lo, double hi) {
  require(lo <= hi, "uniform: lo must not exceed hi");
  return lo + (hi - lo) * uniform();
}

std::uint64_t SeededRandom::index(std::uint64_t n) {
  require(n > 0, "index: range must be non-empty");
  // Rejection sampling keeps the result unbiased for any n.
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return draw % n;
}

bool SeededRandom::bernoulli(double p) {
  if (p <= 0.0) {
    (void)engine_();
    return false;
  }
  if (p >= 1.0) {
    (void)engine_();
    return true;
  }
  return uniform() < p;
}

std::uint64_t SeededRandom::binomial(std::uint64_t trials, double p) {
  std::uint64_t successes = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    if (bernoulli(p)) ++successes;
  }
  return successes;
}

}  // namespace trustrpl
