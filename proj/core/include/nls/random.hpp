#pragma once

#include <cstdint>

namespace nls {

// Counter-based generator: draw k of stream `seed` is splitmix64(seed ^ mix(k)),
// so any draw can be reproduced without replaying the ones before it.
std::uint64_t splitmix64(std::uint64_t z) noexcept;
std::uint64_t counter_draw(std::uint64_t seed, std::uint64_t counter) noexcept;

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t start = 0) noexcept
      : seed_(seed), counter_(start) {}

  std::uint64_t next_u64() noexcept { return counter_draw(seed_, counter_++); }
  // [0, 1) with 53 random bits
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  // integer in [lo, hi]
  int uniform_int(int lo, int hi) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace nls
