#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace spchain {

// Seedable generator behind every random draw. Only the raw 64-bit output of
// mt19937_64 is used (its sequence is fixed by the standard); all derived
// distributions are computed here so runs replay bit-exactly on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform in [lo, hi].
  std::uint64_t uniform_between(std::uint64_t lo, std::uint64_t hi) {
    return lo + uniform_below(hi - lo + 1);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  void fill(std::span<std::uint8_t> out);

  // Independent stream derived from this generator's seed and a label.
  Rng fork(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace spchain
