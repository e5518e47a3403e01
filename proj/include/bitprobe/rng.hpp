#pragma once

#include <cstdint>
#include <cmath>
#include <stdexcept>
#include <string_view>

namespace bitprobe {

// Deterministic splittable generator built on splitmix64. Every experiment
// draws from one root seed through named splits, so a report's seed replays
// the run bit-for-bit regardless of platform stdlib; no std:: distributions
// are used anywhere.
class SplitRng {
 public:
  explicit SplitRng(uint64_t seed) : seed_(seed), state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Unbiased uniform draw from [0, bound).
  uint64_t next_below(uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("next_below: bound must be positive");
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // Standard normal via Box-Muller (second sample discarded; callers that
  // need pairs draw twice).
  double next_normal() {
    double u1;
    do {
      u1 = next_double();
    } while (u1 <= 0.0);
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Child generators are keyed off the *original* seed, never the evolving
  // state, so split order is independent of draw order.
  SplitRng split(std::string_view label) const { return SplitRng(combine(seed_, fnv1a(label))); }
  SplitRng split(uint64_t index) const {
    return SplitRng(combine(seed_, index ^ 0xA24BAED4963EE407ull));
  }

  uint64_t seed() const { return seed_; }

 private:
  static uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (char c : s) {
      h ^= static_cast<uint8_t>(c);
      h *= 0x100000001B3ull;
    }
    return h;
  }

  static uint64_t combine(uint64_t a, uint64_t b) {
    uint64_t z = a ^ (b + 0x9E3779B97F4A7C15ull + (a << 6) + (a >> 2));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  uint64_t seed_;
  uint64_t state_;
};

}  // namespace bitprobe
