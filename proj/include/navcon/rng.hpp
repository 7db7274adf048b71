#pragma once

#include <cstdint>
#include <numbers>
#include <random>

namespace navcon {

// Deterministic helper around mt19937_64. std::uniform_real_distribution is
// implementation-defined, which would make seeded runs differ across standard
// libraries; the 53-bit mantissa trick below is portable.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform angle in (-pi, pi].
  double angle() {
    const double a = -std::numbers::pi + 2.0 * std::numbers::pi * uniform01();
    return a == -std::numbers::pi ? std::numbers::pi : a;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Multiply-shift; bias is negligible for the small n used here.
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace navcon
