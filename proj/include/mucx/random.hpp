#pragma once

#include <cstdint>
#include <random>

namespace mucx {

/// Seeded generator with platform-independent draws. The standard
/// distributions are implementation-defined, so bounded integers and unit
/// doubles are derived from the raw 64-bit stream here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
      std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mucx
