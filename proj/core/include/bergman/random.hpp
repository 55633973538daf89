#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace bergman {

/// Seeded generator used for every random probe in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The conversion to doubles is done here (top 53 bits) instead of
/// through std::uniform_real_distribution, whose algorithm is
/// implementation-defined. Together this makes seeded runs reproducible
/// across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace bergman
