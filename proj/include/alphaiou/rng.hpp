#pragma once

#include <random>

namespace alphaiou {

// 53-bit uniform draw in [0, 1). mt19937_64 output is specified bit-for-bit
// by the standard, so sequences are reproducible across platforms.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Uniform in [-1, 1).
inline double uniform_pm1(std::mt19937_64& rng) {
  return 2.0 * uniform_unit(rng) - 1.0;
}

}  // namespace alphaiou
