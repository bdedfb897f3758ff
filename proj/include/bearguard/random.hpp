#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace bearguard {

// Sampling helpers built directly on mt19937_64 output.
//
// The standard <random> distributions are implementation-defined, which
// would make logs differ across standard libraries. Everything here is
// pinned to the engine's specified bit stream, so a seed reproduces the
// same values everywhere.

inline double uniform01(std::mt19937_64& rng) {
  // 53 high bits -> [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline bool bernoulli(std::mt19937_64& rng, double p) {
  return uniform01(rng) < p;
}

// Normal(mean, spread) truncated to [0, 1] by rejection (Box-Muller).
inline double truncated_normal01(std::mt19937_64& rng, double mean,
                                 double spread) {
  if (spread <= 0.0) {
    return mean < 0.0 ? 0.0 : (mean > 1.0 ? 1.0 : mean);
  }
  for (;;) {
    double u1 = uniform01(rng);
    double u2 = uniform01(rng);
    if (u1 <= 0.0) continue;
    double z = std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * 3.14159265358979323846 * u2);
    double v = mean + spread * z;
    if (v >= 0.0 && v <= 1.0) return v;
  }
}

}  // namespace bearguard
