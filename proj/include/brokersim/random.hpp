#pragma once

#include <cstdint>
#include <random>

namespace brokersim {

using Rng = std::mt19937_64;

// Portable uniform draw in [0, 1); std distributions differ across stdlibs.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace brokersim
