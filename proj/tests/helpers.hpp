#pragma once

#include <random>
#include <vector>

#include "dyncover/geometry.hpp"

namespace testutil {

using namespace dyncover;

// Dyadic coordinates k / 2^bits in [lo, hi] keep comparisons exact.
inline double dyadic(std::mt19937_64& rng, double lo, double hi, int bits = 10) {
    uint64_t steps = uint64_t{1} << bits;
    uint64_t k = std::uniform_int_distribution<uint64_t>(0, steps)(rng);
    return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps);
}

inline int rand_int(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Interval rand_interval(std::mt19937_64& rng, double lo, double hi, double maxLen, double w = 1, int bits = 10) {
    double a = dyadic(rng, lo - 0.1 * (hi - lo), hi, bits);
    double len = dyadic(rng, 0, maxLen, bits);
    return Interval{a, a + len, w};
}

inline Quadrant rand_quadrant(std::mt19937_64& rng, double lo, double hi, double w = 1, int bits = 6) {
    Dir d = static_cast<Dir>(rand_int(rng, 0, 3));
    double pad = 0.1 * (hi - lo);
    return Quadrant{d, dyadic(rng, lo - pad, hi + pad, bits), dyadic(rng, lo - pad, hi + pad, bits), w};
}

}  // namespace testutil
