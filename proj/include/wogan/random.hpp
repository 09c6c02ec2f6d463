#pragma once

#include <cstdint>
#include <random>

namespace wogan {

/// The single RNG type threaded through every stochastic component.
using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gaussian(Rng& rng, double stddev) {
    return std::normal_distribution<double>(0.0, stddev)(rng);
}

/// Uniform index in [0, n).
inline std::size_t pick(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

} // namespace wogan
