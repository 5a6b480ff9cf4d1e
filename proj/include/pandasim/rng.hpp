#pragma once

#include <cstdint>
#include <random>

namespace pandasim {

using Rng = std::mt19937_64;

/// Independent, reproducible stream for (seed, stream id). Different subsystems of
/// one replicate draw from different streams so that a change in how many numbers
/// one subsystem consumes does not shift the others.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x9e3779b9u};
    return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline bool bernoulli(Rng& rng, double p) {
    // Always consume exactly one draw, including for p in {0, 1}.
    const double u = uniform01(rng);
    return u < p;
}

inline double lognormal(Rng& rng, double mu, double sigma) {
    return std::lognormal_distribution<double>(mu, sigma)(rng);
}

inline int uniform_int(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace pandasim
