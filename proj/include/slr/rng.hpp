#pragma once

// Deterministic counter-based random number generation.
//
// Every variate is a pure function of (seed, row, column): the 64-bit
// counter word is produced by two rounds of the SplitMix64 finalizer over
// the seed and the two indices. There is no generator state, so sampling
// is reproducible bit for bit regardless of evaluation order or chunking.
//
// Standard normals use the Box-Muller transform (cosine branch) on two
// counter-derived uniforms; finite discrete laws use inverse-CDF lookup
// on one uniform against the cumulative atom probabilities.

#include <cmath>
#include <cstdint>

#include "slr/source_distribution.hpp"

namespace slr {

inline constexpr std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

inline constexpr std::uint64_t counter_word(std::uint64_t seed, std::uint64_t row,
                                            std::uint64_t col) {
    std::uint64_t z = mix64(seed + 0x9E3779B97F4A7C15ULL * (row + 1));
    z = mix64(z + 0xD1B54A32D192ED03ULL * (col + 1));
    return z;
}

// Uniform on (0, 1]; never 0, so logarithms are safe.
inline constexpr double uniform01(std::uint64_t word) {
    return static_cast<double>((word >> 11) + 1) * 0x1.0p-53;
}

inline double standard_normal(std::uint64_t seed, std::uint64_t row, std::uint64_t stream) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    const double u1 = uniform01(counter_word(seed, row, 2 * stream));
    const double u2 = uniform01(counter_word(seed, row, 2 * stream + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

// One draw from a source; `stream` is the source's column index.
inline double draw_source(const SourceDistribution& source, std::uint64_t seed,
                          std::uint64_t row, std::uint64_t stream) {
    if (source.kind() == SourceKind::Gaussian) {
        return std::sqrt(source.variance()) * standard_normal(seed, row, stream);
    }
    const double u = uniform01(counter_word(seed, row, 2 * stream));
    double cum = 0.0;
    for (const DiscretePoint& p : source.points()) {
        cum += p.prob;
        if (u <= cum) return p.value;
    }
    return source.points().back().value;  // guard against fp shortfall in cum
}

}  // namespace slr
