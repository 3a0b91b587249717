#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "mbdp/model.hpp"

namespace mbdp {

using Rng = std::mt19937_64;

// 53-bit uniform double in [0, 1). Spelled out instead of using
// std::uniform_real_distribution so the stream is identical across
// standard libraries.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

// Inverse-CDF draw from a discrete distribution given as weights summing to 1.
inline std::size_t sample_index(Rng& rng, std::span<const double> probabilities) {
    double u = uniform01(rng);
    std::size_t last = 0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        if (probabilities[i] <= 0.0) continue;
        last = i;
        if (u < probabilities[i]) return i;
        u -= probabilities[i];
    }
    return last;
}

inline std::size_t sample_successor(Rng& rng, std::span<const Successor> successors) {
    double u = uniform01(rng);
    for (const auto& s : successors) {
        if (u < s.probability) return s.state;
        u -= s.probability;
    }
    return successors.back().state;
}

inline JointObservationId sample_observation(Rng& rng, std::span<const ObservationEntry> entries) {
    double u = uniform01(rng);
    for (const auto& e : entries) {
        if (u < e.probability) return e.observation;
        u -= e.probability;
    }
    return entries.back().observation;
}

// Independent, reproducible stream derived from a base seed and a label.
inline Rng derived_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

}  // namespace mbdp
