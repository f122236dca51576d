#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace atlasgeo {

// Seeded draws built directly on mt19937_64 output so sampled datasets and
// experiment pairings are reproducible byte-for-byte across platforms
// (std::uniform_real_distribution and friends are implementation-defined).

inline double uniform_unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline uint64_t uniform_below(std::mt19937_64& gen, uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return x % n;
}

/// Standard normal via Box-Muller on open-interval uniforms.
inline double gaussian(std::mt19937_64& gen) {
    const double u1 = (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = uniform_unit(gen);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

/// First n indices of a seeded partial Fisher-Yates shuffle of 0..total-1:
/// a uniform sample without replacement.
inline std::vector<size_t> sample_without_replacement(size_t total, size_t n,
                                                      std::mt19937_64& gen) {
    std::vector<size_t> idx(total);
    for (size_t i = 0; i < total; ++i) idx[i] = i;
    for (size_t i = 0; i < n; ++i) {
        const size_t j = i + static_cast<size_t>(uniform_below(gen, total - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(n);
    return idx;
}

}  // namespace atlasgeo
