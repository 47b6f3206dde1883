#pragma once

#include <array>
#include <cstdint>

#include "gfm/normal.hpp"

namespace gfm {

// Philox4x32-10 counter-based generator (Salmon, Moraes, Dror, Shaw).
// Stateless: the (key, counter) pair fully determines the output block, so
// any partition of samples across workers reproduces the same stream. The
// implementation matches the Random123 known-answer vectors.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
        const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

// 64 random bits -> uniform double strictly inside (0,1): midpoints of a
// 2^52-cell lattice. Every k + 0.5 with k < 2^52 is exact and the power-of-two
// scale is exact, so no rounding can push the result onto 0 or 1. (A 53-bit
// lattice would not survive this: (2^53 - 1) + 0.5 rounds to 2^53 and the top
// cell would collapse onto exactly 1.)
inline double uniform_from_bits(std::uint64_t bits) {
    return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

// Standard normal variate for (seed, sample, slot), via the inverse-CDF
// transform so results are identical across platforms and worker counts.
inline double normal_draw(std::uint64_t seed, std::uint64_t sample, std::uint32_t slot) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(sample), static_cast<std::uint32_t>(sample >> 32), slot, 0u};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                              static_cast<std::uint32_t>(seed >> 32)};
    const auto out = philox4x32(ctr, key);
    const std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    return std_normal_inv_cdf(uniform_from_bits(bits));
}

} // namespace gfm
