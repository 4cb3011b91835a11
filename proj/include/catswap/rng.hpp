#pragma once

#include <cstdint>
#include <random>

namespace catswap {

using Rng = std::mt19937_64;

// Stateless 64-bit mixer (splitmix64). Used to derive independent
// substream seeds from a master seed, so per-round / per-outcome RNGs
// are reproducible regardless of evaluation order.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline Rng substream(std::uint64_t master_seed, std::uint64_t index) {
    return Rng(mix64(master_seed ^ mix64(index)));
}

// Uniform double in [0, 1) with 53 random bits. Pinned bit-for-bit so
// sampled runs do not depend on the standard library's distribution
// implementation.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace catswap
