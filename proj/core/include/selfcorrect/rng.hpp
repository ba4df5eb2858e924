#pragma once

#include <cstdint>
#include <random>

namespace selfcorrect {

/// Deterministic pseudo-random source. Everything in this library draws
/// randomness through this type so that a single 64-bit seed reproduces a
/// run bit-for-bit on any platform.
using Rng = std::mt19937_64;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace detail

/// Hierarchical seed derivation: experiment seed -> trial seed -> call seed.
/// derive_seed(s, tag, i) is stable across platforms and runs, so trials can
/// be replayed (or run concurrently) without perturbing each other.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t index = 0) {
    std::uint64_t h = detail::splitmix64(seed ^ 0x517cc1b727220a95ULL);
    h = detail::splitmix64(h ^ detail::splitmix64(tag));
    h = detail::splitmix64(h ^ detail::splitmix64(index));
    return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(detail::splitmix64(seed)); }

/// Uniform draw from [0, bound). Hand-rolled rejection sampling instead of
/// std::uniform_int_distribution, whose output is not specified bit-for-bit
/// by the standard.
inline std::uint64_t bounded_uniform(Rng& rng, std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % bound;
}

/// Bernoulli(p) draw from 53 uniform bits.
inline bool bernoulli(Rng& rng, double prob) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return u < prob;
}

} // namespace selfcorrect
