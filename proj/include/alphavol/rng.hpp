#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace alphavol {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for an independent stream identified by (seed, keys...). Streams with
/// different keys are decorrelated by the SplitMix64 finalizer.
inline std::uint64_t stream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = splitmix64(seed);
    for (std::uint64_t k : keys) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
    return h;
}

inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    return Rng(stream_seed(seed, keys));
}

/// Uniform double in [0, 1) using the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace alphavol
