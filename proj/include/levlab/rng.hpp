#pragma once

#include <cstdint>
#include <random>

namespace levlab {

/// splitmix64 step; mixes a 64-bit state into a well-distributed output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Sub-stream rule: stream k of a run seeded with `seed` is an mt19937_64
/// seeded with splitmix64 iterated over (seed, k). Stream k always sees the
/// same draws no matter how work is scheduled across threads, so parallel
/// generation is reproducible and order-independent.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t mixed = splitmix64(s);
    s += stream;
    mixed ^= splitmix64(s);
    return std::mt19937_64(mixed);
}

}  // namespace levlab
