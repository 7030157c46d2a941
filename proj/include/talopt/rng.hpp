#pragma once

#include <cstdint>
#include <random>

namespace talopt {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent generator derived from a master seed. Streams with distinct
/// ids are decorrelated, so per-particle draws stay reproducible no matter
/// how the work is scheduled across threads.
inline std::mt19937_64 make_rng_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return std::mt19937_64(splitmix64(master_seed ^ splitmix64(stream_id + 1)));
}

} // namespace talopt
