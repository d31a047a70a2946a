#pragma once

#include <cstdint>
#include <random>

namespace weylint {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Independent generator for stream `stream` of a master seed. Streams are a
/// pure function of (master, stream), so work split into fixed chunks gives
/// the same numbers regardless of scheduling.
inline Rng make_stream(std::uint64_t master, std::uint64_t stream)
{
    return Rng(splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL)));
}

} // namespace weylint
