#ifndef BASIC_RNG_HPP
#define BASIC_RNG_HPP

#include <cstdint>
#include <initializer_list>
#include <random>

namespace basic {

using Rng = std::mt19937_64;

namespace detail {

// SplitMix64 finalizer; used to mix substream ids into seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace detail

/// Deterministic substream: one master seed plus a path of stream ids
/// (scenario, replication, network index, ...) yields an independent
/// generator. Distinct paths never collide in practice.
inline Rng substream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = detail::splitmix64(seed);
    for (std::uint64_t id : path)
        s = detail::splitmix64(s ^ detail::splitmix64(id + 0x632be59bd9b4e019ULL));
    return Rng(s);
}

} // namespace basic

#endif // BASIC_RNG_HPP
