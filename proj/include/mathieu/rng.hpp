#pragma once

#include <cstdint>
#include <random>

namespace mathieu {

/// SplitMix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stream identifiers so that the excitation and each noise channel of one
/// realization never share random numbers.
enum class Stream : std::uint64_t { Excitation = 1, Noise1 = 2, Noise2 = 3, Oracle = 4 };

/// Seed for stream `stream` of work item `index` under `master`.
/// Depends only on its arguments, so any scheduling of work items reproduces
/// the same numbers.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, Stream stream) {
    return splitmix64(splitmix64(splitmix64(master) ^ index) ^ static_cast<std::uint64_t>(stream));
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t master, std::uint64_t index, Stream stream) {
    return Engine(derive_seed(master, index, stream));
}

}  // namespace mathieu
