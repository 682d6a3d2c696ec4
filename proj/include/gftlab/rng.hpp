#pragma once

#include <cstdint>

// Counter-addressable randomness: the n-th variate of a stream is a pure
// function of (seed, n). This is the splitmix64 generator evaluated at an
// arbitrary stream position, so trials can run in any order (or on any
// worker) and still see identical numbers.

namespace gftlab {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// n-th 64-bit output of the splitmix64 sequence seeded with `seed`.
constexpr std::uint64_t bits_at(std::uint64_t seed, std::uint64_t n) {
    return mix64(seed + (n + 1) * kGolden);
}

// Uniform double in [0, 1), 53 random mantissa bits.
constexpr double uniform_at(std::uint64_t seed, std::uint64_t n) {
    return static_cast<double>(bits_at(seed, n) >> 11) * 0x1.0p-53;
}

// Decorrelated child seed for substream `stream` (trial index, role, ...).
// Double mixing keeps child sequences disjoint from the parent's own outputs.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed ^ mix64(stream * kGolden + 0x5851f42d4c957f2dULL));
}

}  // namespace gftlab
