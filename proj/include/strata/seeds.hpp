#pragma once

#include <cstdint>
#include <random>

namespace strata {

// Deterministic seed hierarchy: run-seed -> per-point estimate seeds ->
// per-layer seeds -> noise seed. Every component of a run can be replayed
// in isolation from (seed, tag) pairs.
namespace seeds {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive(std::uint64_t parent, std::uint64_t tag) {
    return splitmix64(parent ^ splitmix64(tag));
}

// Tags for the fixed children of an estimate seed.
inline constexpr std::uint64_t kLayerTagBase = 0x4c41594552ULL;   // layer k -> base + k
inline constexpr std::uint64_t kNoiseTag     = 0x4e4f495345ULL;
inline constexpr std::uint64_t kPointTagBase = 0x504f494e54ULL;   // point i -> base + i
inline constexpr std::uint64_t kShuffleTag   = 0x53485546ULL;
inline constexpr std::uint64_t kLabelRuleTag = 0x52554c45ULL;
inline constexpr std::uint64_t kHeldoutTag   = 0x48454c44ULL;

inline std::uint64_t for_point(std::uint64_t run_seed, int point) {
    return derive(run_seed, kPointTagBase + static_cast<std::uint64_t>(point));
}

inline std::uint64_t for_layer(std::uint64_t estimate_seed, int k) {
    return derive(estimate_seed, kLayerTagBase + static_cast<std::uint64_t>(k));
}

inline std::uint64_t for_noise(std::uint64_t estimate_seed) {
    return derive(estimate_seed, kNoiseTag);
}

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

}  // namespace seeds
}  // namespace strata
