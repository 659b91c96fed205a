#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace swplan {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Derive an independent child seed from a base seed and a tag sequence.
/// Used to give every worker / subsystem its own stream so that parallel
/// evaluation stays reproducible regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t state = base ^ 0xA0761D6478BD642FULL;
  std::uint64_t out = splitmix64(state);
  for (std::uint64_t tag : tags) {
    state ^= tag + 0x9E3779B97F4A7C15ULL;
    out = splitmix64(state);
  }
  return out;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace swplan
