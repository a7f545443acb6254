#pragma once

#include <cstdint>
#include <random>

namespace idlab {

/// All randomness flows through explicitly seeded 64-bit Mersenne Twister
/// streams; nothing reads global state.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words, so distinct inputs give
/// distinct outputs.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Folds one coordinate into a running 64-bit hash.
constexpr std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ (splitmix64(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

}  // namespace idlab
