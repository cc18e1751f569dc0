#pragma once

#include <cstdint>
#include <random>

namespace exactpa {

/// One generator per run; every random decision of a run draws from it.
using Rng = std::mt19937_64;

/// splitmix64 finalizer, used to derive independent substream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of substream `index` under `master`. Workers of the verification
/// harness use index = worker number.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  return mix_seed(master ^ mix_seed(index + 1));
}

inline std::uint64_t uniform_index(Rng& rng, std::uint64_t size) {
  return std::uniform_int_distribution<std::uint64_t>(0, size - 1)(rng);
}

}  // namespace exactpa
