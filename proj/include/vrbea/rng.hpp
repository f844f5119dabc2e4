#pragma once

#include <cstdint>
#include <random>

namespace vrbea {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for stream `stream` of item `index` under `master`.
///
/// The value depends only on (master, index, stream), so adding items never
/// perturbs the seeds of existing ones.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                    std::uint64_t stream) {
  return mix64(mix64(master) ^ mix64((index << 8) + stream + 1));
}

}  // namespace vrbea
