#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace krpac {

/// Rows per Monte Carlo chunk. Fixed, so results never depend on the
/// number of worker threads.
inline constexpr std::size_t kChunkSize = 4096;

/// Worker threads used by for_each_chunk. 0 selects hardware concurrency.
void set_thread_count(std::size_t threads);
std::size_t thread_count();

/// Calls fn(chunk, begin, end) for every chunk of [0, n). Chunks are handed
/// out to workers dynamically; callers must write only to their own range.
/// The first exception thrown by any chunk is rethrown on the caller.
void for_each_chunk(std::size_t n, std::size_t chunk_size,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

/// Engine for chunk `chunk` of a run seeded with `seed` (seed + chunk index).
inline std::mt19937_64 chunk_engine(std::uint64_t seed, std::size_t chunk) {
  return std::mt19937_64(seed + chunk);
}

/// splitmix64 finalizer; derives well-separated seeds for independent streams
/// (trials, candidates, sub-computations) from one user seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace krpac
