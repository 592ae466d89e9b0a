#pragma once

#include <cstdint>
#include <string_view>

namespace hiercls {

// Seeded 64-bit FNV-1a with a splitmix64 finalizer for avalanche.
// This function is part of the model file contract: saved models record
// the seed and assume this exact function at prediction time.
inline std::uint64_t hash64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ULL ^ (seed * 0x9E3779B97F4A7C15ULL);
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  h ^= h >> 30;
  h *= 0xBF58476D1CE4E5B9ULL;
  h ^= h >> 27;
  h *= 0x94D049BB133111EBULL;
  h ^= h >> 31;
  return h;
}

}  // namespace hiercls
