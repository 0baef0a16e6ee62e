//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <string_view>

namespace pepforge {

// splitmix64 finalizer; bit-exact on every platform.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t kHashSeed = 0x5045504647524745ULL;  // "PEPFGRGE"

constexpr std::uint64_t hash_combine(std::uint64_t seed,
                                     std::uint64_t value) noexcept {
  return mix64(seed ^ (mix64(value) + 0x9E3779B97F4A7C15ULL + (seed << 6)
                       + (seed >> 2)));
}

constexpr std::uint64_t hash_bytes(std::string_view bytes,
                                   std::uint64_t seed = kHashSeed) noexcept {
  std::uint64_t h = seed;
  for (const char c: bytes)
    h = hash_combine(h, static_cast<unsigned char>(c));
  return hash_combine(h, bytes.size());
}

}  // namespace pepforge
