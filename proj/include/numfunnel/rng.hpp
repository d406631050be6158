#pragma once

#include <cstdint>
#include <string_view>

// Deterministic draw streams.
//
// Every random property of the synthetic world is a pure function of
// (seed, entity key, tag). There is no stateful generator anywhere, so a
// record can be re-materialized in any order, from any thread, and always
// comes out identical. splitmix64 is the mixer; tags keep the per-entity
// streams independent of each other.

namespace numfunnel {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t mix_stream(std::uint64_t seed, std::uint64_t key,
                                          std::uint64_t tag) {
  return splitmix64(splitmix64(seed ^ splitmix64(key)) ^ tag);
}

// Uniform double in [0, 1), 53 usable bits.
inline constexpr double unit_interval(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline constexpr bool coin(std::uint64_t h, double rate) {
  return unit_interval(h) < rate;
}

// Unbiased-enough uniform draw below n (multiply-shift).
inline constexpr std::uint64_t uniform_below(std::uint64_t h, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(h) * n) >> 64);
}

inline constexpr std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace numfunnel
