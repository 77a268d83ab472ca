#pragma once

#include <cstdint>
#include <random>
#include <string_view>

// The distributions in <random> are implementation-defined, so every draw
// goes through Boost.Random, whose algorithms are fixed.
#include <boost/random/chi_squared_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace ggmpl {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; a bijective 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for substream `index` of `base`. Used for per-draw and per-replication streams.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return mix64(mix64(base) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// FNV-1a over a descriptor string, mixed with a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view descriptor) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : descriptor) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return derive_seed(base, h);
}

inline double uniform01(Rng& rng) { return boost::random::uniform_01<double>{}(rng); }

inline double standard_normal(Rng& rng) { return boost::random::normal_distribution<double>{}(rng); }

inline std::int64_t uniform_index(Rng& rng, std::int64_t count) {
  return boost::random::uniform_int_distribution<std::int64_t>(0, count - 1)(rng);
}

}  // namespace ggmpl
