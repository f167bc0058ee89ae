#pragma once

// Seeded random streams.
//
// Every consumer draws from its own stream, keyed by (seed, purpose tag).
// The key is hashed with FNV-1a and mixed with SplitMix64 into the seed of a
// std::mt19937_64, whose output sequence is fixed by the C++ standard. All
// conversions to doubles and bounded integers are done here rather than with
// <random> distributions, whose algorithms vary between standard libraries.

#include <cstdint>
#include <random>
#include <string_view>

namespace kuramoto {

namespace detail {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

}  // namespace detail

namespace stream {
inline constexpr std::string_view erdos_renyi = "graph.erdos_renyi";
inline constexpr std::string_view watts_strogatz = "graph.watts_strogatz";
inline constexpr std::string_view initial_phases = "dynamics.initial_phases";
}  // namespace stream

class Rng {
public:
  Rng(std::uint64_t seed, std::string_view purpose)
      : engine_(detail::splitmix64(detail::splitmix64(seed) ^ detail::fnv1a(purpose))) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform integer in [0, bound), bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace kuramoto
