#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace acil::rng {

// Counter-based generator: every draw is a pure function of (seed, counter),
// so results do not depend on the standard library's distribution code.

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t bits(std::uint64_t seed, std::uint64_t counter) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(counter + 0x632BE59BD9B4E019ULL));
}

/// Uniform in the open interval (0, 1).
inline double uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
  return (static_cast<double>(bits(seed, counter) >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on two independent counter draws.
inline double normal(std::uint64_t seed, std::uint64_t counter) noexcept {
  const double u1 = uniform(seed, 2 * counter);
  const double u2 = uniform(seed, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Uniform integer in [0, bound). bound must be > 0.
inline std::uint64_t below(std::uint64_t seed, std::uint64_t counter, std::uint64_t bound) noexcept {
  // Multiply-shift; bias is < bound / 2^64 and irrelevant at our sizes.
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(bits(seed, counter)) * bound) >> 64);
}

/// Fisher-Yates shuffle driven by the counter generator.
template <typename T>
void shuffle(std::span<T> items, std::uint64_t seed) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(below(seed, i, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace acil::rng
