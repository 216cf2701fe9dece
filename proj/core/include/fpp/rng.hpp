#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace fpp {

// Counter-based randomness: every draw is a pure function of
// (seed, stream, counter), so edges can be sampled in any order.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash3(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
  std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  h = splitmix64(h ^ stream);
  return splitmix64(h ^ counter);
}

/// Uniform in [0, 1) with 53 bits of resolution.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t counter) {
  return static_cast<double>(hash3(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Derives a child seed; used for replica and company seed streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a,
                                    std::uint64_t b = 0) {
  return hash3(seed, 0xd1b54a32d192ed03ULL ^ a, b);
}

/// Standard normal via Box-Muller on two counter draws.
inline double counter_normal(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
  const double u1 = counter_uniform(seed, 2 * stream, counter);
  const double u2 = counter_uniform(seed, 2 * stream + 1, counter);
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace fpp
