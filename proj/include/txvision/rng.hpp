// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace txvision {

// std::mt19937_64 output is pinned by the standard, but the distribution
// adaptors are not; these helpers keep every sampled stream bit-reproducible
// across standard libraries.

inline double uniform_real(std::mt19937_64& rng) {
  // (k + 0.5) * 2^-53 lies strictly inside (0, 1); safe under log().
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  return n == 0 ? 0 : rng() % n;
}

/// Inclusive range [lo, hi].
inline std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo,
                                std::int64_t hi) {
  return lo + static_cast<std::int64_t>(
                  uniform_index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

inline double normal(std::mt19937_64& rng) {
  const double u1 = uniform_real(rng);
  const double u2 = uniform_real(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Normal(0, sigma) resampled until it lands within 2 sigma.
inline double truncated_normal(std::mt19937_64& rng, double sigma) {
  for (;;) {
    const double z = normal(rng);
    if (z >= -2.0 && z <= 2.0) return z * sigma;
  }
}

template <typename T>
void shuffle_in_place(std::mt19937_64& rng, std::vector<T>& v) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

}  // namespace txvision
