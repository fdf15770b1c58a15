// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace treehash {

/// Counter-mix generator (splitmix64 constants). Fixed here so sampled
/// histograms are reproducible bit-exactly from a seed.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 0) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 bits of precision.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace treehash
