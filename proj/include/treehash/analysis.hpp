// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace treehash {

/// Running time of a truncated binary tree with leaves at equal depth.
int binary_time(std::uint64_t l);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
};

/// 100 * (binary_time / oracle_min_time - 1), exact.
Rational speedup_gain(std::uint64_t l);

struct SpeedupRow {
  std::uint64_t l;
  int binary_time;
  int optimal_time;
  Rational gain;
};

std::vector<SpeedupRow> speedup_sweep(std::uint64_t l_max);

struct ParetoConfig {
  double rho = 1.5;
  double nu = 1e4 * (1.5 - 1.0) / 1.5;  // bytes
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 0;
  std::uint64_t block_bytes = 32;
};

struct CaseHistogram {
  std::array<std::uint64_t, 11> counts{};
  std::uint64_t samples = 0;
  // Relative frequencies of the ceil(l/3), ceil(l/4), ceil(l/5) processor
  // classes, summing to 1.
  double p3 = 0, p4 = 0, p5 = 0;
};

/// Draw byte sizes from the Pareto model by inverse CDF, convert to block
/// counts, and classify each into exactly one of the eleven interval cases.
CaseHistogram monte_carlo(const ParetoConfig& config);

struct TernaryComparison {
  int k = 0;
  std::uint64_t u = 0;
  int h2 = 0;    // perfect binary height for 2^k + u leaves
  int h3 = 0;    // perfect ternary height
  int sign = 0;  // sign of 3*h3 - 2*h2
};

/// Exact comparison of perfect binary vs ternary running times for
/// l = 2^k + u leaves; all comparisons on integer powers, no logarithms.
TernaryComparison ternary_sign(int k, std::uint64_t u);

enum class TernaryRowType { AllZero, AllNegative, NegThenPos, NegThenZero };

struct TernaryRow {
  int k = 0;
  TernaryRowType type = TernaryRowType::AllZero;
  std::optional<std::uint64_t> threshold;  // largest u with negative sign
};

/// Row shape over u in 1..2^k-1, found by dichotomy on the monotone sign.
TernaryRow ternary_threshold(int k);

const char* to_string(TernaryRowType t);

}  // namespace treehash
