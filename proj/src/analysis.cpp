// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#include "treehash/analysis.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "treehash/rng.hpp"
#include "treehash/topology.hpp"

namespace treehash {

namespace {

using u128 = unsigned __int128;

int least_exponent_pow2(std::uint64_t l) {
  int k = 0;
  u128 p = 1;
  while (p < l) {
    p <<= 1;
    ++k;
  }
  return k;
}

int least_exponent_pow3(u128 n) {
  int h = 0;
  u128 p = 1;
  while (p < n) {
    p *= 3;
    ++h;
  }
  return h;
}

}  // namespace

int binary_time(std::uint64_t l) {
  if (l < 2) throw std::domain_error("block count must be at least 2");
  return 2 * least_exponent_pow2(l);
}

Rational speedup_gain(std::uint64_t l) {
  int tb = binary_time(l);
  int to = oracle_min_time(l);
  std::int64_t num = 100 * static_cast<std::int64_t>(tb - to);
  std::int64_t den = to;
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

std::vector<SpeedupRow> speedup_sweep(std::uint64_t l_max) {
  if (l_max < 2) throw std::domain_error("sweep needs l_max >= 2");
  oracle_min_time(l_max);  // fill the memo in one pass
  std::vector<SpeedupRow> rows;
  rows.reserve(l_max - 1);
  for (std::uint64_t l = 2; l <= l_max; ++l)
    rows.push_back({l, binary_time(l), oracle_min_time(l), speedup_gain(l)});
  return rows;
}

CaseHistogram monte_carlo(const ParetoConfig& config) {
  if (!(config.rho > 1.0)) throw std::invalid_argument("shape must exceed 1");
  if (!(config.nu > 0.0)) throw std::invalid_argument("location must be positive");
  if (config.samples < 1) throw std::invalid_argument("need at least one sample");
  if (config.block_bytes < 1) throw std::invalid_argument("block bytes must be positive");

  SplitMix64 rng(config.seed);
  CaseHistogram hist;
  hist.samples = config.samples;
  double inv_rho = 1.0 / config.rho;
  for (std::uint64_t s = 0; s < config.samples; ++s) {
    double u = rng.next_unit();
    double byte_size = config.nu * std::pow(1.0 - u, -inv_rho);
    double blocks = std::ceil(byte_size / static_cast<double>(config.block_bytes));
    std::uint64_t l = blocks < 1.0 ? 1 : static_cast<std::uint64_t>(blocks);
    ++hist.counts[classify_plan_case(l) - 1];
  }
  auto share = [&](std::initializer_list<int> cases) {
    std::uint64_t total = 0;
    for (int c : cases) total += hist.counts[c - 1];
    return static_cast<double>(total) / static_cast<double>(config.samples);
  };
  hist.p3 = share({1, 5});
  hist.p4 = share({2, 3, 6, 9, 10});
  hist.p5 = share({4, 7, 8, 11});
  return hist;
}

TernaryComparison ternary_sign(int k, std::uint64_t u) {
  if (k < 2 || k > 64) throw std::domain_error("exponent out of range");
  u128 pow2 = static_cast<u128>(1) << k;
  if (u >= pow2) throw std::domain_error("offset must be below 2^k");
  TernaryComparison out;
  out.k = k;
  out.u = u;
  out.h2 = u == 0 ? k : k + 1;
  out.h3 = least_exponent_pow3(pow2 + u);
  int diff = 3 * out.h3 - 2 * out.h2;
  out.sign = diff < 0 ? -1 : diff > 0 ? 1 : 0;
  return out;
}

TernaryRow ternary_row_impl(int k) {
  std::uint64_t u_max = (static_cast<std::uint64_t>(1) << k) - 1;
  int first = ternary_sign(k, 1).sign;
  int last = ternary_sign(k, u_max).sign;
  TernaryRow row;
  row.k = k;
  if (first == 0 && last == 0) {
    row.type = TernaryRowType::AllZero;
    return row;
  }
  if (last < 0) {
    row.type = TernaryRowType::AllNegative;
    return row;
  }
  if (first >= 0) throw std::logic_error("unexpected sign at u = 1");
  // Largest u with negative sign; the sign is non-decreasing in u.
  std::uint64_t lo = 1, hi = u_max;
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (ternary_sign(k, mid).sign < 0)
      lo = mid;
    else
      hi = mid - 1;
  }
  row.threshold = lo;
  row.type = ternary_sign(k, lo + 1).sign > 0 ? TernaryRowType::NegThenPos
                                              : TernaryRowType::NegThenZero;
  return row;
}

TernaryRow ternary_threshold(int k) {
  if (k < 2 || k > 26) throw std::domain_error("row shapes are tabulated for k in 2..26");
  return ternary_row_impl(k);
}

const char* to_string(TernaryRowType t) {
  switch (t) {
    case TernaryRowType::AllZero: return "zero";
    case TernaryRowType::AllNegative: return "negative";
    case TernaryRowType::NegThenPos: return "neg_then_pos";
    case TernaryRowType::NegThenZero: return "neg_then_zero";
  }
  return "?";
}

}  // namespace treehash
