// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#include "treehash/topology.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>

namespace treehash {

namespace {

using u128 = unsigned __int128;

void require_block_count(std::uint64_t l) {
  if (l < 2) throw std::domain_error("block count must be at least 2");
}

u128 pow_int(int base, int exp) {
  u128 p = 1;
  for (int j = 0; j < exp; ++j) p *= base;
  return p;
}

// Fractions t_0..t_11 bounding the eleven intervals: case c holds when
// t_{c-1} * l <= 3^i < t_c * l.
constexpr int kBoundNum[12] = {1, 9, 81, 27, 3, 27, 9, 81, 9, 81, 27, 3};
constexpr int kBoundDen[12] = {1, 8, 64, 20, 2, 16, 5, 40, 4, 32, 10, 1};

ArityPlan plan_from_counts(std::uint64_t l, const ArityCounts& c) {
  ArityPlan plan;
  plan.block_count = l;
  plan.arities.reserve(c.fives + c.fours + c.threes + c.twos);
  plan.arities.insert(plan.arities.end(), c.fives, 5);
  plan.arities.insert(plan.arities.end(), c.fours, 4);
  plan.arities.insert(plan.arities.end(), c.threes, 3);
  plan.arities.insert(plan.arities.end(), c.twos, 2);
  return plan;
}

// Internal variant of min_time_plan that admits l == 1 (empty plan), used by
// the widening recursions on residual lengths.
ArityPlan min_time_plan_any(std::uint64_t l) {
  ArityPlan plan;
  plan.block_count = l;
  if (l == 1) return plan;
  auto [i, p3] = pow3_at_least(l);
  int x = 0;
  for (int cand = std::min(2, i); cand >= 0; --cand) {
    u128 v = pow_int(3, i - cand) << cand;
    if (v >= l) {
      x = cand;
      break;
    }
  }
  plan.arities.assign(static_cast<std::size_t>(i - x), 3);
  plan.arities.insert(plan.arities.end(), x, 2);
  return plan;
}

void validate_minimal_plan(std::uint64_t l, const ArityPlan& plan) {
  require_block_count(l);
  if (plan.arities.empty()) throw std::invalid_argument("empty plan");
  for (std::size_t j = 0; j < plan.arities.size(); ++j) {
    int a = plan.arities[j];
    if (a < 2 || a > 5) throw std::invalid_argument("arity out of range");
    if (j > 0 && a > plan.arities[j - 1])
      throw std::invalid_argument("plan not descending");
  }
  if (!plan.covers(l)) throw std::invalid_argument("plan does not cover l");
  if (plan.time() != min_time_plan_any(l).time())
    throw std::invalid_argument("plan time is not minimal for l");
}

// Replace each pair of 2s by a 4 and restore descending order.
void merge_pairs_of_twos(std::vector<int>& a) {
  int twos = static_cast<int>(std::count(a.begin(), a.end(), 2));
  if (twos >= 2) {
    a.erase(std::remove(a.begin(), a.end(), 2), a.end());
    a.insert(a.end(), twos / 2, 4);
    if (twos % 2) a.push_back(2);
  }
  std::sort(a.begin(), a.end(), std::greater<int>());
}

ArityPlan widen_base_rebuild(std::uint64_t l, const ArityPlan& plan) {
  int t = plan.time();
  for (int base : {5, 4}) {
    std::uint64_t residual = ceil_div(l, static_cast<std::uint64_t>(base));
    ArityPlan sub = min_time_plan_any(residual);
    if (sub.time() + base == t) {
      ArityPlan out;
      out.block_count = l;
      out.arities.reserve(sub.arities.size() + 1);
      out.arities.push_back(base);
      out.arities.insert(out.arities.end(), sub.arities.begin(),
                         sub.arities.end());
      return out;
    }
  }
  ArityPlan out = plan;
  out.block_count = l;
  out.case_id.reset();
  return out;
}

ArityPlan widen_base_transfer(std::uint64_t l, const ArityPlan& plan) {
  std::vector<int> a = plan.arities;
  merge_pairs_of_twos(a);
  for (int pass = 0; pass < 2; ++pass) {
    if (a.size() == 1 || a[0] == 5) break;
    if (a.size() == 2) {
      int x1 = a[0], x2 = a[1];
      if (x1 >= 3 && x2 >= 3) {
        if (static_cast<u128>(x1 + 1) * (x2 - 1) >= l) {
          a = {x1 + 1, x2 - 1};
          continue;
        }
        break;
      }
      if (x1 == 3 && x2 == 2 && 5 >= l) a = {5};
      break;
    }
    // |a| >= 3 with at most one 2, so a[0] >= 3, a[1] >= 3, a[2] >= 2.
    u128 prod = static_cast<u128>(a[0] + 1) * (a[1] - 1);
    for (std::size_t j = 2; j < a.size(); ++j) prod *= a[j];
    if (prod < l) break;
    a[0] += 1;
    a[1] -= 1;
    merge_pairs_of_twos(a);
    if (a[0] == 5) break;
  }
  std::sort(a.begin(), a.end(), std::greater<int>());
  ArityPlan out;
  out.block_count = l;
  out.arities = std::move(a);
  return out;
}

}  // namespace

int ArityPlan::time() const {
  int s = 0;
  for (int a : arities) s += a;
  return s;
}

bool ArityPlan::covers(std::uint64_t l) const {
  u128 p = 1;
  for (int a : arities) {
    p *= static_cast<unsigned>(a);
    if (p >= l) return true;
  }
  return p >= l;
}

std::pair<int, unsigned __int128> pow3_at_least(std::uint64_t l) {
  int i = 0;
  u128 p = 1;
  while (p < l) {
    p *= 3;
    ++i;
  }
  return {i, p};
}

ArityPlan min_time_plan(std::uint64_t l) {
  require_block_count(l);
  return min_time_plan_any(l);
}

std::pair<int, int> min_time_band(std::uint64_t l) {
  require_block_count(l);
  auto [i, p] = pow3_at_least(l);
  u128 L = l;
  int band;
  if (2 * p < 3 * L)
    band = 1;
  else if (4 * p < 9 * L)
    band = 2;
  else
    band = 3;
  return {i, band};
}

int classify_plan_case(std::uint64_t l) {
  auto [i, p] = pow3_at_least(l);
  u128 L = l;
  for (int c = 1; c <= 10; ++c) {
    if (static_cast<u128>(kBoundDen[c]) * p < static_cast<u128>(kBoundNum[c]) * L)
      return c;
  }
  return 11;
}

bool plan_case_contains(int case_id, std::uint64_t l) {
  auto [i, p] = pow3_at_least(l);
  u128 L = l;
  u128 lo_num = static_cast<u128>(kBoundNum[case_id - 1]) * L;
  u128 lo = static_cast<u128>(kBoundDen[case_id - 1]) * p;
  u128 hi_num = static_cast<u128>(kBoundNum[case_id]) * L;
  u128 hi = static_cast<u128>(kBoundDen[case_id]) * p;
  return lo >= lo_num && hi < hi_num;
}

ArityCounts plan_case_counts(int case_id, int i) {
  switch (case_id) {
    case 1:  return {0, 0, i, 0};
    case 2:  return {0, 1, i - 2, 1};
    case 3:  return {0, 3, i - 4, 0};
    case 4:  return {1, 1, i - 3, 0};
    case 5:  return {0, 0, i - 1, 1};
    case 6:  return {0, 2, i - 3, 0};
    case 7:  return {1, 0, i - 2, 0};
    case 8:  return {1, 1, i - 4, 1};
    case 9:  return {0, 1, i - 2, 0};
    case 10: return {0, 2, i - 4, 1};
    case 11: return {1, 0, i - 3, 1};
    default: throw std::invalid_argument("case id out of range");
  }
}

ArityPlan optimal_plan(std::uint64_t l) {
  require_block_count(l);
  if (l < 32) return oracle_lex_plan(l);
  int c = classify_plan_case(l);
  auto [i, p3] = pow3_at_least(l);
  ArityPlan plan = plan_from_counts(l, plan_case_counts(c, i));
  plan.case_id = c;
  return plan;
}

ProcessorClass processor_class_for_case(int case_id) {
  switch (case_id) {
    case 1: case 5:
      return ProcessorClass::L3;
    case 2: case 3: case 6: case 9: case 10:
      return ProcessorClass::L4;
    default:
      return ProcessorClass::L5;
  }
}

ProcessorCount processor_count(std::uint64_t l) {
  require_block_count(l);
  ArityPlan plan = optimal_plan(l);
  ProcessorCount out;
  out.count = ceil_div(l, static_cast<std::uint64_t>(plan.arities.front()));
  out.cls = processor_class_for_case(classify_plan_case(l));
  return out;
}

ArityPlan widen_base(std::uint64_t l, const ArityPlan& plan, WidenMethod method) {
  validate_minimal_plan(l, plan);
  return method == WidenMethod::Rebuild ? widen_base_rebuild(l, plan)
                                        : widen_base_transfer(l, plan);
}

ArityPlan widen_all(std::uint64_t l, WidenMethod method) {
  require_block_count(l);
  auto apply = [method](std::uint64_t ll, const ArityPlan& p) {
    return method == WidenMethod::Rebuild ? widen_base_rebuild(ll, p)
                                          : widen_base_transfer(ll, p);
  };
  std::vector<int> result;
  std::uint64_t cur_l = l;
  ArityPlan cur = apply(l, min_time_plan(l));
  while (!cur.arities.empty()) {
    result.push_back(cur.arities.front());
    std::vector<int> tail(cur.arities.begin() + 1, cur.arities.end());
    if (tail.empty()) break;
    if (std::count(result.begin(), result.end(), 4) >= 6) {
      // Six levels of arity 4 is the hard ceiling; nothing further to widen.
      result.insert(result.end(), tail.begin(), tail.end());
      break;
    }
    cur_l = ceil_div(cur_l, static_cast<std::uint64_t>(cur.arities.front()));
    ArityPlan tp;
    tp.block_count = cur_l;
    tp.arities = tail;
    ArityPlan next = apply(cur_l, tp);
    if (next.arities == tail) {
      result.insert(result.end(), tail.begin(), tail.end());
      break;
    }
    cur = std::move(next);
  }
  ArityPlan out;
  out.block_count = l;
  out.arities = std::move(result);
  return out;
}

int oracle_min_time(std::uint64_t l) {
  if (l < 1) throw std::domain_error("block count must be at least 1");
  static std::mutex mu;
  static std::vector<int> memo = {0, 0};  // memo[1] == 0
  std::lock_guard<std::mutex> guard(mu);
  while (memo.size() <= l) {
    std::uint64_t v = memo.size();
    int best = v <= static_cast<std::uint64_t>(INT32_MAX) ? static_cast<int>(v)
                                                          : INT32_MAX;
    std::uint64_t a = 2;
    while (a < v) {
      std::uint64_t q = ceil_div(v, a);
      if (q == 1) break;
      best = std::min<std::int64_t>(best, static_cast<std::int64_t>(a) + memo[q]);
      // Skip to the first a whose residual drops below q.
      a = (v - 1) / (q - 1) + 1;
    }
    memo.push_back(best);
  }
  return memo[l];
}

ArityPlan oracle_lex_plan(std::uint64_t l) {
  require_block_count(l);
  int target = oracle_min_time(l);
  int max_arity = static_cast<int>(std::min<std::uint64_t>(l, 7));

  std::vector<int> current;
  std::vector<int> best;
  std::array<int, 3> best_key = {-1, -1, -1};

  auto key_of = [](const std::vector<int>& seq) {
    std::array<int, 3> k = {0, 0, 0};
    for (int a : seq) {
      if (a == 5) ++k[0];
      else if (a == 4) ++k[1];
      else if (a == 3) ++k[2];
    }
    return k;
  };

  auto search = [&](auto&& self, int prev, int remaining, u128 product) -> void {
    if (remaining == 0) {
      if (product < l) return;
      for (int a : current) {
        if (a > 5)
          throw std::logic_error(
              "time-minimal schedule with arity above 5 found");
      }
      auto k = key_of(current);
      if (k > best_key) {
        best_key = k;
        best = current;
      }
      return;
    }
    for (int a = std::min(prev, remaining); a >= 2; --a) {
      int rest = remaining - a;
      if (rest == 1) continue;  // no arity-1 levels
      current.push_back(a);
      self(self, a, rest, product * static_cast<unsigned>(a));
      current.pop_back();
    }
  };
  search(search, max_arity, target, 1);

  if (best.empty()) throw std::logic_error("no time-minimal schedule found");
  ArityPlan plan;
  plan.block_count = l;
  plan.arities = std::move(best);
  return plan;
}

LevelProfile level_profile(std::uint64_t l, const ArityPlan& plan) {
  if (l < 1) throw std::invalid_argument("block count must be positive");
  if (plan.arities.empty()) throw std::invalid_argument("empty plan");
  if (!plan.covers(l)) throw std::invalid_argument("plan does not cover l");
  LevelProfile profile;
  std::uint64_t cur = l;
  for (int a : plan.arities) {
    cur = ceil_div(cur, static_cast<std::uint64_t>(a));
    profile.node_counts.push_back(cur);
  }
  profile.processors = profile.node_counts.front();
  profile.total_work_truncated = l;
  for (std::size_t j = 0; j + 1 < profile.node_counts.size(); ++j)
    profile.total_work_truncated += profile.node_counts[j];
  u128 prod = 1;
  u128 sum = 0;
  for (auto it = plan.arities.rbegin(); it != plan.arities.rend(); ++it) {
    prod *= static_cast<unsigned>(*it);
    sum += prod;
  }
  profile.total_work_perfect = static_cast<std::uint64_t>(sum);
  return profile;
}

}  // namespace treehash
