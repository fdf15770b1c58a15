// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace treehash {

/// Ordered schedule of level arities for a hash tree with all leaves at the
/// same depth. Arities are stored in non-increasing order, base level first,
/// root last. Entries are in 2..5; the value 1 appears only in the one-block
/// sentinel plan used for messages that pad to a single block.
struct ArityPlan {
  std::uint64_t block_count = 0;
  std::vector<int> arities;
  /// Which of the eleven closed-form shapes produced this plan, when known.
  std::optional<int> case_id;

  int height() const { return static_cast<int>(arities.size()); }
  int time() const;
  bool covers(std::uint64_t l) const;

  friend bool operator==(const ArityPlan& a, const ArityPlan& b) {
    return a.block_count == b.block_count && a.arities == b.arities;
  }
};

/// Per-level node counts of the truncated tree for a plan, plus both total
/// work figures (truncated tree and the perfect tree of the same arities).
struct LevelProfile {
  std::vector<std::uint64_t> node_counts;  // node_counts.back() == 1
  std::uint64_t processors = 0;            // node_counts.front()
  std::uint64_t total_work_truncated = 0;
  std::uint64_t total_work_perfect = 0;
};

enum class ProcessorClass { L3, L4, L5 };

struct ProcessorCount {
  std::uint64_t count = 0;
  ProcessorClass cls = ProcessorClass::L3;
};

enum class WidenMethod { Rebuild, Transfer };

inline std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
  return (a + b - 1) / b;
}

/// Least i with 3^i >= l, together with 3^i.
std::pair<int, unsigned __int128> pow3_at_least(std::uint64_t l);

/// Time-minimal plan built from levels of arity 3 and 2 only: as many 3s as
/// possible, then at most two 2s. Exact integer arithmetic throughout.
ArityPlan min_time_plan(std::uint64_t l);

/// Band of l among the three intervals that decide how many levels of arity 2
/// the time-minimal plan carries. Returns (i, band) with band in 1..3 and
/// band-1 == number of 2s in min_time_plan(l).
std::pair<int, int> min_time_band(std::uint64_t l);

/// The unique time-minimal plan whose arity counts are lexicographically
/// maximal in (fives, fours, threes). Closed form for l >= 32 (the eleven
/// interval cases); exhaustive search below that.
ArityPlan optimal_plan(std::uint64_t l);

/// Which of the eleven validity intervals contains l. Defined for any l >= 1;
/// the associated multisets are meaningful for l >= 32.
int classify_plan_case(std::uint64_t l);

/// Interval membership with both bounds evaluated, for partition checks.
bool plan_case_contains(int case_id, std::uint64_t l);

/// (fives, fours, threes, twos) for a case at exponent i.
struct ArityCounts { int fives, fours, threes, twos; };
ArityCounts plan_case_counts(int case_id, int i);

/// Base-level processor count ceil(l/x1) for the optimal plan, classified as
/// ceil(l/3), ceil(l/4) or ceil(l/5) by an interval test independent of x1.
ProcessorCount processor_count(std::uint64_t l);
ProcessorClass processor_class_for_case(int case_id);

/// Widen the base arity of a time-minimal plan without changing its time.
/// Rebuild: try a base of 5 then 4 and re-derive the tail from the residual
/// block count. Transfer: iteratively move one unit from the second arity to
/// the first, merging pairs of 2s into 4s along the way.
ArityPlan widen_base(std::uint64_t l, const ArityPlan& plan, WidenMethod method);

/// Apply widen_base level by level on successive residual lengths, producing
/// a plan whose every level is as wide as its position allows. Agrees with
/// optimal_plan for every l >= 32.
ArityPlan widen_all(std::uint64_t l, WidenMethod method = WidenMethod::Transfer);

/// Exact minimum of the arity sum over all schedules reaching a single root,
/// by memoized recursion over residual lengths. The search space is not
/// capped: every arity from 2 to l is considered.
int oracle_min_time(std::uint64_t l);

/// Exhaustive search for the plan optimal_plan must return: all descending
/// sequences with entries up to min(l, 7), sum equal to oracle_min_time(l)
/// and product covering l, maximized lexicographically by (fives, fours,
/// threes). Throws if a valid candidate uses an arity above 5.
ArityPlan oracle_lex_plan(std::uint64_t l);

/// Node counts and total work of the truncated tree for (l, plan).
LevelProfile level_profile(std::uint64_t l, const ArityPlan& plan);

}  // namespace treehash
