// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "treehash/finput.hpp"
#include "treehash/primitive.hpp"
#include "treehash/topology.hpp"

namespace treehash {

struct CostStep {
  int arity = 0;            // time units spent on this level
  std::uint64_t nodes = 0;  // processors active during the step
};

struct CostReport {
  int time_units = 0;
  std::vector<CostStep> per_step;
  std::uint64_t total_work = 0;
  std::uint64_t measured_calls = 0;
};

struct TreeJob {
  std::vector<std::uint8_t> message;
  HashParams params;
  ArityPlan plan;
  unsigned worker_budget = 1;
};

/// Padded block count for a message of byte_len bytes, and the plan the mode
/// will execute: the optimal plan for l >= 2, a single-node sentinel of
/// height 1 when everything fits in one block.
std::pair<std::uint64_t, ArityPlan> plan_for_message(std::uint64_t byte_len,
                                                     unsigned block_bits);

TreeJob make_tree_job(std::vector<std::uint8_t> message, HashParams params,
                      unsigned worker_budget = 1);

struct TreeHashResult {
  Block digest;
  CostReport report;
};

/// Level-synchronous parallel tree hash. Workers take contiguous node ranges
/// and write each chaining value exactly once; the digest does not depend on
/// worker_budget.
TreeHashResult tree_hash(const TreeJob& job, const PrecomputeCache* cache = nullptr);

/// Single-threaded reference executor for differential testing.
Block tree_hash_ref(std::span<const std::uint8_t> message, const HashParams& params);

/// Materialize every f-input the hash evaluates, chaining values included,
/// with child pointers and level/index coordinates.
FInputTree emit_f_input_tree(const TreeJob& job);

}  // namespace treehash
