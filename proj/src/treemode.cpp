// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#include "treehash/treemode.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <stdexcept>
#include <thread>

namespace treehash {

namespace {

// Append the 1 bit and zero-fill to a whole number of blocks. Byte messages
// keep everything byte-aligned: the pad bit is the top bit of the next byte.
std::vector<std::uint8_t> pad_message(std::span<const std::uint8_t> message,
                                      unsigned block_bits) {
  std::vector<std::uint8_t> out(message.begin(), message.end());
  out.push_back(0x80);
  std::size_t block_bytes = block_bits / 8;
  while (out.size() % block_bytes != 0) out.push_back(0);
  return out;
}

void parallel_for(std::uint64_t n, unsigned workers,
                  const std::function<void(std::uint64_t, std::uint64_t)>& body) {
  if (workers <= 1 || n <= 1) {
    body(0, n);
    return;
  }
  std::uint64_t used = std::min<std::uint64_t>(workers, n);
  std::uint64_t chunk = ceil_div(n, used);
  std::vector<std::thread> pool;
  pool.reserve(used);
  for (std::uint64_t w = 0; w < used; ++w) {
    std::uint64_t begin = w * chunk;
    std::uint64_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(body, begin, end);
  }
  for (auto& t : pool) t.join();
}

ArityPlan sentinel_plan() {
  ArityPlan plan;
  plan.block_count = 1;
  plan.arities = {1};
  return plan;
}

}  // namespace

std::pair<std::uint64_t, ArityPlan> plan_for_message(std::uint64_t byte_len,
                                                     unsigned block_bits) {
  std::uint64_t l = (8 * byte_len + 1 + block_bits - 1) / block_bits;
  if (l == 1) return {1, sentinel_plan()};
  return {l, optimal_plan(l)};
}

TreeJob make_tree_job(std::vector<std::uint8_t> message, HashParams params,
                      unsigned worker_budget) {
  validate_params(params);
  if (worker_budget < 1) throw std::invalid_argument("worker budget must be positive");
  TreeJob job;
  job.plan = plan_for_message(message.size(), params.block_bits).second;
  job.message = std::move(message);
  job.params = std::move(params);
  job.worker_budget = worker_budget;
  return job;
}

TreeHashResult tree_hash(const TreeJob& job, const PrecomputeCache* cache) {
  validate_params(job.params);
  if (job.worker_budget < 1) throw std::invalid_argument("worker budget must be positive");
  unsigned n = job.params.block_bits;
  std::size_t block_bytes = n / 8;
  auto [l, expected] = plan_for_message(job.message.size(), n);
  if (!(job.plan == expected))
    throw std::invalid_argument("job plan does not match the message length");

  std::atomic<std::uint64_t> calls{0};
  TreeHashResult result;
  result.report.time_units = job.plan.time();
  result.report.total_work = level_profile(l, job.plan).total_work_truncated;

  std::vector<std::uint8_t> current = pad_message(job.message, n);
  int h = job.plan.height();
  if (h == 1) {
    result.digest = f_kind(job.params, NodeKind::SingleNode,
                           BitString::from_bytes(current), cache, &calls);
    result.report.per_step.push_back({job.plan.arities.front(), 1});
    result.report.measured_calls = calls.load();
    return result;
  }

  std::uint64_t cur_blocks = l;
  for (int k = 1; k <= h; ++k) {
    int a = job.plan.arities[k - 1];
    std::uint64_t nodes = ceil_div(cur_blocks, static_cast<std::uint64_t>(a));
    result.report.per_step.push_back({a, nodes});
    NodeKind kind = k == 1 ? NodeKind::BaseLevel
                   : k == h ? NodeKind::Final
                            : NodeKind::Inner;
    std::vector<std::uint8_t> next(nodes * block_bytes);
    parallel_for(nodes, job.worker_budget, [&](std::uint64_t begin, std::uint64_t end) {
      for (std::uint64_t j = begin; j < end; ++j) {
        std::uint64_t first = j * a;
        std::uint64_t width = std::min<std::uint64_t>(a, cur_blocks - first);
        auto chunk = std::span<const std::uint8_t>(current)
                         .subspan(first * block_bytes, width * block_bytes);
        Block digest =
            f_kind(job.params, kind, BitString::from_bytes(chunk), cache, &calls);
        std::copy(digest.begin(), digest.end(), next.begin() + j * block_bytes);
      }
    });
    current = std::move(next);
    cur_blocks = nodes;
  }
  result.digest.assign(current.begin(), current.end());
  result.report.measured_calls = calls.load();
  return result;
}

Block tree_hash_ref(std::span<const std::uint8_t> message, const HashParams& params) {
  validate_params(params);
  unsigned n = params.block_bits;
  std::size_t block_bytes = n / 8;
  auto [l, plan] = plan_for_message(message.size(), n);
  std::vector<std::uint8_t> current = pad_message(message, n);

  if (plan.height() == 1) {
    BitString encoded = kind_code(NodeKind::SingleNode, n);
    encoded.append(BitString::from_bytes(current));
    return f_inner(params, encoded).digest;
  }

  for (int k = 1; k <= plan.height(); ++k) {
    int a = plan.arities[k - 1];
    NodeKind kind = k == 1 ? NodeKind::BaseLevel
                   : k == plan.height() ? NodeKind::Final
                                        : NodeKind::Inner;
    std::vector<std::uint8_t> next;
    std::size_t consumed = 0;
    while (consumed < current.size()) {
      std::size_t take = std::min(current.size() - consumed,
                                  static_cast<std::size_t>(a) * block_bytes);
      BitString encoded = kind_code(kind, n);
      encoded.append(BitString::from_bytes(
          std::span<const std::uint8_t>(current).subspan(consumed, take)));
      Block digest = f_inner(params, encoded).digest;
      next.insert(next.end(), digest.begin(), digest.end());
      consumed += take;
    }
    current = std::move(next);
  }
  return Block(current.begin(), current.end());
}

FInputTree emit_f_input_tree(const TreeJob& job) {
  validate_params(job.params);
  unsigned n = job.params.block_bits;
  std::size_t block_bytes = n / 8;
  auto [l, expected] = plan_for_message(job.message.size(), n);
  if (!(job.plan == expected))
    throw std::invalid_argument("job plan does not match the message length");

  FInputTree tree;
  tree.block_bits = n;
  std::vector<std::uint8_t> current = pad_message(job.message, n);
  int h = job.plan.height();

  if (h == 1) {
    FInput node;
    node.level = 1;
    node.index = 0;
    node.kind = NodeKind::SingleNode;
    node.payload = BitString::from_bytes(current);
    tree.nodes.push_back(std::move(node));
    tree.root = 0;
    return tree;
  }

  std::uint64_t cur_blocks = l;
  std::uint32_t prev_level_base = 0;
  for (int k = 1; k <= h; ++k) {
    int a = job.plan.arities[k - 1];
    std::uint64_t count = ceil_div(cur_blocks, static_cast<std::uint64_t>(a));
    NodeKind kind = k == 1 ? NodeKind::BaseLevel
                   : k == h ? NodeKind::Final
                            : NodeKind::Inner;
    std::uint32_t level_base = static_cast<std::uint32_t>(tree.nodes.size());
    std::vector<std::uint8_t> next(count * block_bytes);
    for (std::uint64_t j = 0; j < count; ++j) {
      std::uint64_t first = j * a;
      std::uint64_t width = std::min<std::uint64_t>(a, cur_blocks - first);
      auto chunk = std::span<const std::uint8_t>(current)
                       .subspan(first * block_bytes, width * block_bytes);
      FInput node;
      node.level = static_cast<std::uint32_t>(k);
      node.index = static_cast<std::uint32_t>(j);
      node.kind = kind;
      node.payload = BitString::from_bytes(chunk);
      if (k > 1) {
        for (std::uint64_t t = 0; t < width; ++t)
          node.children.push_back(prev_level_base + static_cast<std::uint32_t>(first + t));
      }
      Block digest = f_kind(job.params, kind, node.payload);
      std::copy(digest.begin(), digest.end(), next.begin() + j * block_bytes);
      tree.nodes.push_back(std::move(node));
    }
    prev_level_base = level_base;
    current = std::move(next);
    cur_blocks = count;
  }
  tree.root = static_cast<std::uint32_t>(tree.nodes.size() - 1);
  return tree;
}

}  // namespace treehash
