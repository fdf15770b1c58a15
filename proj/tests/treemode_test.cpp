// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "treehash/rng.hpp"
#include "treehash/treemode.hpp"

using namespace treehash;

namespace {

std::vector<std::uint8_t> random_message(SplitMix64& rng, std::size_t len) {
  std::vector<std::uint8_t> m(len);
  for (auto& b : m) b = static_cast<std::uint8_t>(rng.next());
  return m;
}

std::vector<std::uint8_t> message_of_blocks(std::uint64_t l, unsigned block_bits,
                                            SplitMix64& rng) {
  // One byte short of l blocks, so the pad bit lands in the last block.
  return random_message(rng, l * block_bits / 8 - 1);
}

}  // namespace

TEST_CASE("message planning counts padded blocks") {
  auto [l0, p0] = plan_for_message(0, 256);
  CHECK(l0 == 1);
  CHECK(p0.arities == std::vector<int>{1});
  auto [l20, p20] = plan_for_message(32 * 20 - 1, 256);
  CHECK(l20 == 20);
  CHECK(p20.arities == std::vector<int>{5, 4});
  auto [l32, p32] = plan_for_message(32 * 20, 256);
  CHECK(l32 == 21);  // the pad bit overflows into a fresh block
  auto [lbig, pbig] = plan_for_message(1000000, 256);
  CHECK(lbig == (8u * 1000000 + 1 + 255) / 256);
  CHECK(pbig.arities == oracle_lex_plan(lbig).arities);
}

TEST_CASE("single-block messages hash through the single-node kind") {
  HashParams params = make_params();
  PrecomputeCache cache = PrecomputeCache::build(params);
  for (std::size_t len : {0u, 1u, 31u}) {
    SplitMix64 rng(len);
    auto message = random_message(rng, len);
    TreeJob job = make_tree_job(message, params, 4);
    auto result = tree_hash(job, &cache);
    std::vector<std::uint8_t> padded = message;
    padded.push_back(0x80);
    padded.resize(32, 0);
    CHECK(result.digest ==
          f_kind(params, NodeKind::SingleNode, BitString::from_bytes(padded)));
    CHECK(result.report.per_step.size() == 1);
    CHECK(result.digest == tree_hash_ref(message, params));
  }
}

TEST_CASE("digest does not depend on the worker budget") {
  HashParams params = make_params();
  PrecomputeCache cache = PrecomputeCache::build(params);
  SplitMix64 rng(97);
  for (int trial = 0; trial < 100; ++trial) {
    auto message = random_message(rng, rng.next() % 4097);
    Block reference = tree_hash_ref(message, params);
    for (unsigned workers : {1u, 8u}) {
      TreeJob job = make_tree_job(message, params, workers);
      CHECK(tree_hash(job, &cache).digest == reference);
    }
  }
}

TEST_CASE("reference executor is stable across invocations") {
  HashParams params = make_params();
  SplitMix64 rng(101);
  auto message = random_message(rng, 2048);
  CHECK(tree_hash_ref(message, params) == tree_hash_ref(message, params));
}

TEST_CASE("warm-cache compression calls equal the total work") {
  HashParams params = make_params();
  PrecomputeCache cache = PrecomputeCache::build(params);
  SplitMix64 rng(103);
  for (std::uint64_t l : {6ull, 20ull, 95ull}) {
    auto message = message_of_blocks(l, params.block_bits, rng);
    TreeJob job = make_tree_job(message, params, 3);
    auto result = tree_hash(job, &cache);
    auto profile = level_profile(l, job.plan);
    CHECK(result.report.total_work == profile.total_work_truncated);
    CHECK(result.report.measured_calls == profile.total_work_truncated);
    CHECK(result.report.time_units == job.plan.time());
  }
}

TEST_CASE("cost report mirrors the level profile") {
  HashParams params = make_params();
  PrecomputeCache cache = PrecomputeCache::build(params);
  SplitMix64 rng(107);
  for (std::uint64_t l : {7ull, 33ull, 260ull}) {
    auto message = message_of_blocks(l, params.block_bits, rng);
    TreeJob job = make_tree_job(message, params, 2);
    auto result = tree_hash(job, &cache);
    auto profile = level_profile(l, job.plan);
    REQUIRE(result.report.per_step.size() == profile.node_counts.size());
    int total_time = 0;
    for (std::size_t k = 0; k < profile.node_counts.size(); ++k) {
      CHECK(result.report.per_step[k].nodes == profile.node_counts[k]);
      CHECK(result.report.per_step[k].nodes <= result.report.per_step.front().nodes);
      total_time += result.report.per_step[k].arity;
    }
    CHECK(total_time == result.report.time_units);
    CHECK(result.report.per_step.front().nodes == processor_count(l).count);
  }
}

TEST_CASE("digests are independent of the cache flag") {
  HashParams cached = make_params(256, true);
  HashParams uncached = make_params(256, false);
  PrecomputeCache cache = PrecomputeCache::build(cached);
  SplitMix64 rng(109);
  for (int trial = 0; trial < 20; ++trial) {
    auto message = random_message(rng, rng.next() % 2000);
    CHECK(tree_hash(make_tree_job(message, cached, 2), &cache).digest ==
          tree_hash(make_tree_job(message, uncached, 2), nullptr).digest);
  }
}

TEST_CASE("the pinned one-KiB vector digest is stable") {
  std::vector<std::uint8_t> message;
  const char* pattern = "0123456789abcdef";
  for (int rep = 0; rep < 64; ++rep)
    message.insert(message.end(), pattern, pattern + 16);
  REQUIRE(message.size() == 1024);
  Block digest = tree_hash_ref(message, make_params());
  CHECK(BitString::from_bytes(digest).to_hex() ==
        "ae62f76dbd7f11674616b2d4d6a79a0f3c1247a2e4e1c205c17de68b6d6eafca");
}

TEST_CASE("mismatched plans are rejected") {
  HashParams params = make_params();
  SplitMix64 rng(113);
  TreeJob job = make_tree_job(random_message(rng, 500), params, 1);
  job.plan.arities = {3, 3, 3};
  CHECK_THROWS_AS(tree_hash(job, nullptr), std::invalid_argument);
}

TEST_CASE("emitted f-input trees mirror the executed topology") {
  HashParams params = make_params();
  SplitMix64 rng(127);
  for (std::uint64_t l : {2ull, 5ull, 6ull, 10ull, 20ull, 95ull}) {
    auto message = message_of_blocks(l, params.block_bits, rng);
    TreeJob job = make_tree_job(message, params, 1);
    FInputTree tree = emit_f_input_tree(job);
    auto profile = level_profile(l, job.plan);
    std::uint64_t expected_nodes = 0;
    for (auto c : profile.node_counts) expected_nodes += c;
    CHECK(tree.nodes.size() == expected_nodes);
    const FInput& root = tree.nodes[tree.root];
    if (job.plan.height() == 1) {
      CHECK(root.kind == NodeKind::SingleNode);
    } else {
      CHECK(root.kind == NodeKind::Final);
      // Rightmost base node width is what remains after the full nodes.
      std::uint64_t a1 = job.plan.arities.front();
      std::uint64_t l1 = profile.node_counts.front();
      const FInput& last_base = tree.nodes[l1 - 1];
      CHECK(last_base.payload.size() ==
            (l - a1 * (l1 - 1)) * params.block_bits);
    }
    // Upper payloads are the concatenated digests of their children.
    for (const FInput& node : tree.nodes) {
      if (node.level == 1) {
        CHECK(node.children.empty());
        continue;
      }
      BitString expected;
      for (std::uint32_t child : node.children) {
        const FInput& c = tree.nodes[child];
        expected.append(BitString::from_bytes(f_kind(params, c.kind, c.payload)));
      }
      CHECK(node.payload == expected);
    }
  }
}
