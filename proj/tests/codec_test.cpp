// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>

#include "treehash/codec.hpp"
#include "treehash/rng.hpp"
#include "treehash/treemode.hpp"

using namespace treehash;

namespace {

HashParams params() { return make_params(); }

std::vector<std::uint8_t> random_message(SplitMix64& rng, std::size_t len) {
  std::vector<std::uint8_t> m(len);
  for (auto& b : m) b = static_cast<std::uint8_t>(rng.next());
  return m;
}

FInputTree honest_tree(std::uint64_t l, std::uint64_t salt = 0) {
  SplitMix64 rng(l * 1000003 + salt);
  auto message = random_message(rng, l * 32 - 1);
  return emit_f_input_tree(make_tree_job(message, params()));
}

FInputTree tree_of_message(const std::vector<std::uint8_t>& message) {
  return emit_f_input_tree(make_tree_job(message, params()));
}

}  // namespace

TEST_CASE("serialization round-trips honest trees") {
  for (std::uint64_t l : {2ull, 3ull, 6ull, 10ull, 20ull, 31ull, 95ull, 200ull}) {
    FInputTree tree = honest_tree(l);
    auto bytes = serialize(tree);
    CHECK(deserialize(bytes) == tree);
  }
  FInputTree single = tree_of_message({});
  CHECK(single.nodes.size() == 1);
  CHECK(deserialize(serialize(single)) == single);
}

TEST_CASE("malformed byte streams raise parse errors") {
  FInputTree tree = honest_tree(6);
  auto bytes = serialize(tree);

  auto truncated = bytes;
  truncated.resize(bytes.size() / 2);
  CHECK_THROWS_AS(deserialize(truncated), ParseError);

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(deserialize(bad_magic), ParseError);

  CHECK_THROWS_AS(deserialize(std::vector<std::uint8_t>{}), ParseError);

  // Point the root's first child past the node table.
  FInputTree dangling = tree;
  dangling.nodes[dangling.root].children[0] = 1000;
  CHECK_THROWS_AS(deserialize(serialize(dangling)), ParseError);

  // Two nodes sharing one child.
  FInputTree shared = honest_tree(10);
  bool patched = false;
  for (auto& node : shared.nodes) {
    if (node.level == 2 && node.children.size() >= 2 && !patched) {
      node.children[1] = node.children[0];
      patched = true;
    }
  }
  REQUIRE(patched);
  CHECK_THROWS_AS(deserialize(serialize(shared)), ParseError);
}

TEST_CASE("message recovery inverts the mode") {
  SplitMix64 rng(211);
  for (int trial = 0; trial < 50; ++trial) {
    auto message = random_message(rng, rng.next() % 3000);
    FInputTree tree = tree_of_message(message);
    auto recovered = a_message(tree);
    REQUIRE(recovered.has_value());
    CHECK(*recovered == BitString::from_bytes(message));
  }
  FInputTree empty_tree = tree_of_message({});
  auto recovered = a_message(empty_tree);
  REQUIRE(recovered.has_value());
  CHECK(recovered->empty());
}

TEST_CASE("message recovery runs in roughly linear time") {
  SplitMix64 rng(223);
  auto small = random_message(rng, 1 << 19);
  auto large = random_message(rng, 1 << 20);
  FInputTree small_tree = tree_of_message(small);
  FInputTree large_tree = tree_of_message(large);
  auto time_of = [](const FInputTree& tree) {
    double best = 1e100;
    for (int rep = 0; rep < 5; ++rep) {
      auto start = std::chrono::steady_clock::now();
      auto out = a_message(tree);
      auto stop = std::chrono::steady_clock::now();
      REQUIRE(out.has_value());
      best = std::min(best, std::chrono::duration<double>(stop - start).count());
    }
    return best;
  };
  double ratio = time_of(large_tree) / time_of(small_tree);
  CHECK(ratio < 4.0);  // doubling the input should not blow past linear growth
}

TEST_CASE("honest trees decode as compliant") {
  for (std::uint64_t l : {2ull, 4ull, 5ull, 6ull, 10ull, 20ull, 32ull, 95ull}) {
    Verdict v = a_decode(honest_tree(l));
    CHECK(v.compliance == Compliance::Compliant);
    CHECK(v.state == DecodeState::C0);
  }
  CHECK(a_decode(tree_of_message({})).compliance == Compliance::Compliant);
}

TEST_CASE("bottom-level cuts are final-subtree-compliant") {
  for (std::uint64_t l : {6ull, 10ull, 20ull, 32ull, 95ull, 100ull, 412ull}) {
    FInputTree tree = honest_tree(l);
    FInputTree cut = cut_final_subtree(tree, 1);
    Verdict v = a_decode(cut);
    CHECK(v.compliance == Compliance::FinalSubtreeCompliant);
  }
}

TEST_CASE("deep cuts and partial cuts stay final-subtree-compliant") {
  FInputTree tree = honest_tree(95);  // height 4
  CHECK(a_decode(cut_final_subtree(tree, 2)).compliance ==
        Compliance::FinalSubtreeCompliant);
  CHECK(a_decode(cut_final_subtree(tree, 3)).compliance ==
        Compliance::FinalSubtreeCompliant);  // root only, via the lone-input path
  CHECK(a_decode(cut_final_subtree(tree, 1, 2)).compliance ==
        Compliance::FinalSubtreeCompliant);
  FInputTree h3 = honest_tree(32);  // height 3
  CHECK(a_decode(cut_final_subtree(h3, 2)).compliance ==
        Compliance::FinalSubtreeCompliant);
}

TEST_CASE("single-rule mutations are incompliant with the matching rule") {
  SUBCASE("root code flipped to inner") {
    FInputTree tree = honest_tree(20);
    tree.nodes[tree.root].kind = NodeKind::Inner;
    Verdict v = a_decode(tree);
    CHECK(v.compliance == Compliance::Incompliant);
    CHECK(v.state == DecodeState::C1);
    CHECK(v.rule == "R0");
  }
  SUBCASE("sibling base nodes with different codes") {
    FInputTree tree = honest_tree(20);
    REQUIRE(tree.nodes[0].level == 1);
    tree.nodes[0].kind = NodeKind::Inner;
    Verdict v = a_decode(tree);
    CHECK(v.compliance == Compliance::Incompliant);
    CHECK(v.state == DecodeState::C1);
    CHECK(v.rule == "RC");
  }
  SUBCASE("payload no longer a whole number of blocks") {
    FInputTree tree = honest_tree(20);
    tree.nodes[1].payload = tree.nodes[1].payload.slice(0, 5 * 256 - 3);
    Verdict v = a_decode(tree);
    CHECK(v.compliance == Compliance::Incompliant);
    CHECK(v.state == DecodeState::C1);
    CHECK(v.rule == "RA");
  }
  SUBCASE("root arity inflated by one chaining value") {
    FInputTree tree = honest_tree(20);
    BitString extra = tree.nodes[tree.root].payload;
    extra.append(BitString::zeros(256));
    tree.nodes[tree.root].payload = extra;
    Verdict v = a_decode(tree);
    CHECK(v.compliance == Compliance::Incompliant);
    CHECK(v.rule == "topology");
  }
  SUBCASE("base node inflated against its level") {
    FInputTree tree = honest_tree(20);
    REQUIRE(tree.nodes[0].level == 1);
    BitString wide = tree.nodes[0].payload;
    wide.append(BitString::zeros(256));
    tree.nodes[0].payload = wide;
    Verdict v = a_decode(tree);
    CHECK(v.compliance == Compliance::Incompliant);
    CHECK(v.state == DecodeState::C1);
    CHECK(v.rule == "RB");
  }
  SUBCASE("base level dropped but one node made inner") {
    FInputTree cut = cut_final_subtree(honest_tree(95), 1);
    // Give an inner node a final-coded child: never producible.
    for (auto& node : cut.nodes) {
      if (node.level == 3 && !node.children.empty()) {
        cut.nodes[node.children[0]].kind = NodeKind::Final;
        break;
      }
    }
    Verdict v = a_decode(cut);
    CHECK(v.compliance == Compliance::Incompliant);
  }
}

TEST_CASE("message bits of a different length are incompliant") {
  // Honest topology for 20 blocks fed a payload whose pad sits early: the
  // recount disagrees with the decoded shape.
  FInputTree tree = honest_tree(20);
  for (auto& node : tree.nodes) {
    if (node.level != 1) continue;
    node.payload = BitString::zeros(node.payload.size());
  }
  Verdict v = a_decode(tree);
  CHECK(v.compliance == Compliance::Incompliant);
  CHECK((v.rule == "pad" || v.rule == "topology"));
}

TEST_CASE("no tree is both compliant and final-subtree-compliant") {
  auto report = no_dual_compliance_probe(2, 40, params());
  CHECK(report.violations == 0);
  CHECK(report.trees == 39);
  CHECK(report.subtrees > 0);
}
