// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "treehash/bits.hpp"
#include "treehash/primitive.hpp"

namespace treehash {

/// One formatted input to the inner function: its position in the tree, its
/// domain-separation kind, and its content bits (message bits at the base
/// level, concatenated chaining values above). The (N-1)-bit code is implied
/// by kind and not stored in payload.
struct FInput {
  std::uint32_t level = 0;  // 1 = base level
  std::uint32_t index = 0;  // left-to-right within the level
  NodeKind kind = NodeKind::Inner;
  BitString payload;
  std::vector<std::uint32_t> children;  // node ids, chaining-value order

  friend bool operator==(const FInput& a, const FInput& b) {
    return a.level == b.level && a.index == b.index && a.kind == b.kind &&
           a.payload == b.payload && a.children == b.children;
  }
};

struct FInputTree {
  unsigned block_bits = 0;
  std::vector<FInput> nodes;
  std::uint32_t root = 0;

  friend bool operator==(const FInputTree& a, const FInputTree& b) {
    return a.block_bits == b.block_bits && a.nodes == b.nodes && a.root == b.root;
  }
};

}  // namespace treehash
