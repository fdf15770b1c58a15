// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "treehash/finput.hpp"
#include "treehash/primitive.hpp"

namespace treehash {

/// Binary tree-file format: magic "FTRE", u32 version=1, u32 block bits,
/// u32 node count, then per node u32 level, u32 index, u8 kind, u32 payload
/// bit length, payload bytes, u32 child count, u32 child ids. Little-endian.
std::vector<std::uint8_t> serialize(const FInputTree& tree);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at byte " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Throws ParseError on malformed input: bad header, truncated records,
/// dangling child ids, shared children, forests, or unreachable nodes.
FInputTree deserialize(std::span<const std::uint8_t> bytes);

enum class Compliance { Compliant, FinalSubtreeCompliant, Incompliant };
enum class DecodeState { C0, C1, C2, C3 };

struct Verdict {
  Compliance compliance = Compliance::Incompliant;
  DecodeState state = DecodeState::C0;
  std::string rule;  // broken rule or check: R0..R3, RA, RB, RC, pad, topology
};

const char* to_string(Compliance c);

/// Concatenate base-level payloads in index order and strip the outer
/// padding. Empty result when no pad bit is found (the incompliant signal).
std::optional<BitString> a_message(const FInputTree& tree);

/// Two-phase structural decoder. Phase 1 walks from the root checking the
/// framing rules and ends in a state C0..C3; phase 2 decides compliant /
/// final-subtree-compliant / incompliant from that state. Total over
/// arbitrary trees; adversarial input maps to a verdict, never a crash.
Verdict a_decode(const FInputTree& tree);

struct DualComplianceReport {
  std::uint64_t trees = 0;
  std::uint64_t subtrees = 0;
  std::uint64_t violations = 0;
};

/// For every honest tree with block count in [l_min, l_max] and each proper
/// final subtree in the cut family (whole bottom levels, then right suffixes
/// of the new bottom level), assert the subtree is never Compliant and the
/// full tree is exactly Compliant.
DualComplianceReport no_dual_compliance_probe(std::uint64_t l_min,
                                              std::uint64_t l_max,
                                              const HashParams& params);

/// Proper final subtree by removing the lowest `levels` levels and then the
/// rightmost `drop_tail` nodes of the remaining bottom level.
FInputTree cut_final_subtree(const FInputTree& tree, int levels,
                             std::uint64_t drop_tail = 0);

}  // namespace treehash
