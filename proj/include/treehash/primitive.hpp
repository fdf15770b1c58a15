// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "treehash/bits.hpp"
#include "treehash/cipher.hpp"

namespace treehash {

/// Role of a node in the hash tree, also the value of the two leading frame
/// bits of its domain-separation code.
enum class NodeKind : std::uint8_t {
  Inner = 0,       // 00...
  Final = 1,       // 01...
  BaseLevel = 2,   // 10...
  SingleNode = 3,  // 11...
};

/// The (N-1)-bit code prepended to every node input: two kind bits followed
/// by zeros, so the padding step never has to add more than the single 1 bit.
BitString kind_code(NodeKind kind, unsigned block_bits);

struct HashParams {
  unsigned block_bits = 256;
  std::shared_ptr<const BlockCipher> cipher;
  bool cache_enabled = true;
};

/// Params with the built-in Feistel cipher. block_bits must be a multiple of
/// 16 and at least 64; digest width equals block width.
HashParams make_params(unsigned block_bits = 256, bool cache_enabled = true);
void validate_params(const HashParams& params);

/// c(x, y) = E_y(x) ^ x over the configured cipher. Increments *calls when
/// a counter is supplied.
Block davies_meyer(const HashParams& params, std::span<const std::uint8_t> state,
                   std::span<const std::uint8_t> msg_block,
                   std::atomic<std::uint64_t>* calls = nullptr);

/// Append a 1 bit then the minimum number of 0 bits (possibly zero) so the
/// length becomes a positive multiple of block_bits.
BitString pad10(const BitString& m, unsigned block_bits);

/// Inverse of pad10: strip trailing zeros and the final 1 bit. Empty when the
/// input carries no 1 bit at all.
std::optional<BitString> unpad10(const BitString& padded);

struct InnerResult {
  Block digest;
  std::uint64_t compression_calls = 0;
};

/// Variable-input-length inner hash: the padded message is prefixed with a
/// one-block big-endian count of its blocks, then folded with davies_meyer
/// from the all-zero state. Costs (block count + 1) compression calls.
InnerResult f_inner(const HashParams& params, const BitString& m,
                    std::atomic<std::uint64_t>* calls = nullptr);

/// Chaining states after the first two blocks (count block, then code block
/// ending in the input's first bit) for every arity 1..5, kind, and leading
/// input bit: 40 entries. Lookups never change digests, they only remove two
/// compression calls per node.
class PrecomputeCache {
 public:
  static PrecomputeCache build(const HashParams& params);

  const Block& state_after_prefix(int arity, NodeKind kind, bool first_bit) const;
  std::size_t size() const { return states_.size(); }

 private:
  std::vector<Block> states_;  // indexed [ (arity-1)*8 + kind*2 + bit ]
};

/// Domain-separated node hash: f applied to kind_code(kind) || x, where x is
/// a whole number of blocks, between 1 and 5 of them. With a warm cache the
/// cost is exactly one compression call per block of x.
Block f_kind(const HashParams& params, NodeKind kind, const BitString& x,
             const PrecomputeCache* cache = nullptr,
             std::atomic<std::uint64_t>* calls = nullptr);

/// One test-vector record: digest of f_kind(kind, x) for a q-block input.
struct KindVector {
  unsigned block_bits;
  int arity;
  NodeKind kind;
  bool first_bit;
  BitString input;
  Block digest;
};

/// Text format, one record per line:
///   N q kind first_bit hex(x) hex(digest)
/// with kind one of BL, I, F, SN, and lowercase big-endian hex.
void write_kind_vectors(std::ostream& os, std::span<const KindVector> records);
std::vector<KindVector> read_kind_vectors(std::istream& is);

}  // namespace treehash
