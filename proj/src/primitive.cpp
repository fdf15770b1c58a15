// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#include "treehash/primitive.hpp"

#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace treehash {

namespace {

Block zero_block(unsigned block_bits) { return Block(block_bits / 8, 0); }

// One block holding the big-endian count.
Block count_block(std::uint64_t count, unsigned block_bits) {
  Block b = zero_block(block_bits);
  for (int j = 0; j < 8 && j < static_cast<int>(b.size()); ++j)
    b[b.size() - 1 - j] = static_cast<std::uint8_t>(count >> (8 * j));
  return b;
}

const char* kind_token(NodeKind kind) {
  switch (kind) {
    case NodeKind::BaseLevel: return "BL";
    case NodeKind::Inner: return "I";
    case NodeKind::Final: return "F";
    case NodeKind::SingleNode: return "SN";
  }
  throw std::invalid_argument("bad node kind");
}

NodeKind kind_from_token(const std::string& token) {
  if (token == "BL") return NodeKind::BaseLevel;
  if (token == "I") return NodeKind::Inner;
  if (token == "F") return NodeKind::Final;
  if (token == "SN") return NodeKind::SingleNode;
  throw std::invalid_argument("bad node kind token: " + token);
}

std::vector<std::uint8_t> bytes_from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("odd hex length");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw std::invalid_argument("bad hex digit");
  };
  std::vector<std::uint8_t> out(hex.size() / 2);
  for (std::size_t j = 0; j < out.size(); ++j)
    out[j] = static_cast<std::uint8_t>(nibble(hex[2 * j]) << 4 | nibble(hex[2 * j + 1]));
  return out;
}

std::string hex_of_bytes(std::span<const std::uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string hex;
  hex.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    hex.push_back(digits[b >> 4]);
    hex.push_back(digits[b & 0xF]);
  }
  return hex;
}

}  // namespace

BitString kind_code(NodeKind kind, unsigned block_bits) {
  BitString out;
  std::uint8_t v = static_cast<std::uint8_t>(kind);
  out.push_back((v >> 1) & 1);
  out.push_back(v & 1);
  out.append(BitString::zeros(block_bits - 3));
  return out;
}

HashParams make_params(unsigned block_bits, bool cache_enabled) {
  HashParams params;
  params.block_bits = block_bits;
  params.cipher = std::make_shared<FeistelCipher>(block_bits);
  params.cache_enabled = cache_enabled;
  validate_params(params);
  return params;
}

void validate_params(const HashParams& params) {
  if (params.block_bits < 64 || params.block_bits % 16 != 0)
    throw std::invalid_argument("block size must be a multiple of 16 bits, at least 64");
  if (!params.cipher) throw std::invalid_argument("missing cipher");
  if (params.cipher->block_bits() != params.block_bits)
    throw std::invalid_argument("cipher width does not match block size");
}

Block davies_meyer(const HashParams& params, std::span<const std::uint8_t> state,
                   std::span<const std::uint8_t> msg_block,
                   std::atomic<std::uint64_t>* calls) {
  if (state.size() != params.block_bits / 8 || msg_block.size() != params.block_bits / 8)
    throw std::invalid_argument("state and message block must be one block wide");
  Block out = params.cipher->encrypt(msg_block, state);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] ^= state[j];
  if (calls) calls->fetch_add(1, std::memory_order_relaxed);
  return out;
}

BitString pad10(const BitString& m, unsigned block_bits) {
  BitString out = m;
  out.push_back(true);
  while (out.size() % block_bits != 0) out.push_back(false);
  return out;
}

std::optional<BitString> unpad10(const BitString& padded) {
  std::size_t j = padded.size();
  while (j > 0 && !padded.bit(j - 1)) --j;
  if (j == 0) return std::nullopt;
  return padded.slice(0, j - 1);
}

InnerResult f_inner(const HashParams& params, const BitString& m,
                    std::atomic<std::uint64_t>* calls) {
  validate_params(params);
  unsigned n = params.block_bits;
  BitString padded = pad10(m, n);
  std::uint64_t blocks = padded.size() / n;
  InnerResult result;
  result.digest = davies_meyer(params, zero_block(n), count_block(blocks, n), calls);
  for (std::uint64_t j = 0; j < blocks; ++j) {
    BitString block = padded.slice(j * n, n);
    result.digest = davies_meyer(params, result.digest, block.bytes(), calls);
  }
  result.compression_calls = blocks + 1;
  return result;
}

PrecomputeCache PrecomputeCache::build(const HashParams& params) {
  validate_params(params);
  unsigned n = params.block_bits;
  PrecomputeCache cache;
  cache.states_.resize(5 * 4 * 2);
  for (int arity = 1; arity <= 5; ++arity) {
    Block after_count =
        davies_meyer(params, zero_block(n), count_block(arity + 1, n));
    for (int kind = 0; kind < 4; ++kind) {
      for (int bit = 0; bit < 2; ++bit) {
        BitString second = kind_code(static_cast<NodeKind>(kind), n);
        second.push_back(bit != 0);
        cache.states_[(arity - 1) * 8 + kind * 2 + bit] =
            davies_meyer(params, after_count, second.bytes());
      }
    }
  }
  return cache;
}

const Block& PrecomputeCache::state_after_prefix(int arity, NodeKind kind,
                                                 bool first_bit) const {
  if (arity < 1 || arity > 5) throw std::invalid_argument("arity out of range");
  return states_[(arity - 1) * 8 + static_cast<int>(kind) * 2 + (first_bit ? 1 : 0)];
}

Block f_kind(const HashParams& params, NodeKind kind, const BitString& x,
             const PrecomputeCache* cache, std::atomic<std::uint64_t>* calls) {
  validate_params(params);
  unsigned n = params.block_bits;
  if (x.empty() || x.size() % n != 0)
    throw std::invalid_argument("node input must be a positive multiple of the block size");
  std::uint64_t arity = x.size() / n;
  if (arity > 5) throw std::invalid_argument("node input wider than five blocks");

  BitString encoded = kind_code(kind, n);
  encoded.append(x);
  if (params.cache_enabled && cache) {
    BitString padded = pad10(encoded, n);
    assert(padded.size() == encoded.size() + 1);  // exactly the one pad bit
    Block digest =
        cache->state_after_prefix(static_cast<int>(arity), kind, x.bit(0));
    for (std::uint64_t j = 1; j <= arity; ++j) {
      BitString block = padded.slice(j * n, n);
      digest = davies_meyer(params, digest, block.bytes(), calls);
    }
    return digest;
  }
  return f_inner(params, encoded, calls).digest;
}

void write_kind_vectors(std::ostream& os, std::span<const KindVector> records) {
  for (const KindVector& r : records) {
    os << r.block_bits << ' ' << r.arity << ' ' << kind_token(r.kind) << ' '
       << (r.first_bit ? 1 : 0) << ' ' << r.input.to_hex() << ' '
       << hex_of_bytes(r.digest) << '\n';
  }
}

std::vector<KindVector> read_kind_vectors(std::istream& is) {
  std::vector<KindVector> records;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    KindVector r;
    std::string kind, bit, input_hex, digest_hex;
    if (!(fields >> r.block_bits >> r.arity >> kind >> bit >> input_hex >> digest_hex))
      throw std::invalid_argument("malformed test-vector line: " + line);
    r.kind = kind_from_token(kind);
    r.first_bit = bit == "1";
    auto input_bytes = bytes_from_hex(input_hex);
    r.input = BitString::from_bytes(input_bytes);
    r.digest = bytes_from_hex(digest_hex);
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace treehash
