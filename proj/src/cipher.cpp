// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#include "treehash/cipher.hpp"

#include <stdexcept>

namespace treehash {

namespace {

constexpr int kRounds = 16;

// Rotate a big-endian bit string left by r bits.
Block rotl_bits(std::span<const std::uint8_t> in, unsigned r) {
  std::size_t n = in.size();
  unsigned width = static_cast<unsigned>(n * 8);
  r %= width;
  unsigned byte_shift = r / 8;
  unsigned bit_shift = r % 8;
  Block out(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::uint8_t hi = in[(j + byte_shift) % n];
    if (bit_shift == 0) {
      out[j] = hi;
    } else {
      std::uint8_t lo = in[(j + byte_shift + 1) % n];
      out[j] = static_cast<std::uint8_t>((hi << bit_shift) | (lo >> (8 - bit_shift)));
    }
  }
  return out;
}

Block xor_bytes(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  Block out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] ^ b[j];
  return out;
}

// Big-endian addition modulo 2^(8n).
Block add_mod(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  Block out(a.size());
  unsigned carry = 0;
  for (std::size_t j = a.size(); j-- > 0;) {
    unsigned sum = static_cast<unsigned>(a[j]) + b[j] + carry;
    out[j] = static_cast<std::uint8_t>(sum);
    carry = sum >> 8;
  }
  return out;
}

}  // namespace

FeistelCipher::FeistelCipher(unsigned block_bits) : bits_(block_bits) {
  if (block_bits < 64 || block_bits % 16 != 0)
    throw std::invalid_argument("block size must be a multiple of 16 bits, at least 64");
}

Block FeistelCipher::round_key(std::span<const std::uint8_t> key, int round) const {
  unsigned half_bytes = bits_ / 16;
  Block rotated = rotl_bits(key, (7u * round + 1) % bits_);
  Block rk(rotated.end() - half_bytes, rotated.end());
  std::uint8_t c = static_cast<std::uint8_t>(0xA5 + round);
  for (auto& byte : rk) byte ^= c;
  return rk;
}

Block FeistelCipher::round_function(std::span<const std::uint8_t> half,
                                    std::span<const std::uint8_t> rk) const {
  unsigned half_bits = bits_ / 2;
  Block t1 = rotl_bits(xor_bytes(half, rk), 29 % half_bits);
  Block t2 = xor_bytes(rotl_bits(half, 9 % half_bits), rk);
  return add_mod(t1, t2);
}

Block FeistelCipher::encrypt(std::span<const std::uint8_t> key,
                             std::span<const std::uint8_t> block) const {
  if (key.size() != bits_ / 8 || block.size() != bits_ / 8)
    throw std::invalid_argument("key and block must be exactly one block wide");
  unsigned half_bytes = bits_ / 16;
  Block left(block.begin(), block.begin() + half_bytes);
  Block right(block.begin() + half_bytes, block.end());
  for (int round = 0; round < kRounds; ++round) {
    Block rk = round_key(key, round);
    Block next_right = xor_bytes(left, round_function(right, rk));
    left = std::move(right);
    right = std::move(next_right);
  }
  Block out = std::move(left);
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

Block FeistelCipher::decrypt(std::span<const std::uint8_t> key,
                             std::span<const std::uint8_t> block) const {
  if (key.size() != bits_ / 8 || block.size() != bits_ / 8)
    throw std::invalid_argument("key and block must be exactly one block wide");
  unsigned half_bytes = bits_ / 16;
  Block left(block.begin(), block.begin() + half_bytes);
  Block right(block.begin() + half_bytes, block.end());
  for (int round = kRounds - 1; round >= 0; --round) {
    Block rk = round_key(key, round);
    Block prev_left = xor_bytes(right, round_function(left, rk));
    right = std::move(left);
    left = std::move(prev_left);
  }
  Block out = std::move(left);
  out.insert(out.end(), right.begin(), right.end());
  return out;
}

}  // namespace treehash
