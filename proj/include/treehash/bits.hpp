// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace treehash {

/// Bit string packed MSB-first into bytes. Bits past size() in the last byte
/// are kept zero so byte-level comparisons and hex dumps stay canonical.
class BitString {
 public:
  BitString() = default;

  static BitString from_bytes(std::span<const std::uint8_t> bytes);
  static BitString zeros(std::size_t bits);

  std::size_t size() const { return nbits_; }
  bool empty() const { return nbits_ == 0; }

  bool bit(std::size_t i) const {
    return (data_[i >> 3] >> (7 - (i & 7))) & 1;
  }

  void push_back(bool b);
  void append(const BitString& other);
  BitString slice(std::size_t pos, std::size_t len) const;

  /// Backing bytes, ceil(size()/8) of them, tail bits zero.
  const std::vector<std::uint8_t>& bytes() const { return data_; }
  std::string to_hex() const;

  friend bool operator==(const BitString& a, const BitString& b) {
    return a.nbits_ == b.nbits_ && a.data_ == b.data_;
  }

 private:
  void mask_tail();

  std::vector<std::uint8_t> data_;
  std::size_t nbits_ = 0;
};

}  // namespace treehash
