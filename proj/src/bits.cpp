// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#include "treehash/bits.hpp"

#include <stdexcept>

namespace treehash {

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes) {
  BitString s;
  s.data_.assign(bytes.begin(), bytes.end());
  s.nbits_ = bytes.size() * 8;
  return s;
}

BitString BitString::zeros(std::size_t bits) {
  BitString s;
  s.nbits_ = bits;
  s.data_.assign((bits + 7) / 8, 0);
  return s;
}

void BitString::mask_tail() {
  std::size_t rem = nbits_ & 7;
  if (rem != 0 && !data_.empty())
    data_.back() &= static_cast<std::uint8_t>(0xFF << (8 - rem));
}

void BitString::push_back(bool b) {
  if ((nbits_ & 7) == 0) data_.push_back(0);
  if (b) data_[nbits_ >> 3] |= static_cast<std::uint8_t>(0x80u >> (nbits_ & 7));
  ++nbits_;
}

void BitString::append(const BitString& other) {
  if (other.nbits_ == 0) return;
  std::size_t shift = nbits_ & 7;
  if (shift == 0) {
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
    nbits_ += other.nbits_;
    return;
  }
  std::size_t inv = 8 - shift;
  for (std::uint8_t byte : other.data_) {
    data_.back() |= static_cast<std::uint8_t>(byte >> shift);
    data_.push_back(static_cast<std::uint8_t>(byte << inv));
  }
  nbits_ += other.nbits_;
  data_.resize((nbits_ + 7) / 8);
  mask_tail();
}

BitString BitString::slice(std::size_t pos, std::size_t len) const {
  if (pos + len > nbits_) throw std::out_of_range("slice beyond bit string");
  BitString out;
  out.nbits_ = len;
  out.data_.resize((len + 7) / 8, 0);
  std::size_t byte = pos >> 3;
  std::size_t shift = pos & 7;
  if (shift == 0) {
    for (std::size_t j = 0; j < out.data_.size(); ++j)
      out.data_[j] = data_[byte + j];
  } else {
    std::size_t inv = 8 - shift;
    for (std::size_t j = 0; j < out.data_.size(); ++j) {
      std::uint8_t hi = static_cast<std::uint8_t>(data_[byte + j] << shift);
      std::uint8_t lo = byte + j + 1 < data_.size()
                            ? static_cast<std::uint8_t>(data_[byte + j + 1] >> inv)
                            : 0;
      out.data_[j] = hi | lo;
    }
  }
  out.mask_tail();
  return out;
}

std::string BitString::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string hex;
  hex.reserve(data_.size() * 2);
  for (std::uint8_t byte : data_) {
    hex.push_back(digits[byte >> 4]);
    hex.push_back(digits[byte & 0xF]);
  }
  return hex;
}

}  // namespace treehash
