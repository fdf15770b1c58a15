// SPDX-FileCopyrightText: 2026 The treehash authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace treehash {

using Block = std::vector<std::uint8_t>;

/// Keyed permutation over fixed-size blocks. Key width equals block width.
class BlockCipher {
 public:
  virtual ~BlockCipher() = default;
  virtual unsigned block_bits() const = 0;
  virtual Block encrypt(std::span<const std::uint8_t> key,
                        std::span<const std::uint8_t> block) const = 0;
  virtual Block decrypt(std::span<const std::uint8_t> key,
                        std::span<const std::uint8_t> block) const = 0;
};

/// 16-round balanced Feistel network on big-endian halves. A fixed toy
/// stand-in for an ideal cipher: bijective per key, deterministic, and wide
/// enough to make collisions in tests vanishingly unlikely. Not a vetted
/// cipher; swap in a real one behind BlockCipher for production use.
class FeistelCipher final : public BlockCipher {
 public:
  explicit FeistelCipher(unsigned block_bits);

  unsigned block_bits() const override { return bits_; }
  Block encrypt(std::span<const std::uint8_t> key,
                std::span<const std::uint8_t> block) const override;
  Block decrypt(std::span<const std::uint8_t> key,
                std::span<const std::uint8_t> block) const override;

 private:
  Block round_key(std::span<const std::uint8_t> key, int round) const;
  Block round_function(std::span<const std::uint8_t> half,
                       std::span<const std::uint8_t> rk) const;

  unsigned bits_;
};

}  // namespace treehash
