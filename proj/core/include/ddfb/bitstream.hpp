// SPDX-License-Identifier: Apache-2.0
//
// ddfb: limited-feedback sparse channel estimation for massive MIMO
// Copyright (C) 2026 The ddfb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ddfb {

// MSB-first bit packing: bit k of the stream is bit (7 - k % 8) of byte k / 8.
// Unused trailing bits of the last byte are zero.

class BitWriter {
 public:
  /// Appends the low `width` bits of `value`, most significant first.
  void put(std::uint64_t value, int width);
  void put_bit(bool bit);

  std::size_t bit_count() const { return bits_; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

class BitReader {
 public:
  BitReader(const std::vector<std::uint8_t>& bytes, std::size_t bit_count);

  /// Throws std::out_of_range when fewer than `width` bits remain.
  std::uint64_t get(int width);
  bool get_bit();

  std::size_t remaining() const { return total_ - pos_; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t total_;
  std::size_t pos_ = 0;
};

/// Lower-case hex dump of a byte buffer.
std::string to_hex(const std::vector<std::uint8_t>& bytes);

/// ceil(log2(n)) for n >= 1 (0 for n = 1).
int bits_for(std::uint64_t n);

}  // namespace ddfb
