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
#include "ddfb/bitstream.hpp"

#include <stdexcept>

namespace ddfb {

void BitWriter::put_bit(bool bit) {
  if (bits_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80U >> (bits_ % 8));
  ++bits_;
}

void BitWriter::put(std::uint64_t value, int width) {
  if (width < 0 || width > 64) throw std::invalid_argument("BitWriter: width must be in [0, 64]");
  if (width < 64 && (value >> width) != 0) throw std::invalid_argument("BitWriter: value does not fit in width");
  for (int k = width - 1; k >= 0; --k) put_bit(((value >> k) & 1U) != 0);
}

BitReader::BitReader(const std::vector<std::uint8_t>& bytes, std::size_t bit_count)
    : bytes_(bytes), total_(bit_count) {
  if (bit_count > bytes.size() * 8) throw std::invalid_argument("BitReader: bit count exceeds buffer");
}

bool BitReader::get_bit() {
  if (pos_ >= total_) throw std::out_of_range("BitReader: read past end of stream");
  const bool bit = (bytes_[pos_ / 8] & (0x80U >> (pos_ % 8))) != 0;
  ++pos_;
  return bit;
}

std::uint64_t BitReader::get(int width) {
  if (width < 0 || width > 64) throw std::invalid_argument("BitReader: width must be in [0, 64]");
  if (remaining() < static_cast<std::size_t>(width)) throw std::out_of_range("BitReader: read past end of stream");
  std::uint64_t v = 0;
  for (int k = 0; k < width; ++k) v = (v << 1) | (get_bit() ? 1U : 0U);
  return v;
}

std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0xF]);
  }
  return out;
}

int bits_for(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("bits_for: n must be >= 1");
  int b = 0;
  while ((std::uint64_t{1} << b) < n) ++b;
  return b;
}

}  // namespace ddfb
