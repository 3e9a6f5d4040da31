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

#include <doctest.h>

#include <stdexcept>

using namespace ddfb;

TEST_SUITE("bitstream") {
  TEST_CASE("MSB-first packing") {
    BitWriter w;
    w.put(0b101, 3);
    w.put_bit(true);
    w.put(0xABC, 12);
    w.put(1, 1);
    CHECK(w.bit_count() == 17);
    CHECK(to_hex(w.bytes()) == "babc80");
    BitReader r(w.bytes(), w.bit_count());
    CHECK(r.get(3) == 0b101);
    CHECK(r.get_bit());
    CHECK(r.get(12) == 0xABC);
    CHECK(r.remaining() == 1);
    CHECK(r.get(1) == 1);
    CHECK_THROWS_AS(r.get_bit(), std::out_of_range);
  }

  TEST_CASE("wide fields and zero width") {
    BitWriter w;
    w.put(0x0123456789ABCDEFULL, 64);
    w.put(0, 0);
    CHECK_THROWS_AS(w.put(5, 0), std::invalid_argument);
    CHECK(w.bit_count() == 64);
    CHECK(to_hex(w.bytes()) == "0123456789abcdef");
    BitReader r(w.bytes(), 64);
    CHECK(r.get(64) == 0x0123456789ABCDEFULL);
  }

  TEST_CASE("bits_for") {
    CHECK(bits_for(1) == 0);
    CHECK(bits_for(2) == 1);
    CHECK(bits_for(3) == 2);
    CHECK(bits_for(1024) == 10);
    CHECK(bits_for(1025) == 11);
    CHECK(bits_for(57600) == 16);
    CHECK(bits_for(2240) == 12);
  }
}
