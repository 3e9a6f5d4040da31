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

#include <complex>
#include <cstdint>
#include <random>

namespace ddfb {

// Every random stream is a std::mt19937_64 whose 64-bit seed is produced by
// the SplitMix64 finalizer applied to (master seed, stream tag, index).
// Streams are therefore reproducible and independent of execution order.
using Rng = std::mt19937_64;

/// SplitMix64 output function (Steele, Lea, Flood 2014).
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for stream `tag` / item `index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index);

/// Seed for Monte-Carlo trial `trial_index`.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial_index);

namespace stream {
inline constexpr std::uint64_t kTrial = 0x7472696131ULL;
inline constexpr std::uint64_t kTraining = 0x7472616e31ULL;
inline constexpr std::uint64_t kCompression = 0x636f6d7031ULL;
}  // namespace stream

/// Draw from CN(mean, variance): real and imaginary parts each N(., variance / 2).
std::complex<double> complex_normal(Rng& rng, std::complex<double> mean = {}, double variance = 1.0);

double uniform_real(Rng& rng, double lo, double hi);
int uniform_int(Rng& rng, int lo, int hi);

}  // namespace ddfb
