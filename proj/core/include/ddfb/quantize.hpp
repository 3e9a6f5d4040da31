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

#include "ddfb/numerics.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace ddfb {

/// Scalar quantizer with 2^bits sorted reproduction levels and the
/// 2^bits - 1 midpoint thresholds between them.
///
/// Cell i covers [thresholds[i-1], thresholds[i]); a value that lands exactly
/// on a threshold belongs to the upper cell.
struct ScalarCodebook {
  int bits = 0;
  std::vector<double> levels;
  std::vector<double> thresholds;

  std::size_t size() const { return levels.size(); }
};

struct LloydTrace {
  std::vector<double> distortion;  // mean-squared error after each iteration
};

/// Lloyd-Max training from 2^bits empirical quantiles. Stops when the
/// distortion improves by less than 1e-10 (relative) or after 200 iterations.
/// Throws std::invalid_argument for empty samples or bits outside [1, 16].
ScalarCodebook lloyd_train(std::span<const double> samples, int bits, LloydTrace* trace = nullptr);

/// Builds a codebook from explicit levels (sorted on entry).
ScalarCodebook make_codebook(std::vector<double> levels, int bits);

std::vector<std::uint32_t> sq_apply(const ScalarCodebook& codebook, std::span<const double> values);
std::uint32_t sq_apply(const ScalarCodebook& codebook, double value);

/// Throws std::out_of_range for an index outside the codebook.
std::vector<double> sq_reconstruct(const ScalarCodebook& codebook, std::span<const std::uint32_t> indices);

double mean_squared_error(std::span<const double> a, std::span<const double> b);

/// Nearest 2^bits-PSK phase per element after removing the phase of element 0.
///
/// Returns M_T - 1 symbol indices (element 0 is the reference and carries no
/// bits). Symbol q has phase 2 pi q / 2^bits; equidistant phases resolve to
/// the smaller index. Throws std::invalid_argument for fewer than 2 elements
/// or an all-zero vector.
std::vector<std::uint32_t> psk_vq(const ComplexVector& h, int bits);

/// Unit-modulus codeword: element 0 is 1, element m is exp(j 2 pi q_{m-1} / 2^bits).
ComplexVector psk_reconstruct(std::span<const std::uint32_t> indices, int bits);

/// Stacked sign bits [sign(Re(P^H y)); sign(Im(P^H y))] with sign(0) = +1.
struct SignBits {
  std::vector<std::int8_t> bits;

  std::size_t size() const { return bits.size(); }
  RealVector as_vector() const;
};

SignBits sign_quantize(const ComplexMatrix& p, const ComplexVector& y);

}  // namespace ddfb
