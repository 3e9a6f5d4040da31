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

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace ddfb {

using cdouble = std::complex<double>;
using Index = Eigen::Index;

// Dense column-major storage throughout; vec() follows the same ordering.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Sorted, duplicate-free list of indices into a vector.
using IndexList = std::vector<Index>;

inline constexpr double kPi = 3.14159265358979323846;

/// Gaussian upper-tail probability Q(x) = P(N(0,1) > x).
double q_function(double x);

/// ln Q(x), accurate in the deep tail (no underflow for x up to several hundred).
double log_q_stable(double x);

/// phi(x) / Q(x) with phi the standard normal density.
double inverse_mills_ratio(double x);

/// Inverse error function on (-1, 1). Throws std::domain_error outside.
double erfinv(double y);

/// Largest squared singular value by power iteration on A^T A.
///
/// Starts from the normalized all-ones vector, iterates until the Rayleigh
/// quotient changes by less than 1e-10 (relative) or 10000 iterations.
double spectral_norm_sq(const RealMatrix& a);

struct PinvResult {
  ComplexMatrix value;
  // True when the triangular factor was rank-deficient and a ridge term
  // (1e-12 * trace(A^H A) / n) was added to obtain a solution.
  bool regularized = false;
};

/// Returns A^+ B: least-squares solution for tall A, minimum-norm solution
/// for wide A. Throws std::invalid_argument on row mismatch and
/// std::runtime_error when A is numerically rank-deficient and
/// `allow_regularization` is false.
PinvResult pseudo_inverse_apply(const ComplexMatrix& a, const ComplexMatrix& b,
                                bool allow_regularization = true);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
RealMatrix kron(const RealMatrix& a, const RealMatrix& b);

ComplexVector vec(const ComplexMatrix& a);
RealVector vec(const RealMatrix& a);

ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols);
RealMatrix unvec(const RealVector& v, Index rows, Index cols);

}  // namespace ddfb
