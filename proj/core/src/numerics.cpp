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
#include "ddfb/numerics.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ddfb {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // ln sqrt(2 pi)
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Above this point the tail is evaluated through the Mills ratio instead of erfc.
constexpr double kTailSwitch = 5.0;
constexpr double kAsymptoticSwitch = 30.0;

// Mills ratio R(x) = Q(x) / phi(x) for x > 0 by the continued fraction
// R(x) = 1 / (x + 1 / (x + 2 / (x + 3 / (x + ...)))), modified Lentz.
double mills_ratio(double x) {
  constexpr double tiny = 1e-300;
  double f = x;
  double c = x;
  double d = 0.0;
  for (int n = 1; n < 1000; ++n) {
    d = x + n * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + n / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

}  // namespace

double q_function(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double log_q_stable(double x) {
  if (x < 0.0) return std::log1p(-0.5 * std::erfc(-x / kSqrt2));
  if (x <= kTailSwitch) return std::log(0.5 * std::erfc(x / kSqrt2));
  return -0.5 * x * x - kLogSqrt2Pi + std::log(mills_ratio(x));
}

double inverse_mills_ratio(double x) {
  if (x > kAsymptoticSwitch) {
    const double u = 1.0 / (x * x);
    return x + (1.0 / x) * (1.0 + u * (-2.0 + u * (10.0 + u * -74.0)));
  }
  if (x > kTailSwitch) return 1.0 / mills_ratio(x);
  const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
  return pdf / q_function(x);
}

double erfinv(double y) {
  if (!(y > -1.0 && y < 1.0)) throw std::domain_error("erfinv: argument must lie in (-1, 1)");
  return boost::math::erf_inv(y);
}

double spectral_norm_sq(const RealMatrix& a) {
  if (a.size() == 0) throw std::invalid_argument("spectral_norm_sq: empty matrix");
  const Index n = a.cols();
  RealVector x = RealVector::Ones(n) / std::sqrt(static_cast<double>(n));
  RealVector ax = a * x;
  // The all-ones start can be annihilated (e.g. rows summing to zero);
  // fall back to coordinate vectors in order.
  for (Index k = 0; ax.squaredNorm() == 0.0 && k < n; ++k) {
    x.setZero();
    x(k) = 1.0;
    ax = a * x;
  }
  double lambda = ax.squaredNorm();
  if (lambda == 0.0) return 0.0;
  for (int it = 0; it < 10000; ++it) {
    RealVector z = a.transpose() * ax;
    const double zn = z.norm();
    if (zn == 0.0) break;
    x = z / zn;
    ax = a * x;
    const double next = ax.squaredNorm();
    const double change = std::abs(next - lambda);
    lambda = next;
    if (change < 1e-10 * lambda) break;
  }
  return lambda;
}

PinvResult pseudo_inverse_apply(const ComplexMatrix& a, const ComplexMatrix& b,
                                bool allow_regularization) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("pseudo_inverse_apply: row count of A and B differ");
  if (a.size() == 0) throw std::invalid_argument("pseudo_inverse_apply: empty matrix");

  const bool tall = a.rows() >= a.cols();
  const Index n = std::min(a.rows(), a.cols());
  // QR of A (tall) or of A^H (wide); rank is judged from the diagonal of R.
  Eigen::HouseholderQR<ComplexMatrix> qr(tall ? a : ComplexMatrix(a.adjoint()));
  const auto r = qr.matrixQR().topLeftCorner(n, n).template triangularView<Eigen::Upper>();
  const RealVector diag = qr.matrixQR().diagonal().head(n).cwiseAbs();
  const double dmax = diag.maxCoeff();
  const bool deficient = dmax == 0.0 || diag.minCoeff() <= 1e-12 * dmax;

  PinvResult out;
  if (!deficient) {
    if (tall) {
      ComplexMatrix qhb = qr.householderQ().adjoint() * b;
      out.value = r.solve(qhb.topRows(n));
    } else {
      // A = R^H Q^H  =>  x = Q (R^H)^{-1} b
      ComplexMatrix w = r.adjoint().solve(b);
      ComplexMatrix padded = ComplexMatrix::Zero(a.cols(), b.cols());
      padded.topRows(n) = w;
      out.value = qr.householderQ() * padded;
    }
    return out;
  }
  if (!allow_regularization)
    throw std::runtime_error("pseudo_inverse_apply: matrix is numerically rank-deficient");

  out.regularized = true;
  if (tall) {
    ComplexMatrix gram = a.adjoint() * a;
    const double ridge = 1e-12 * std::max(gram.trace().real(), 1e-300) / static_cast<double>(a.cols());
    gram.diagonal().array() += ridge;
    out.value = gram.ldlt().solve(a.adjoint() * b);
  } else {
    ComplexMatrix gram = a * a.adjoint();
    const double ridge = 1e-12 * std::max(gram.trace().real(), 1e-300) / static_cast<double>(a.rows());
    gram.diagonal().array() += ridge;
    out.value = a.adjoint() * gram.ldlt().solve(b);
  }
  return out;
}

namespace {

template <class M>
M kron_impl(const M& a, const M& b) {
  M out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <class V, class M>
M unvec_impl(const V& v, Index rows, Index cols) {
  if (rows <= 0 || cols <= 0 || v.size() != rows * cols)
    throw std::invalid_argument("unvec: vector length does not match rows * cols");
  return Eigen::Map<const M>(v.data(), rows, cols);
}

}  // namespace

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) { return kron_impl(a, b); }
RealMatrix kron(const RealMatrix& a, const RealMatrix& b) { return kron_impl(a, b); }

ComplexVector vec(const ComplexMatrix& a) {
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}
RealVector vec(const RealMatrix& a) { return Eigen::Map<const RealVector>(a.data(), a.size()); }

ComplexMatrix unvec(const ComplexVector& v, Index rows, Index cols) {
  return unvec_impl<ComplexVector, ComplexMatrix>(v, rows, cols);
}
RealMatrix unvec(const RealVector& v, Index rows, Index cols) {
  return unvec_impl<RealVector, RealMatrix>(v, rows, cols);
}

}  // namespace ddfb
