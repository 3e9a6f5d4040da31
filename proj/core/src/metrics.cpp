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
#include "ddfb/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace ddfb {

double nrmse(const ComplexMatrix& h_hat, const ComplexMatrix& h) {
  if (h_hat.rows() != h.rows() || h_hat.cols() != h.cols()) throw std::invalid_argument("nrmse: shape mismatch");
  const double ref = h.norm();
  if (!(ref > 0.0)) throw std::invalid_argument("nrmse: true channel is zero");
  return (h_hat - h).norm() / ref;
}

double beamforming_gain(const ComplexVector& h, const ComplexVector& h_hat, double tx_power) {
  if (h.size() != h_hat.size()) throw std::invalid_argument("beamforming_gain: length mismatch");
  const double n2 = h_hat.squaredNorm();
  if (n2 == 0.0) return 0.0;
  return tx_power * std::norm(h.dot(h_hat)) / n2;
}

double beamforming_gain(const ComplexMatrix& h, const ComplexMatrix& h_hat, double tx_power) {
  if (h.rows() != h_hat.rows() || h.cols() != h_hat.cols())
    throw std::invalid_argument("beamforming_gain: shape mismatch");
  if (h_hat.squaredNorm() == 0.0) return 0.0;
  if (h_hat.rows() == 1) return beamforming_gain(ComplexVector(h.row(0).adjoint()), h_hat.row(0).adjoint(), tx_power);
  Eigen::JacobiSVD<ComplexMatrix> svd(h_hat, Eigen::ComputeThinV);
  const ComplexVector v = svd.matrixV().col(0);
  return tx_power * (h * v).squaredNorm();
}

ZfPrecoder zf_precoder(const ComplexMatrix& t_hat) {
  const Index k = t_hat.rows();
  if (k < 1 || k > t_hat.cols()) throw std::domain_error("zf_precoder: need 1 <= K <= M_T");
  const ComplexMatrix gram = t_hat * t_hat.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram);
  const RealVector lambda = eig.eigenvalues();  // ascending
  if (!(lambda(k - 1) > 0.0) || lambda(0) / lambda(k - 1) < 1e-10)
    throw std::domain_error("zf_precoder: estimated channel matrix is rank-deficient");
  const ComplexMatrix& u = eig.eigenvectors();
  const ComplexMatrix gram_inv = u * lambda.cwiseInverse().asDiagonal() * u.adjoint();
  ZfPrecoder out;
  out.t = std::sqrt(static_cast<double>(k) / lambda.cwiseInverse().sum());
  out.v = out.t * t_hat.adjoint() * gram_inv;
  return out;
}

double training_prefactor(int training_symbols, int coherence_symbols) {
  if (coherence_symbols <= training_symbols) throw std::invalid_argument("coherence block must exceed training");
  return 1.0 - static_cast<double>(training_symbols) / static_cast<double>(coherence_symbols);
}

MultiuserRates sinr_and_sum_rate(const MultiuserContext& ctx, const ComplexMatrix& v) {
  const Index k = ctx.channels.rows();
  if (v.rows() != ctx.channels.cols() || v.cols() != k)
    throw std::invalid_argument("sinr_and_sum_rate: V not conformable with the channels");
  const double pre = training_prefactor(ctx.training_symbols, ctx.coherence_symbols);
  const RealMatrix power = (ctx.channels * v).cwiseAbs2();  // |h_k v_k'|^2
  MultiuserRates out;
  double signal_total = 0.0, leak_total = 0.0;
  for (Index i = 0; i < k; ++i) {
    const double signal = power(i, i);
    double leak = 0.0;  // summed directly: row sum minus signal cancels catastrophically
    for (Index j = 0; j < k; ++j)
      if (j != i) leak += power(i, j);
    signal_total += signal;
    leak_total += leak;
    const double gamma =
        ctx.tx_power * signal / (ctx.tx_power * leak + static_cast<double>(k) * ctx.noise_power);
    out.sinr.push_back(gamma);
    out.rate.push_back(pre * std::log2(1.0 + gamma));
    out.sum_rate += out.rate.back();
  }
  out.interference = signal_total > 0.0 ? leak_total / signal_total : 0.0;
  return out;
}

}  // namespace ddfb
