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
#include "ddfb/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddfb {

namespace {

double distortion(std::span<const double> samples, const ScalarCodebook& cb) {
  double sum = 0.0;
  for (double v : samples) {
    const double d = v - cb.levels[sq_apply(cb, v)];
    sum += d * d;
  }
  return sum / static_cast<double>(samples.size());
}

void refresh_thresholds(ScalarCodebook& cb) {
  cb.thresholds.resize(cb.levels.size() - 1);
  for (std::size_t i = 0; i + 1 < cb.levels.size(); ++i)
    cb.thresholds[i] = 0.5 * (cb.levels[i] + cb.levels[i + 1]);
}

}  // namespace

ScalarCodebook make_codebook(std::vector<double> levels, int bits) {
  if (levels.empty()) throw std::invalid_argument("make_codebook: no levels");
  std::sort(levels.begin(), levels.end());
  ScalarCodebook cb;
  cb.bits = bits;
  cb.levels = std::move(levels);
  refresh_thresholds(cb);
  return cb;
}

ScalarCodebook lloyd_train(std::span<const double> samples, int bits, LloydTrace* trace) {
  if (samples.empty()) throw std::invalid_argument("lloyd_train: no samples");
  if (bits < 1 || bits > 16) throw std::invalid_argument("lloyd_train: bits must be in [1, 16]");
  const std::size_t n_levels = std::size_t{1} << bits;

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> distinct = sorted;
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  // Few distinct values: one level per value, padded with the largest.
  if (distinct.size() <= n_levels) {
    std::vector<double> levels = distinct;
    levels.resize(n_levels, distinct.back());
    ScalarCodebook cb = make_codebook(std::move(levels), bits);
    if (trace) trace->distortion.push_back(0.0);
    return cb;
  }

  std::vector<double> levels(n_levels);
  const std::size_t n = sorted.size();
  for (std::size_t k = 0; k < n_levels; ++k) {
    const double pos = (static_cast<double>(k) + 0.5) / static_cast<double>(n_levels) * static_cast<double>(n);
    levels[k] = sorted[std::min(n - 1, static_cast<std::size_t>(pos))];
  }
  ScalarCodebook cb = make_codebook(std::move(levels), bits);
  double current = distortion(samples, cb);
  if (trace) trace->distortion.push_back(current);

  std::vector<double> sum(n_levels);
  std::vector<std::size_t> count(n_levels);
  for (int it = 0; it < 200; ++it) {
    std::fill(sum.begin(), sum.end(), 0.0);
    std::fill(count.begin(), count.end(), 0);
    for (double v : sorted) {
      const auto i = sq_apply(cb, v);
      sum[i] += v;
      ++count[i];
    }
    ScalarCodebook next = cb;
    for (std::size_t k = 0; k < n_levels; ++k)
      if (count[k] > 0) next.levels[k] = sum[k] / static_cast<double>(count[k]);
    // Centroids of ordered cells stay ordered; sort guards against rounding.
    std::sort(next.levels.begin(), next.levels.end());
    refresh_thresholds(next);
    const double d = distortion(samples, next);
    if (d > current) break;
    const double improvement = current - d;
    cb = std::move(next);
    current = d;
    if (trace) trace->distortion.push_back(current);
    if (improvement <= 1e-10 * current) break;
  }
  return cb;
}

std::uint32_t sq_apply(const ScalarCodebook& cb, double value) {
  const auto it = std::upper_bound(cb.thresholds.begin(), cb.thresholds.end(), value);
  return static_cast<std::uint32_t>(it - cb.thresholds.begin());
}

std::vector<std::uint32_t> sq_apply(const ScalarCodebook& cb, std::span<const double> values) {
  std::vector<std::uint32_t> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(sq_apply(cb, v));
  return out;
}

std::vector<double> sq_reconstruct(const ScalarCodebook& cb, std::span<const std::uint32_t> indices) {
  std::vector<double> out;
  out.reserve(indices.size());
  for (auto i : indices) {
    if (i >= cb.levels.size()) throw std::out_of_range("sq_reconstruct: index outside codebook");
    out.push_back(cb.levels[i]);
  }
  return out;
}

double mean_squared_error(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("mean_squared_error: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s / static_cast<double>(a.size());
}

std::vector<std::uint32_t> psk_vq(const ComplexVector& h, int bits) {
  if (h.size() < 2) throw std::invalid_argument("psk_vq: need at least two elements");
  if (bits < 1 || bits > 16) throw std::invalid_argument("psk_vq: bits must be in [1, 16]");
  if (h.cwiseAbs().maxCoeff() == 0.0) throw std::invalid_argument("psk_vq: all-zero channel");
  const std::uint32_t m = 1U << bits;
  const double step = 2.0 * kPi / m;
  const double ref = std::arg(h(0));
  std::vector<std::uint32_t> out;
  out.reserve(static_cast<std::size_t>(h.size() - 1));
  for (Index i = 1; i < h.size(); ++i) {
    double theta = std::arg(h(i)) - ref;
    theta = std::fmod(theta, 2.0 * kPi);
    if (theta < 0.0) theta += 2.0 * kPi;
    const double pos = theta / step;
    const auto lo = static_cast<std::uint32_t>(std::floor(pos)) % m;
    const std::uint32_t hi = (lo + 1) % m;
    const double d_lo = pos - std::floor(pos);
    const double d_hi = 1.0 - d_lo;
    std::uint32_t pick;
    if (std::abs(d_lo - d_hi) <= 1e-9)
      pick = std::min(lo, hi);
    else
      pick = d_lo < d_hi ? lo : hi;
    out.push_back(pick);
  }
  return out;
}

ComplexVector psk_reconstruct(std::span<const std::uint32_t> indices, int bits) {
  const std::uint32_t m = 1U << bits;
  ComplexVector w(static_cast<Index>(indices.size()) + 1);
  w(0) = 1.0;
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= m) throw std::out_of_range("psk_reconstruct: symbol index out of range");
    w(static_cast<Index>(i) + 1) = std::polar(1.0, 2.0 * kPi * indices[i] / m);
  }
  return w;
}

RealVector SignBits::as_vector() const {
  RealVector v(static_cast<Index>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) v(static_cast<Index>(i)) = bits[i];
  return v;
}

SignBits sign_quantize(const ComplexMatrix& p, const ComplexVector& y) {
  if (p.rows() != y.size()) throw std::invalid_argument("sign_quantize: P and y not conformable");
  const ComplexVector r = p.adjoint() * y;
  const Index n = r.size();
  SignBits out;
  out.bits.resize(static_cast<std::size_t>(2 * n));
  for (Index i = 0; i < n; ++i) {
    out.bits[static_cast<std::size_t>(i)] = r(i).real() >= 0.0 ? 1 : -1;
    out.bits[static_cast<std::size_t>(n + i)] = r(i).imag() >= 0.0 ? 1 : -1;
  }
  return out;
}

}  // namespace ddfb
