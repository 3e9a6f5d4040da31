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
#include "ddfb/schemes.hpp"

#include "ddfb/bitstream.hpp"
#include "ddfb/dictionary.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace ddfb {

namespace {

constexpr std::array<std::pair<SchemeKind, std::string_view>, 8> kNames{{
    {SchemeKind::OmpSq, "omp-sq"},
    {SchemeKind::OneBitCs, "onebit-cs"},
    {SchemeKind::OneBitMle, "onebit-mle"},
    {SchemeKind::HybridCs, "hybrid-cs"},
    {SchemeKind::HybridMle, "hybrid-mle"},
    {SchemeKind::LsSq, "ls-sq"},
    {SchemeKind::LsVq, "ls-vq"},
    {SchemeKind::Perfect, "perfect"},
}};

ComplexVector vec_of(const ComplexMatrix& y) { return vec(y); }

SparseEstimate solve_onebit(const RealMatrix& c, const SignBits& bits, const OneBitSolver& solver,
                            double c_norm_sq) {
  if (const auto* cs = std::get_if<CsConfig>(&solver)) return onebit_cs(c, bits, *cs);
  return mle_fista(c, bits, std::get<MleConfig>(solver), {}, c_norm_sq);
}

ChannelEstimate finish(const ComplexVector& g, const ComplexMatrix& a_tx, const ComplexMatrix& a_rx,
                       SchemeKind kind, int iterations) {
  ChannelEstimate est;
  est.scheme = kind;
  est.solver_iterations = iterations;
  est.h_hat = reconstruct_channel(g, a_tx, a_rx, &est.columns_touched);
  return est;
}

std::vector<double> pooled_re_im(const ComplexVector& v) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * v.size()));
  for (Index i = 0; i < v.size(); ++i) {
    out.push_back(v(i).real());
    out.push_back(v(i).imag());
  }
  return out;
}

}  // namespace

std::string_view to_string(SchemeKind kind) {
  for (const auto& [k, name] : kNames)
    if (k == kind) return name;
  return "unknown";
}

SchemeKind scheme_kind_from_string(std::string_view name) {
  for (const auto& [k, n] : kNames)
    if (n == name) return k;
  std::string valid;
  for (const auto& [k, n] : kNames) valid += (valid.empty() ? "" : ", ") + std::string(n);
  throw std::invalid_argument("unknown scheme kind '" + std::string(name) + "' (valid: " + valid + ")");
}

// --- bit formulas ------------------------------------------------------------

std::size_t omp_sq_bits(std::size_t support_size, Index dictionary_size, int q_bits) {
  return support_size * static_cast<std::size_t>(bits_for(static_cast<std::uint64_t>(dictionary_size)) + 2 * q_bits);
}

std::size_t onebit_bits(Index n_fb) { return static_cast<std::size_t>(2 * n_fb); }

std::size_t hybrid_bits(Index n_fb, std::size_t support_size, Index dictionary_size) {
  return onebit_bits(n_fb) + support_size * static_cast<std::size_t>(bits_for(static_cast<std::uint64_t>(dictionary_size)));
}

std::size_t ls_sq_bits(Index m_tx, Index m_rx, int q_bits) {
  return static_cast<std::size_t>(2 * q_bits) * static_cast<std::size_t>(m_tx * m_rx);
}

std::size_t ls_vq_bits(Index m_tx, int q_bits) {
  return static_cast<std::size_t>(q_bits) * static_cast<std::size_t>(m_tx - 1);
}

// --- serialization -------------------------------------------------------------

SerializedPayload serialize(const FeedbackPayload& payload) {
  BitWriter w;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, OmpSqPayload>) {
          const int ib = bits_for(static_cast<std::uint64_t>(p.dictionary_size));
          for (std::size_t k = 0; k < p.support.size(); ++k) {
            w.put(static_cast<std::uint64_t>(p.support[k]), ib);
            w.put(p.value_indices[2 * k], p.q_bits);
            w.put(p.value_indices[2 * k + 1], p.q_bits);
          }
        } else if constexpr (std::is_same_v<T, OneBitPayload>) {
          for (auto s : p.bits.bits) w.put_bit(s > 0);
        } else if constexpr (std::is_same_v<T, HybridPayload>) {
          const int ib = bits_for(static_cast<std::uint64_t>(p.dictionary_size));
          for (auto s : p.bits.bits) w.put_bit(s > 0);
          for (auto i : p.support) w.put(static_cast<std::uint64_t>(i), ib);
        } else if constexpr (std::is_same_v<T, LsSqPayload>) {
          for (auto v : p.value_indices) w.put(v, p.q_bits);
        } else {
          for (auto v : p.psk_indices) w.put(v, p.q_bits);
        }
      },
      payload.body);
  return {w.bytes(), w.bit_count()};
}

FeedbackPayload deserialize(const SerializedPayload& data, const PayloadLayout& layout) {
  BitReader r(data.bytes, data.bit_count);
  const std::size_t n = data.bit_count;
  auto fail = [] { throw std::invalid_argument("deserialize: bit count does not match the layout"); };
  auto read_signs = [&](Index n_fb) {
    SignBits s;
    s.bits.resize(onebit_bits(n_fb));
    for (auto& b : s.bits) b = r.get_bit() ? 1 : -1;
    return s;
  };

  FeedbackPayload out;
  out.bit_count = n;
  switch (layout.kind) {
    case SchemeKind::OmpSq: {
      OmpSqPayload p;
      p.dictionary_size = layout.dictionary_size;
      p.q_bits = layout.q_bits;
      const int ib = bits_for(static_cast<std::uint64_t>(layout.dictionary_size));
      const std::size_t per = static_cast<std::size_t>(ib + 2 * layout.q_bits);
      if (per == 0 || n % per != 0) fail();
      for (std::size_t k = 0; k < n / per; ++k) {
        p.support.push_back(static_cast<Index>(r.get(ib)));
        p.value_indices.push_back(static_cast<std::uint32_t>(r.get(layout.q_bits)));
        p.value_indices.push_back(static_cast<std::uint32_t>(r.get(layout.q_bits)));
      }
      out.body = std::move(p);
      break;
    }
    case SchemeKind::OneBitCs:
    case SchemeKind::OneBitMle: {
      if (n != onebit_bits(layout.n_fb)) fail();
      out.body = OneBitPayload{read_signs(layout.n_fb)};
      break;
    }
    case SchemeKind::HybridCs:
    case SchemeKind::HybridMle: {
      const int ib = bits_for(static_cast<std::uint64_t>(layout.dictionary_size));
      const std::size_t head = onebit_bits(layout.n_fb);
      if (n < head || (ib == 0 ? n != head : (n - head) % static_cast<std::size_t>(ib) != 0)) fail();
      HybridPayload p;
      p.dictionary_size = layout.dictionary_size;
      p.bits = read_signs(layout.n_fb);
      while (r.remaining() > 0) p.support.push_back(static_cast<Index>(r.get(ib)));
      out.body = std::move(p);
      break;
    }
    case SchemeKind::LsSq: {
      if (n != ls_sq_bits(layout.cols, layout.rows, layout.q_bits)) fail();
      LsSqPayload p;
      p.rows = layout.rows;
      p.cols = layout.cols;
      p.q_bits = layout.q_bits;
      while (r.remaining() > 0) p.value_indices.push_back(static_cast<std::uint32_t>(r.get(layout.q_bits)));
      out.body = std::move(p);
      break;
    }
    case SchemeKind::LsVq: {
      if (layout.q_bits < 1 || n % static_cast<std::size_t>(layout.q_bits) != 0) fail();
      LsVqPayload p;
      p.q_bits = layout.q_bits;
      while (r.remaining() > 0) p.psk_indices.push_back(static_cast<std::uint32_t>(r.get(layout.q_bits)));
      out.body = std::move(p);
      break;
    }
    case SchemeKind::Perfect:
      throw std::invalid_argument("deserialize: the perfect-CSI reference has no payload");
  }
  return out;
}

// --- reconstruction ---------------------------------------------------------------

ComplexMatrix reconstruct_channel(const ComplexVector& g, const ComplexMatrix& a_tx, const ComplexMatrix& a_rx,
                                  Index* columns_touched) {
  const Index g_rx = a_rx.cols();
  if (g.size() != a_tx.cols() * g_rx) throw std::invalid_argument("reconstruct_channel: size mismatch");
  ComplexMatrix h = ComplexMatrix::Zero(a_rx.rows(), a_tx.rows());
  Index touched = 0;
  for (Index s = 0; s < g.size(); ++s) {
    if (g(s) == cdouble(0.0, 0.0)) continue;
    const Index k = s / g_rx;  // transmit atom
    const Index j = s % g_rx;  // receive atom
    h.noalias() += g(s) * a_rx.col(j) * a_tx.col(k).adjoint();
    ++touched;
  }
  if (columns_touched) *columns_touched = touched;
  return h;
}

// --- setup 1 -------------------------------------------------------------------

FeedbackPayload ue_encode_omp_sq(const ComplexMatrix& y, const ComplexMatrix& q, int max_atoms, double eps,
                                 int q_bits, SparseEstimate* ue_estimate) {
  if (q_bits < 1 || q_bits > 16) throw std::invalid_argument("omp-sq: q_bits must be in [1, 16]");
  SparseEstimate est = omp(q, vec_of(y), max_atoms, eps);

  OmpSqPayload p;
  p.dictionary_size = q.cols();
  p.q_bits = q_bits;
  p.support = est.support;
  if (!p.support.empty()) {
    ComplexVector coef(static_cast<Index>(p.support.size()));
    for (std::size_t k = 0; k < p.support.size(); ++k) coef(static_cast<Index>(k)) = est.g(p.support[k]);
    const auto pooled = pooled_re_im(coef);
    p.codebook = lloyd_train(pooled, q_bits);
    p.value_indices = sq_apply(p.codebook, pooled);
  }
  const std::size_t bits = omp_sq_bits(p.support.size(), p.dictionary_size, q_bits);
  if (ue_estimate) *ue_estimate = std::move(est);
  return {std::move(p), bits};
}

ChannelEstimate bs_decode_omp_sq(const FeedbackPayload& payload, const ComplexMatrix& a_tx,
                                 const ComplexMatrix& a_rx) {
  const auto& p = std::get<OmpSqPayload>(payload.body);
  const Index g_size = a_tx.cols() * a_rx.cols();
  check_support(p.support, g_size);
  if (p.value_indices.size() != 2 * p.support.size())
    throw std::invalid_argument("omp-sq: value index count does not match the support");
  const auto values = sq_reconstruct(p.codebook, p.value_indices);
  ComplexVector g = ComplexVector::Zero(g_size);
  for (std::size_t k = 0; k < p.support.size(); ++k) g(p.support[k]) = cdouble(values[2 * k], values[2 * k + 1]);
  return finish(g, a_tx, a_rx, SchemeKind::OmpSq, 0);
}

// --- setup 2 -------------------------------------------------------------------

FeedbackPayload ue_encode_onebit(const ComplexMatrix& y, const ComplexMatrix& p) {
  OneBitPayload body{sign_quantize(p, vec_of(y))};
  const std::size_t bits = body.bits.size();
  return {std::move(body), bits};
}

ChannelEstimate bs_decode_onebit(const FeedbackPayload& payload, const RealMatrix& c, const OneBitSolver& solver,
                                 const ComplexMatrix& a_tx, const ComplexMatrix& a_rx, double c_norm_sq) {
  const auto& p = std::get<OneBitPayload>(payload.body);
  const SparseEstimate est = solve_onebit(c, p.bits, solver, c_norm_sq);
  const SchemeKind kind = std::holds_alternative<CsConfig>(solver) ? SchemeKind::OneBitCs : SchemeKind::OneBitMle;
  return finish(est.complex_estimate(), a_tx, a_rx, kind, est.iterations);
}

// --- setup 3 -------------------------------------------------------------------

FeedbackPayload ue_encode_hybrid(const ComplexMatrix& y, const ComplexMatrix& q, const ComplexMatrix& p,
                                 int max_atoms, double eps) {
  const ComplexVector yv = vec_of(y);
  HybridPayload body;
  body.support = omp(q, yv, max_atoms, eps).support;
  body.bits = sign_quantize(p, yv);
  body.dictionary_size = q.cols();
  const std::size_t bits = hybrid_bits(p.cols(), body.support.size(), body.dictionary_size);
  return {std::move(body), bits};
}

namespace {

ChannelEstimate decode_reduced(const HybridPayload& p, const RealMatrix& c_reduced, const IndexList& sx,
                               const OneBitSolver& solver, const ComplexMatrix& a_tx, const ComplexMatrix& a_rx) {
  const SparseEstimate est = solve_onebit(c_reduced, p.bits, solver, -1.0);
  const Index g_size = a_tx.cols() * a_rx.cols();
  const RealVector x = embed(est.x, sx, 2 * g_size);
  const SchemeKind kind = std::holds_alternative<CsConfig>(solver) ? SchemeKind::HybridCs : SchemeKind::HybridMle;
  return finish(complex_from_stacked(x), a_tx, a_rx, kind, est.iterations);
}

}  // namespace

ChannelEstimate bs_decode_hybrid(const FeedbackPayload& payload, const RealMatrix& c, const OneBitSolver& solver,
                                 const ComplexMatrix& a_tx, const ComplexMatrix& a_rx) {
  const auto& p = std::get<HybridPayload>(payload.body);
  const Index g_size = a_tx.cols() * a_rx.cols();
  if (c.rows() != 2 * g_size) throw std::invalid_argument("hybrid: C does not match the dictionaries");
  check_support(p.support, g_size);
  IndexList sx;
  if (p.support.empty()) {
    sx.resize(static_cast<std::size_t>(2 * g_size));
    for (Index i = 0; i < 2 * g_size; ++i) sx[static_cast<std::size_t>(i)] = i;
    return decode_reduced(p, c, sx, solver, a_tx, a_rx);
  }
  sx = stacked_support(p.support, g_size);
  return decode_reduced(p, restrict_columns(c, sx), sx, solver, a_tx, a_rx);
}

ChannelEstimate bs_decode_hybrid(const FeedbackPayload& payload, const ComplexMatrix& q, const ComplexMatrix& pm,
                                 const OneBitSolver& solver, const ComplexMatrix& a_tx, const ComplexMatrix& a_rx) {
  const auto& p = std::get<HybridPayload>(payload.body);
  const Index g_size = a_tx.cols() * a_rx.cols();
  if (q.cols() != g_size) throw std::invalid_argument("hybrid: Q does not match the dictionaries");
  check_support(p.support, g_size);
  if (p.support.empty()) return bs_decode_hybrid(payload, build_real_stacked(q, pm), solver, a_tx, a_rx);
  const IndexList sx = stacked_support(p.support, g_size);
  return decode_reduced(p, real_stacked_rows(q, pm, p.support), sx, solver, a_tx, a_rx);
}

// --- LS baselines ----------------------------------------------------------------

LsEstimate ls_estimate(const ComplexMatrix& y, const ComplexMatrix& s) {
  if (y.cols() != s.cols()) throw std::invalid_argument("ls: Y and S not conformable");
  // Y S^+ = ((S^T)^+ Y^T)^T
  const ComplexMatrix st = s.transpose();
  const PinvResult r = pseudo_inverse_apply(st, y.transpose());
  return {r.value.transpose(), st.rows() < st.cols() || r.regularized};
}

FeedbackPayload ue_encode_ls_sq(const ComplexMatrix& y, const ComplexMatrix& s, int q_bits, bool* min_norm) {
  if (q_bits < 1 || q_bits > 16) throw std::invalid_argument("ls-sq: q_bits must be in [1, 16]");
  const LsEstimate ls = ls_estimate(y, s);
  if (min_norm) *min_norm = ls.min_norm;
  LsSqPayload p;
  p.rows = ls.h.rows();
  p.cols = ls.h.cols();
  p.q_bits = q_bits;
  const auto pooled = pooled_re_im(vec(ls.h));
  p.codebook = lloyd_train(pooled, q_bits);
  p.value_indices = sq_apply(p.codebook, pooled);
  const std::size_t bits = ls_sq_bits(p.cols, p.rows, q_bits);
  return {std::move(p), bits};
}

ChannelEstimate bs_decode_ls_sq(const FeedbackPayload& payload) {
  const auto& p = std::get<LsSqPayload>(payload.body);
  if (p.value_indices.size() != static_cast<std::size_t>(2 * p.rows * p.cols))
    throw std::invalid_argument("ls-sq: value index count does not match the dimensions");
  const auto values = sq_reconstruct(p.codebook, p.value_indices);
  ComplexVector v(p.rows * p.cols);
  for (Index i = 0; i < v.size(); ++i)
    v(i) = cdouble(values[static_cast<std::size_t>(2 * i)], values[static_cast<std::size_t>(2 * i + 1)]);
  ChannelEstimate est;
  est.scheme = SchemeKind::LsSq;
  est.h_hat = unvec(v, p.rows, p.cols);
  return est;
}

FeedbackPayload ue_encode_ls_vq(const ComplexMatrix& y, const ComplexMatrix& s, int q_bits, bool* min_norm) {
  if (y.rows() != 1) throw std::invalid_argument("ls-vq: unsupported configuration, requires M_R = 1");
  const LsEstimate ls = ls_estimate(y, s);
  if (min_norm) *min_norm = ls.min_norm;
  LsVqPayload p;
  p.q_bits = q_bits;
  p.psk_indices = psk_vq(ls.h.row(0).transpose(), q_bits);
  const std::size_t bits = ls_vq_bits(ls.h.cols(), q_bits);
  return {std::move(p), bits};
}

ChannelEstimate bs_decode_ls_vq(const FeedbackPayload& payload) {
  const auto& p = std::get<LsVqPayload>(payload.body);
  ChannelEstimate est;
  est.scheme = SchemeKind::LsVq;
  est.h_hat = psk_reconstruct(p.psk_indices, p.q_bits).transpose();
  return est;
}

}  // namespace ddfb
