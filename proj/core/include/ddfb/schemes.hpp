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
#include "ddfb/quantize.hpp"
#include "ddfb/recovery.hpp"

#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

namespace ddfb {

enum class SchemeKind { OmpSq, OneBitCs, OneBitMle, HybridCs, HybridMle, LsSq, LsVq, Perfect };

std::string_view to_string(SchemeKind kind);
/// Throws std::invalid_argument for an unknown name.
SchemeKind scheme_kind_from_string(std::string_view name);

// --- feedback bit formulas -------------------------------------------------

std::size_t omp_sq_bits(std::size_t support_size, Index dictionary_size, int q_bits);
std::size_t onebit_bits(Index n_fb);
std::size_t hybrid_bits(Index n_fb, std::size_t support_size, Index dictionary_size);
std::size_t ls_sq_bits(Index m_tx, Index m_rx, int q_bits);
std::size_t ls_vq_bits(Index m_tx, int q_bits);

// --- payloads ----------------------------------------------------------------

struct OmpSqPayload {
  IndexList support;                         // into vec(G), sorted
  std::vector<std::uint32_t> value_indices;  // Re, Im per support entry
  ScalarCodebook codebook;                   // side information, not counted
  Index dictionary_size = 0;
  int q_bits = 0;
};

struct OneBitPayload {
  SignBits bits;
};

struct HybridPayload {
  IndexList support;
  SignBits bits;
  Index dictionary_size = 0;
};

struct LsSqPayload {
  std::vector<std::uint32_t> value_indices;  // Re, Im per entry, column-major
  ScalarCodebook codebook;                   // side information, not counted
  Index rows = 0;
  Index cols = 0;
  int q_bits = 0;
};

struct LsVqPayload {
  std::vector<std::uint32_t> psk_indices;  // M_T - 1 symbols
  int q_bits = 0;
};

using PayloadBody = std::variant<OmpSqPayload, OneBitPayload, HybridPayload, LsSqPayload, LsVqPayload>;

struct FeedbackPayload {
  PayloadBody body;
  std::size_t bit_count = 0;
};

struct SerializedPayload {
  std::vector<std::uint8_t> bytes;
  std::size_t bit_count = 0;
};

/// Compact layout; the serialized length in bits always equals bit_count.
///
///   OmpSq   per support entry: index (ceil log2 G bits), Re index, Im index (q bits each)
///   OneBit  2 N_fb sign bits, 1 for +1
///   Hybrid  2 N_fb sign bits, then the support indices (ceil log2 G bits each)
///   LsSq    Re, Im index per entry of H_LS in column-major order (q bits each)
///   LsVq    M_T - 1 PSK symbols (q bits each)
SerializedPayload serialize(const FeedbackPayload& payload);

/// What the receiver knows about a payload besides its bits.
struct PayloadLayout {
  SchemeKind kind = SchemeKind::OneBitMle;
  Index dictionary_size = 0;  // G (OmpSq, Hybrid)
  int q_bits = 0;             // OmpSq, LsSq, LsVq
  Index n_fb = 0;             // OneBit*, Hybrid*
  Index rows = 0;             // LsSq: M_R
  Index cols = 0;             // LsSq: M_T
};

/// Inverse of serialize. Side-information codebooks are left empty.
/// Throws std::invalid_argument when the bit count does not fit the layout.
FeedbackPayload deserialize(const SerializedPayload& data, const PayloadLayout& layout);

// --- estimates ---------------------------------------------------------------

struct ChannelEstimate {
  ComplexMatrix h_hat;
  SchemeKind scheme = SchemeKind::Perfect;
  int solver_iterations = 0;
  Index columns_touched = 0;  // dictionary atoms used in the reconstruction
  bool min_norm_ls = false;   // LS baseline solved an underdetermined system
};

/// H = A_R unvec(g) A_T^H using only the nonzero entries of g.
ComplexMatrix reconstruct_channel(const ComplexVector& g, const ComplexMatrix& a_tx, const ComplexMatrix& a_rx,
                                  Index* columns_touched = nullptr);

using OneBitSolver = std::variant<CsConfig, MleConfig>;

// setup 1
FeedbackPayload ue_encode_omp_sq(const ComplexMatrix& y, const ComplexMatrix& q, int max_atoms, double eps,
                                 int q_bits, SparseEstimate* ue_estimate = nullptr);
ChannelEstimate bs_decode_omp_sq(const FeedbackPayload& payload, const ComplexMatrix& a_tx,
                                 const ComplexMatrix& a_rx);

// setup 2
FeedbackPayload ue_encode_onebit(const ComplexMatrix& y, const ComplexMatrix& p);
ChannelEstimate bs_decode_onebit(const FeedbackPayload& payload, const RealMatrix& c, const OneBitSolver& solver,
                                 const ComplexMatrix& a_tx, const ComplexMatrix& a_rx, double c_norm_sq = -1.0);

// setup 3
FeedbackPayload ue_encode_hybrid(const ComplexMatrix& y, const ComplexMatrix& q, const ComplexMatrix& p,
                                 int max_atoms, double eps);
/// Solves on the rows S_g u (G + S_g) of C; an empty support falls back to the
/// full-dimension solve.
ChannelEstimate bs_decode_hybrid(const FeedbackPayload& payload, const RealMatrix& c, const OneBitSolver& solver,
                                 const ComplexMatrix& a_tx, const ComplexMatrix& a_rx);
/// Same, building only the needed rows of C from Q and P.
ChannelEstimate bs_decode_hybrid(const FeedbackPayload& payload, const ComplexMatrix& q, const ComplexMatrix& p,
                                 const OneBitSolver& solver, const ComplexMatrix& a_tx, const ComplexMatrix& a_rx);

// least-squares baselines
struct LsEstimate {
  ComplexMatrix h;
  bool min_norm = false;
};

/// H_LS = Y S^+.
LsEstimate ls_estimate(const ComplexMatrix& y, const ComplexMatrix& s);

FeedbackPayload ue_encode_ls_sq(const ComplexMatrix& y, const ComplexMatrix& s, int q_bits, bool* min_norm = nullptr);
ChannelEstimate bs_decode_ls_sq(const FeedbackPayload& payload);

/// Requires a single receive antenna; throws std::invalid_argument otherwise.
FeedbackPayload ue_encode_ls_vq(const ComplexMatrix& y, const ComplexMatrix& s, int q_bits, bool* min_norm = nullptr);
ChannelEstimate bs_decode_ls_vq(const FeedbackPayload& payload);

}  // namespace ddfb
