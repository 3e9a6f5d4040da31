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

#include "ddfb/channel.hpp"
#include "ddfb/numerics.hpp"
#include "ddfb/rng.hpp"

#include <utility>
#include <vector>

namespace ddfb {

enum class GridConstruction { Uniform, Companded };

struct AngleDictionary {
  std::vector<double> angles;  // strictly increasing, inside [lower, upper)
  GridConstruction construction = GridConstruction::Uniform;
  double lower = -kPi / 2;
  double upper = kPi / 2;

  Index size() const { return static_cast<Index>(angles.size()); }
};

/// { a + j (b - a) / (n + 1) : j = 1..n }; both endpoints excluded.
AngleDictionary uniform_grid(double a, double b, int n);

/// Closed-form integral of the 3GPP amplitude pattern from `a` to `phi`.
/// Requires a <= -knee <= knee <= b and phi in [a, b); throws std::domain_error otherwise.
double cumulative_3gpp(double phi, const ThreeGppPattern& pattern, double a, double b);

/// Closed-form inverse of cumulative_3gpp on [0, G(b)); throws std::domain_error outside.
double inverse_cumulative_3gpp(double y, const ThreeGppPattern& pattern, double a, double b);

/// Cumulative pattern integral G(phi) = int_a^phi q(x) dx over [a, b) and its inverse.
///
/// Uses the closed form for a 3GPP pattern whose parabolic region lies inside
/// [a, b); any other case goes through adaptive Gauss-Kronrod quadrature and
/// a safeguarded Newton inversion (to 1e-10 in angle or better).
class PatternCumulative {
 public:
  PatternCumulative(DirectivityPattern pattern, double a, double b);

  double operator()(double phi) const;
  double inverse(double y) const;
  double total() const { return total_; }
  bool closed_form() const { return closed_form_; }

 private:
  double integrate(double lo, double hi) const;

  DirectivityPattern pattern_;
  double a_;
  double b_;
  bool closed_form_ = false;
  double total_ = 0.0;
};

/// Equal-area partition of the pattern over [a, b) into n + 1 cells; returns
/// the n interior cut points. Throws std::invalid_argument if the pattern is
/// not strictly positive on [a, b).
AngleDictionary companded_grid(const DirectivityPattern& pattern, double a, double b, int n);

/// Column k of the first matrix is c_T(phi_k) a_T(phi_k) for phi_k in dict_tx;
/// likewise for the receive side.
std::pair<ComplexMatrix, ComplexMatrix> build_dictionary_matrices(const AngleDictionary& dict_tx,
                                                                  const AngleDictionary& dict_rx,
                                                                  const Antenna& tx,
                                                                  const Antenna& rx);

/// Q = (S^T conj(A_T)) kron A_R, of size (M_R N_tr) x (G_T G_R).
ComplexMatrix build_sensing(const ComplexMatrix& s, const ComplexMatrix& a_tx, const ComplexMatrix& a_rx);

/// N x N unitary DFT column `k`.
ComplexVector dft_column(Index n, Index k);

/// N_fb distinct, sorted, uniformly chosen columns of the unitary N-point DFT.
ComplexMatrix build_compression(Index n, Index n_fb, Rng& rng);

/// Same as build_compression with an explicit column selection.
ComplexMatrix build_compression(Index n, const std::vector<Index>& columns);

/// C = [C_re C_im] in R^{2G x 2N_fb} such that
/// Re(P^H Q g) = C_re^T x and Im(P^H Q g) = C_im^T x for x = [Re g; Im g].
RealMatrix build_real_stacked(const ComplexMatrix& q, const ComplexMatrix& p);

/// Rows of build_real_stacked(q, p) for the real-stacked support
/// S_x = S_g u (G + S_g), computed without forming the full matrix.
RealMatrix real_stacked_rows(const ComplexMatrix& q, const ComplexMatrix& p, const IndexList& support_g);

/// S_g u (G + S_g), sorted.
IndexList stacked_support(const IndexList& support_g, Index dictionary_size);

/// The shared protocol objects of one link: dictionaries, training,
/// compression and the derived sensing matrices.
struct DictionaryMatrices {
  ComplexMatrix a_tx;  // M_T x G_T
  ComplexMatrix a_rx;  // M_R x G_R
  ComplexMatrix s;     // M_T x N_tr
  ComplexMatrix q;     // M_R N_tr x G
  ComplexMatrix p;     // M_R N_tr x N_fb (may be empty when unused)
  RealMatrix c;        // 2G x 2N_fb (may be empty when unused)

  Index g_tx() const { return a_tx.cols(); }
  Index g_rx() const { return a_rx.cols(); }
  Index dictionary_size() const { return a_tx.cols() * a_rx.cols(); }
};

}  // namespace ddfb
