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

#include <vector>

namespace ddfb {

/// Output of every sparse solver.
///
/// OMP fills `g` (complex, length G) and leaves `x` empty; the one-bit solvers
/// fill `x` (real-stacked [Re g; Im g], length 2G) and leave `g` empty. Use
/// `complex_estimate()` to obtain g in either case. `support` lists the
/// nonzero entries of whichever vector was filled.
struct SparseEstimate {
  ComplexVector g;
  RealVector x;
  IndexList support;
  int iterations = 0;
  int restarts = 0;
  bool converged = true;
  double objective = 0.0;
  double residual_norm = 0.0;

  ComplexVector complex_estimate() const;
};

/// Regularization weight: either an absolute value or a multiple of a
/// problem-dependent scale (the sup-norm of the gradient at zero).
struct ZetaRule {
  enum class Kind { Absolute, RelativeToGradZero };
  Kind kind = Kind::RelativeToGradZero;
  double value = 0.1;

  static ZetaRule absolute(double z) { return {Kind::Absolute, z}; }
  static ZetaRule relative(double factor) { return {Kind::RelativeToGradZero, factor}; }
};

struct MleConfig {
  ZetaRule zeta = ZetaRule::relative(0.1);
  double sigma_z = 1.0;
  int max_iters = 500;
  double rel_tol = 1e-6;
  bool record_trace = false;
};

struct CsConfig {
  ZetaRule zeta = ZetaRule::relative(0.1);
  double r2 = 1.0;
};

void validate(const MleConfig& cfg);
void validate(const CsConfig& cfg);

// --- orthogonal matching pursuit -------------------------------------------

struct OmpStats {
  std::vector<double> residual_norms;  // ||r|| after each refit
};

/// Greedy recovery of y ~ Q g with at most `max_atoms` atoms. Stops early when
/// ||Q^H r||_inf <= eps. Ties in the correlation go to the smallest index.
SparseEstimate omp(const ComplexMatrix& q, const ComplexVector& y, int max_atoms, double eps,
                   OmpStats* stats = nullptr);

/// sigma * sqrt(2 ln G) * median column norm of Q.
double omp_default_eps(const ComplexMatrix& q, double sigma);

// --- one-bit compressed sensing -------------------------------------------

/// Element-wise soft threshold (|x_i| - v)_+ sign(x_i).
RealVector shrink(double v, const RealVector& x);

/// Resolves the CS threshold against ||C b||_inf.
double resolve_cs_zeta(const ZetaRule& rule, const RealVector& cb);

/// -x^T C b + zeta ||x||_1.
double cs_objective(const RealMatrix& c, const RealVector& b, const RealVector& x, double zeta);

/// Closed-form minimizer of -x^T C b + zeta ||x||_1 over ||x||_2 <= r2.
SparseEstimate onebit_cs(const RealMatrix& c, const SignBits& b, const CsConfig& cfg);

// --- one-bit maximum likelihood ---------------------------------------------

/// f(x) = -sum_i ln Q(-b_i c_i^T x / sigma_z), c_i the i-th column of C.
double mle_objective(const RealMatrix& c, const RealVector& b, const RealVector& x, double sigma_z);

RealVector mle_gradient(const RealMatrix& c, const RealVector& b, const RealVector& x, double sigma_z);

/// Diagonal curvature weights m_i(x) of the Hessian C diag(m) C^T; all >= 0.
RealVector mle_curvature(const RealMatrix& c, const RealVector& b, const RealVector& x, double sigma_z);

/// ||C||_2^2 * ||m(x)||_inf.
double mle_lipschitz(double c_norm_sq, const RealMatrix& c, const RealVector& b, const RealVector& x,
                     double sigma_z);

/// Resolves the MLE weight against ||grad f(0)||_inf.
double resolve_mle_zeta(const ZetaRule& rule, const RealMatrix& c, const RealVector& b, double sigma_z);

struct FistaStep {
  double objective;  // f + zeta ||.||_1 at the new iterate
  double step;       // 1 / L(u)
  bool restarted;
};

struct FistaTrace {
  std::vector<FistaStep> steps;
};

/// Accelerated proximal gradient with gradient-based adaptive restart
/// (momentum reset when the gradient mapping at u opposes the last step).
/// The step 1/L starts from the local curvature bound ||C||^2 max_i m_i(u)
/// and backtracks (doubling L, capped at ||C||^2 / sigma_z^2) until the
/// quadratic model majorizes f; a momentum step that would raise the
/// objective is discarded, so objectives are non-increasing.
///
/// Stops after cfg.max_iters iterations or once ||x^{t+1} - x^t|| <=
/// cfg.rel_tol * ||x^t|| (which includes a vanishing step at x^t = 0).
/// `c_norm_sq` may be passed to reuse a precomputed ||C||_2^2 (negative means
/// compute it here).
SparseEstimate mle_fista(const RealMatrix& c, const SignBits& b, const MleConfig& cfg,
                         const RealVector& x0 = {}, double c_norm_sq = -1.0, FistaTrace* trace = nullptr);

// --- reduced-support helpers -----------------------------------------------

/// Rows of C listed in `support` (sorted, distinct, in range; throws otherwise).
RealMatrix restrict_columns(const RealMatrix& c, const IndexList& support);

/// Scatters `reduced` into a zero vector of length n at the positions in `support`.
RealVector embed(const RealVector& reduced, const IndexList& support, Index n);

/// Throws std::invalid_argument unless `support` is strictly increasing and inside [0, n).
void check_support(const IndexList& support, Index n);

/// Indices of the nonzero entries.
IndexList nonzero_support(const RealVector& x);
IndexList nonzero_support(const ComplexVector& g);

/// g = x[0:G] + j x[G:2G].
ComplexVector complex_from_stacked(const RealVector& x);
RealVector stacked_from_complex(const ComplexVector& g);

}  // namespace ddfb
