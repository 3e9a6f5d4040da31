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
#include "ddfb/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddfb {

ComplexVector SparseEstimate::complex_estimate() const {
  if (x.size() > 0) return complex_from_stacked(x);
  return g;
}

void validate(const MleConfig& cfg) {
  if (!(cfg.zeta.value >= 0.0)) throw std::invalid_argument("mle: zeta must be >= 0");
  if (!(cfg.sigma_z > 0.0)) throw std::invalid_argument("mle: sigma_z must be > 0");
  if (cfg.max_iters < 1) throw std::invalid_argument("mle: max_iters must be >= 1");
  if (!(cfg.rel_tol >= 0.0)) throw std::invalid_argument("mle: rel_tol must be >= 0");
}

void validate(const CsConfig& cfg) {
  if (!(cfg.zeta.value >= 0.0)) throw std::invalid_argument("cs: zeta must be >= 0");
  if (!(cfg.r2 > 0.0)) throw std::invalid_argument("cs: r2 must be > 0");
}

// --- OMP ---------------------------------------------------------------------

SparseEstimate omp(const ComplexMatrix& q, const ComplexVector& y, int max_atoms, double eps,
                   OmpStats* stats) {
  if (q.rows() != y.size()) throw std::invalid_argument("omp: Q and y not conformable");
  if (max_atoms < 1) throw std::invalid_argument("omp: max_atoms must be >= 1");

  SparseEstimate out;
  out.g = ComplexVector::Zero(q.cols());
  ComplexVector r = y;
  IndexList support;
  ComplexVector coef;
  const Index cap = std::min<Index>(max_atoms, std::min(q.rows(), q.cols()));

  while (static_cast<Index>(support.size()) < cap) {
    const ComplexVector corr = q.adjoint() * r;
    Index best = 0;
    double best_mag = -1.0;
    for (Index n = 0; n < corr.size(); ++n) {
      const double mag = std::norm(corr(n));
      if (mag > best_mag) {
        best_mag = mag;
        best = n;
      }
    }
    if (std::sqrt(best_mag) <= eps) break;
    // A refit zeroes the correlation on the support, so `best` is new unless
    // the remaining correlation is pure round-off.
    if (std::find(support.begin(), support.end(), best) != support.end()) break;
    support.push_back(best);

    ComplexMatrix qs(q.rows(), static_cast<Index>(support.size()));
    for (std::size_t k = 0; k < support.size(); ++k) qs.col(static_cast<Index>(k)) = q.col(support[k]);
    coef = pseudo_inverse_apply(qs, y).value.col(0);
    r = y - qs * coef;
    ++out.iterations;
    if (stats) stats->residual_norms.push_back(r.norm());
  }

  for (std::size_t k = 0; k < support.size(); ++k) out.g(support[k]) = coef(static_cast<Index>(k));
  out.support = nonzero_support(out.g);
  out.residual_norm = r.norm();
  return out;
}

double omp_default_eps(const ComplexMatrix& q, double sigma) {
  std::vector<double> norms(static_cast<std::size_t>(q.cols()));
  for (Index k = 0; k < q.cols(); ++k) norms[static_cast<std::size_t>(k)] = q.col(k).norm();
  const auto mid = norms.begin() + static_cast<std::ptrdiff_t>(norms.size() / 2);
  std::nth_element(norms.begin(), mid, norms.end());
  double median = *mid;
  if (norms.size() % 2 == 0) {
    const double lower = *std::max_element(norms.begin(), mid);
    median = 0.5 * (median + lower);
  }
  return sigma * std::sqrt(2.0 * std::log(static_cast<double>(q.cols()))) * median;
}

// --- one-bit CS ------------------------------------------------------------

RealVector shrink(double v, const RealVector& x) {
  if (v < 0.0) throw std::invalid_argument("shrink: threshold must be >= 0");
  RealVector out(x.size());
  for (Index i = 0; i < x.size(); ++i) {
    const double a = std::abs(x(i)) - v;
    out(i) = a > 0.0 ? std::copysign(a, x(i)) : 0.0;
  }
  return out;
}

double resolve_cs_zeta(const ZetaRule& rule, const RealVector& cb) {
  if (rule.kind == ZetaRule::Kind::Absolute) return rule.value;
  return rule.value * (cb.size() ? cb.cwiseAbs().maxCoeff() : 0.0);
}

double cs_objective(const RealMatrix& c, const RealVector& b, const RealVector& x, double zeta) {
  return -x.dot(c * b) + zeta * x.lpNorm<1>();
}

SparseEstimate onebit_cs(const RealMatrix& c, const SignBits& b, const CsConfig& cfg) {
  validate(cfg);
  if (c.cols() != static_cast<Index>(b.size())) throw std::invalid_argument("onebit_cs: C and b not conformable");
  const RealVector bv = b.as_vector();
  const RealVector w = c * bv;
  const double zeta = resolve_cs_zeta(cfg.zeta, w);

  SparseEstimate out;
  out.iterations = 1;
  out.x = RealVector::Zero(c.rows());
  if (w.size() > 0 && w.cwiseAbs().maxCoeff() > zeta) {
    const RealVector s = shrink(zeta, w);
    out.x = (cfg.r2 / s.norm()) * s;
  }
  out.support = nonzero_support(out.x);
  out.objective = -out.x.dot(w) + zeta * out.x.lpNorm<1>();
  return out;
}

// --- one-bit MLE -------------------------------------------------------------

namespace {

// Margins t_i = -b_i c_i^T x / sigma_z.
RealVector margins(const RealMatrix& c, const RealVector& b, const RealVector& x, double sigma_z) {
  if (c.cols() != b.size() || c.rows() != x.size())
    throw std::invalid_argument("mle: C, b and x not conformable");
  return -(b.array() * (c.transpose() * x).array()) / sigma_z;
}

double objective_from_margins(const RealVector& t) {
  double f = 0.0;
  for (Index i = 0; i < t.size(); ++i) f -= log_q_stable(t(i));
  return f;
}

struct LocalModel {
  RealVector grad;
  double max_curvature = 0.0;  // max_i m_i
};

LocalModel local_model(const RealMatrix& c, const RealVector& b, const RealVector& t, double sigma_z) {
  RealVector w(t.size());
  double m_max = 0.0;
  for (Index i = 0; i < t.size(); ++i) {
    const double r = inverse_mills_ratio(t(i));
    w(i) = -b(i) * r / sigma_z;
    m_max = std::max(m_max, std::clamp(r * (r - t(i)), 0.0, 1.0));
  }
  return {c * w, m_max / (sigma_z * sigma_z)};
}

}  // namespace

double mle_objective(const RealMatrix& c, const RealVector& b, const RealVector& x, double sigma_z) {
  return objective_from_margins(margins(c, b, x, sigma_z));
}

RealVector mle_gradient(const RealMatrix& c, const RealVector& b, const RealVector& x, double sigma_z) {
  return local_model(c, b, margins(c, b, x, sigma_z), sigma_z).grad;
}

RealVector mle_curvature(const RealMatrix& c, const RealVector& b, const RealVector& x, double sigma_z) {
  const RealVector t = margins(c, b, x, sigma_z);
  RealVector m(t.size());
  for (Index i = 0; i < t.size(); ++i) {
    const double r = inverse_mills_ratio(t(i));
    // r (r - t) lies in [0, 1]; clamp the round-off at the extremes.
    m(i) = std::clamp(r * (r - t(i)), 0.0, 1.0) / (sigma_z * sigma_z);
  }
  return m;
}

double mle_lipschitz(double c_norm_sq, const RealMatrix& c, const RealVector& b, const RealVector& x,
                     double sigma_z) {
  return c_norm_sq * mle_curvature(c, b, x, sigma_z).cwiseAbs().maxCoeff();
}

double resolve_mle_zeta(const ZetaRule& rule, const RealMatrix& c, const RealVector& b, double sigma_z) {
  if (rule.kind == ZetaRule::Kind::Absolute) return rule.value;
  // grad f(0) = -sqrt(2/pi) / sigma_z * C b
  const RealVector cb = c * b;
  const double g0 = std::sqrt(2.0 / kPi) / sigma_z * (cb.size() ? cb.cwiseAbs().maxCoeff() : 0.0);
  return rule.value * g0;
}

SparseEstimate mle_fista(const RealMatrix& c, const SignBits& bits, const MleConfig& cfg, const RealVector& x0,
                         double c_norm_sq, FistaTrace* trace) {
  validate(cfg);
  const RealVector b = bits.as_vector();
  if (c.cols() != b.size()) throw std::invalid_argument("mle_fista: C and b not conformable");
  if (x0.size() != 0 && x0.size() != c.rows()) throw std::invalid_argument("mle_fista: x0 has wrong length");
  if (c_norm_sq < 0.0) c_norm_sq = spectral_norm_sq(c);
  const double zeta = resolve_mle_zeta(cfg.zeta, c, b, cfg.sigma_z);
  auto penalized = [&](const RealVector& v) {
    return mle_objective(c, b, v, cfg.sigma_z) + zeta * v.lpNorm<1>();
  };

  RealVector x = x0.size() ? x0 : RealVector::Zero(c.rows());
  RealVector u = x;
  double f_x = penalized(x);
  double beta = 1.0;
  // m_i <= 1 / sigma_z^2, so this bound is a global Lipschitz constant of grad f.
  const double lip_cap = c_norm_sq / (cfg.sigma_z * cfg.sigma_z);

  SparseEstimate out;
  out.converged = false;
  if (!(lip_cap > 0.0) || !std::isfinite(lip_cap)) {
    out.converged = true;  // C = 0: the objective does not depend on x
    out.iterations = 0;
  }
  for (int it = 0; it < cfg.max_iters && !out.converged; ++it) {
    const RealVector t_u = margins(c, b, u, cfg.sigma_z);
    const LocalModel model = local_model(c, b, t_u, cfg.sigma_z);
    const double smooth_u = objective_from_margins(t_u);
    ++out.iterations;

    // Start from the local curvature bound and double until the quadratic
    // model majorizes f at the trial point; the global bound always does.
    double lip = c_norm_sq * model.max_curvature;
    if (!(lip > 0.0) || !std::isfinite(lip)) lip = lip_cap;
    lip = std::min(lip, lip_cap);
    RealVector x_new;
    double smooth_new = 0.0;
    for (;;) {
      x_new = shrink(zeta / lip, u - model.grad / lip);
      const RealVector d = x_new - u;
      smooth_new = mle_objective(c, b, x_new, cfg.sigma_z);
      const double bound = smooth_u + model.grad.dot(d) + 0.5 * lip * d.squaredNorm();
      if (smooth_new <= bound + 1e-12 * std::abs(bound) || lip >= lip_cap) break;
      lip = std::min(2.0 * lip, lip_cap);
    }
    const double f_new = smooth_new + zeta * x_new.lpNorm<1>();

    // Momentum overshoot that raises the objective: drop it and step from x.
    if (f_new > f_x && u != x) {
      beta = 1.0;
      u = x;
      ++out.restarts;
      if (trace) trace->steps.push_back({f_x, 1.0 / lip, true});
      continue;
    }

    // Gradient-restart test on the composite gradient mapping L (u - x_new),
    // which equals grad f(u) when the l1 term is inactive.
    const RealVector dx = x_new - x;
    const bool restart = (u - x_new).dot(dx) > 0.0;
    if (restart) {
      beta = 1.0;
      u = x_new;
      ++out.restarts;
    } else {
      const double beta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * beta * beta));
      u = x_new + ((beta - 1.0) / beta_next) * dx;
      beta = beta_next;
    }
    if (trace) trace->steps.push_back({f_new, 1.0 / lip, restart});
    const double step_norm = dx.norm();
    const double ref = x.norm();
    x = std::move(x_new);
    f_x = f_new;
    if (step_norm <= cfg.rel_tol * ref || step_norm == 0.0) out.converged = true;
  }

  out.x = std::move(x);
  out.support = nonzero_support(out.x);
  out.objective = penalized(out.x);
  return out;
}

// --- reduced support -------------------------------------------------------

void check_support(const IndexList& support, Index n) {
  for (std::size_t k = 0; k < support.size(); ++k) {
    if (support[k] < 0 || support[k] >= n) throw std::invalid_argument("support index out of range");
    if (k > 0 && support[k] <= support[k - 1])
      throw std::invalid_argument("support must be strictly increasing (no duplicates)");
  }
}

RealMatrix restrict_columns(const RealMatrix& c, const IndexList& support) {
  check_support(support, c.rows());
  RealMatrix out(static_cast<Index>(support.size()), c.cols());
  for (std::size_t k = 0; k < support.size(); ++k) out.row(static_cast<Index>(k)) = c.row(support[k]);
  return out;
}

RealVector embed(const RealVector& reduced, const IndexList& support, Index n) {
  if (reduced.size() != static_cast<Index>(support.size()))
    throw std::invalid_argument("embed: reduced vector and support differ in length");
  check_support(support, n);
  RealVector out = RealVector::Zero(n);
  for (std::size_t k = 0; k < support.size(); ++k) out(support[k]) = reduced(static_cast<Index>(k));
  return out;
}

IndexList nonzero_support(const RealVector& x) {
  IndexList s;
  for (Index i = 0; i < x.size(); ++i)
    if (x(i) != 0.0) s.push_back(i);
  return s;
}

IndexList nonzero_support(const ComplexVector& g) {
  IndexList s;
  for (Index i = 0; i < g.size(); ++i)
    if (g(i) != cdouble(0.0, 0.0)) s.push_back(i);
  return s;
}

ComplexVector complex_from_stacked(const RealVector& x) {
  if (x.size() % 2 != 0) throw std::invalid_argument("complex_from_stacked: odd length");
  const Index g = x.size() / 2;
  ComplexVector out(g);
  for (Index i = 0; i < g; ++i) out(i) = cdouble(x(i), x(g + i));
  return out;
}

RealVector stacked_from_complex(const ComplexVector& g) {
  RealVector x(2 * g.size());
  x.head(g.size()) = g.real();
  x.tail(g.size()) = g.imag();
  return x;
}

}  // namespace ddfb
