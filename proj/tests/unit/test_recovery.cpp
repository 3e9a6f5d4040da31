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
#include "ddfb/dictionary.hpp"
#include "ddfb/recovery.hpp"

#include "../support/oracles.hpp"
#include "../support/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ddfb;
using testing_support::Gen;

namespace {

struct Instance {
  RealMatrix c;
  RealVector b;
  SignBits bits;
};

// One-bit measurements of a sparse planted vector through a random C.
Instance planted(Gen& g, Index n, Index m, int nonzeros, double sigma) {
  Instance in;
  in.c = testing_support::random_real(g, n, m);
  RealVector x = RealVector::Zero(n);
  for (int k = 0; k < nonzeros; ++k) x(testing_support::uniform_int(g, 0, static_cast<int>(n) - 1)) = testing_support::uniform(g, -2, 2);
  std::normal_distribution<double> noise(0.0, sigma);
  in.b.resize(m);
  const RealVector z = in.c.transpose() * x;
  for (Index i = 0; i < m; ++i) in.b(i) = z(i) + noise(g) >= 0 ? 1.0 : -1.0;
  in.bits = testing_support::to_sign_bits(in.b);
  return in;
}

}  // namespace

TEST_SUITE("recovery") {
  TEST_CASE("OMP recovers a single atom exactly") {
    Gen g(1);
    const ComplexMatrix q = testing_support::random_complex(g, 20, 50);
    const cdouble coef(1.5, -0.25);
    const auto est = omp(q, coef * q.col(17), 5, 1e-9);
    CHECK(est.support == IndexList{17});
    CHECK(std::abs(est.g(17) - coef) < 1e-10);
    CHECK(est.iterations == 1);
    CHECK(est.x.size() == 0);
    CHECK(est.complex_estimate().size() == 50);
  }

  TEST_CASE("OMP on zero input and argument checks") {
    Gen g(2);
    const ComplexMatrix q = testing_support::random_complex(g, 8, 12);
    const auto est = omp(q, ComplexVector::Zero(8), 4, 1e-12);
    CHECK(est.support.empty());
    CHECK(est.g.norm() == 0.0);
    CHECK_THROWS_AS(omp(q, ComplexVector::Zero(7), 4, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(omp(q, ComplexVector::Zero(8), 0, 0.0), std::invalid_argument);
  }

  TEST_CASE("OMP residual is orthogonal to the selected atoms") {
    Gen g(3);
    const ComplexMatrix q = testing_support::random_complex(g, 30, 80);
    const ComplexVector y = testing_support::random_complex(g, 30, 1);
    OmpStats stats;
    const auto est = omp(q, y, 10, 0.0, &stats);
    CHECK(est.support.size() == 10);
    CHECK(stats.residual_norms.size() == 10);
    const ComplexVector r = y - q * est.g;
    for (Index s : est.support) CHECK(std::abs(q.col(s).dot(r)) < 1e-8);
    CHECK(std::abs(r.norm() - est.residual_norm) < 1e-10);
  }

  TEST_CASE("OMP stops at the threshold and on ties picks the smallest index") {
    ComplexMatrix q = ComplexMatrix::Identity(4, 4);
    ComplexVector y(4);
    y << 0.0, 2.0, 2.0, 0.1;
    const auto est = omp(q, y, 4, 0.5);
    CHECK(est.support == IndexList{1, 2});
    CHECK(est.iterations == 2);
    const auto first = omp(q, y, 1, 0.0);
    CHECK(first.support == IndexList{1});
  }

  TEST_CASE("OMP recovers sparse vectors from incoherent measurements") {
    Gen g(4);
    int exact = 0;
    const int trials = 200;
    for (int t = 0; t < trials; ++t) {
      const ComplexMatrix q = testing_support::random_complex(g, 48, 120);
      IndexList truth;
      while (truth.size() < 4) {
        const Index j = testing_support::uniform_int(g, 0, 119);
        if (std::find(truth.begin(), truth.end(), j) == truth.end()) truth.push_back(j);
      }
      std::sort(truth.begin(), truth.end());
      ComplexVector x = ComplexVector::Zero(120);
      for (Index j : truth) x(j) = std::polar(testing_support::uniform(g, 0.5, 1.5), testing_support::uniform(g, 0, 6.3));
      const auto est = omp(q, q * x, 4, 1e-9);
      exact += est.support == truth && (est.g - x).norm() < 1e-9 * x.norm();
    }
    CHECK(exact >= 190);
  }

  TEST_CASE("OMP finds a single atom of a column-normalized sensing matrix") {
    const Antenna tx{ArrayConfig{32, 0.5}, IsotropicPattern{}};
    const Antenna rx{ArrayConfig{2, 0.5}, IsotropicPattern{}};
    const auto [at, ar] = build_dictionary_matrices(uniform_grid(-kPi / 2, kPi / 2, 64),
                                                    uniform_grid(-kPi / 2, kPi / 2, 8), tx, rx);
    Rng rng(5);
    // Correlations are not normalized, so equal column norms make the true atom
    // the unique maximizer (Cauchy-Schwarz) despite the coherent receive grid.
    ComplexMatrix q = build_sensing(training_matrix(32, 32, 1.0, rng), at, ar);
    q.colwise().normalize();
    for (Index j = 0; j < q.cols(); j += 7) {
      const auto est = omp(q, cdouble(0.0, 2.0) * q.col(j), 1, 0.0);
      CHECK(est.support == IndexList{j});
    }
  }

  TEST_CASE("omp_default_eps") {
    ComplexMatrix q = ComplexMatrix::Zero(3, 4);
    q(0, 0) = 1.0;
    q(0, 1) = 2.0;
    q(0, 2) = 3.0;
    q(0, 3) = 10.0;
    CHECK(omp_default_eps(q, 0.5) == doctest::Approx(0.5 * std::sqrt(2.0 * std::log(4.0)) * 2.5).epsilon(1e-14));
  }

  TEST_CASE("shrink") {
    RealVector x(3);
    x << 2.0, -3.0, 0.5;
    RealVector expected(3);
    expected << 1.0, -2.0, 0.0;
    CHECK(shrink(1.0, x) == expected);
    CHECK(shrink(0.0, x) == x);
    CHECK(shrink(3.0, x).norm() == 0.0);
    CHECK_THROWS_AS(shrink(-1.0, x), std::invalid_argument);
  }

  TEST_CASE("one-bit CS closed form") {
    Gen g(5);
    for (int k = 0; k < 10; ++k) {
      const Index n = testing_support::uniform_int(g, 6, 12);
      const auto in = planted(g, n, 16, 2, 0.1);
      const RealVector w = in.c * in.b;
      CsConfig cfg;
      cfg.zeta = ZetaRule::absolute(0.3 * w.cwiseAbs().maxCoeff());
      cfg.r2 = testing_support::uniform(g, 0.5, 3.0);
      const auto est = onebit_cs(in.c, in.bits, cfg);
      CHECK(std::abs(est.x.norm() - cfg.r2) < 1e-12);
      const double zeta = cfg.zeta.value;
      const double oracle_best = oracle::cs_subgradient_min(w, zeta, cfg.r2, 200000);
      CHECK(est.objective <= oracle_best + 1e-4);
      CHECK(est.objective == doctest::Approx(cs_objective(in.c, in.b, est.x, zeta)).epsilon(1e-12));
    }
    const auto in = planted(g, 8, 10, 2, 0.1);
    CsConfig big;
    big.zeta = ZetaRule::relative(1.01);
    const auto zero = onebit_cs(in.c, in.bits, big);
    CHECK(zero.x.norm() == 0.0);
    CHECK(zero.support.empty());
    CsConfig bad;
    bad.r2 = 0.0;
    CHECK_THROWS_AS(onebit_cs(in.c, in.bits, bad), std::invalid_argument);
  }

  TEST_CASE("MLE objective and gradient") {
    Gen g(6);
    const auto in = planted(g, 8, 12, 3, 0.5);
    const double sz = 0.7;
    CHECK(mle_objective(in.c, in.b, RealVector::Zero(8), sz) == doctest::Approx(12.0 * std::log(2.0)).epsilon(1e-14));
    for (int k = 0; k < 5; ++k) {
      const RealVector x = testing_support::random_real(g, 8, 1);
      CHECK(mle_objective(in.c, in.b, x, sz) == doctest::Approx(oracle::mle_smooth(in.c, in.b, x, sz)).epsilon(1e-12));
      CHECK(mle_objective(in.c, -in.b, -x, sz) == doctest::Approx(mle_objective(in.c, in.b, x, sz)).epsilon(1e-14));
      const RealVector fd = oracle::fd_gradient(
          [&](const RealVector& v) { return oracle::mle_smooth(in.c, in.b, v, sz); }, x, 1e-5);
      CHECK((mle_gradient(in.c, in.b, x, sz) - fd).cwiseAbs().maxCoeff() < 1e-5);
      CHECK((mle_gradient(in.c, in.b, x, sz) - oracle::mle_smooth_gradient(in.c, in.b, x, sz)).cwiseAbs().maxCoeff() <
            1e-10);
    }
    // Deep-tail probes stay finite.
    const RealVector far = 1e4 * testing_support::random_real(g, 8, 1);
    CHECK(std::isfinite(mle_objective(in.c, in.b, far, sz)));
    CHECK(mle_gradient(in.c, in.b, far, sz).allFinite());
  }

  TEST_CASE("MLE curvature and Lipschitz bound") {
    Gen g(7);
    const auto in = planted(g, 6, 10, 2, 0.5);
    const double sz = 0.8;
    const double cn = spectral_norm_sq(in.c);
    const RealVector m0 = mle_curvature(in.c, in.b, RealVector::Zero(6), sz);
    for (Index i = 0; i < m0.size(); ++i) CHECK(m0(i) == doctest::Approx(2.0 / (kPi * sz * sz)).epsilon(1e-13));
    CHECK(mle_lipschitz(cn, in.c, in.b, RealVector::Zero(6), sz) == doctest::Approx(cn * 2.0 / (kPi * sz * sz)).epsilon(1e-12));
    for (int k = 0; k < 20; ++k) {
      const RealVector x = 3.0 * testing_support::random_real(g, 6, 1);
      const RealVector m = mle_curvature(in.c, in.b, x, sz);
      CHECK(m.minCoeff() >= 0.0);
      const RealMatrix hess =
          oracle::fd_hessian([&](const RealVector& v) { return oracle::mle_smooth(in.c, in.b, v, sz); }, x, 1e-4);
      const double hnorm = Eigen::SelfAdjointEigenSolver<RealMatrix>(hess).eigenvalues().cwiseAbs().maxCoeff();
      CHECK(mle_lipschitz(cn, in.c, in.b, x, sz) >= hnorm * (1.0 - 1e-6));
      // The Hessian is C diag(m) C^T.
      const RealMatrix exact = in.c * m.asDiagonal() * in.c.transpose();
      CHECK((exact - hess).cwiseAbs().maxCoeff() < 1e-5 * std::max(1.0, exact.cwiseAbs().maxCoeff()));
    }
  }

  TEST_CASE("FISTA returns zero when zeta dominates the gradient at zero") {
    Gen g(8);
    const auto in = planted(g, 10, 14, 2, 0.3);
    MleConfig cfg;
    cfg.sigma_z = 0.5;
    cfg.zeta = ZetaRule::relative(1.01);
    const auto est = mle_fista(in.c, in.bits, cfg);
    CHECK(est.x.norm() == 0.0);
    CHECK(est.converged);
    CHECK(est.support.empty());
  }

  TEST_CASE("FISTA objectives are non-increasing and traced") {
    Gen g(9);
    const auto in = planted(g, 8, 12, 2, 0.3);
    MleConfig cfg;
    cfg.sigma_z = 0.5;
    cfg.zeta = ZetaRule::relative(0.05);
    cfg.max_iters = 50;
    cfg.rel_tol = 0.0;
    FistaTrace trace;
    const auto est = mle_fista(in.c, in.bits, cfg, {}, -1.0, &trace);
    CHECK(est.iterations <= 50);
    REQUIRE(trace.steps.size() == static_cast<std::size_t>(est.iterations));
    REQUIRE_FALSE(trace.steps.empty());
    CHECK(trace.steps.front().objective <= 12.0 * std::log(2.0));
    for (std::size_t k = 1; k < trace.steps.size(); ++k)
      CHECK(trace.steps[k].objective <= trace.steps[k - 1].objective + 1e-12);
    CHECK(trace.steps.back().objective == doctest::Approx(est.objective).epsilon(1e-12));
    for (const auto& st : trace.steps) CHECK(st.step > 0.0);
  }

  TEST_CASE("FISTA reaches the plain proximal-gradient optimum") {
    Gen g(10);
    for (int k = 0; k < 3; ++k) {
      const auto in = planted(g, 8, 12, 2, 0.5);
      MleConfig cfg;
      cfg.sigma_z = 0.6;
      cfg.zeta = ZetaRule::relative(0.1);
      cfg.max_iters = 20000;
      cfg.rel_tol = 1e-12;
      const auto est = mle_fista(in.c, in.bits, cfg);
      const double zeta = resolve_mle_zeta(cfg.zeta, in.c, in.b, cfg.sigma_z);
      const RealVector ref = oracle::ista(in.c, in.b, cfg.sigma_z, zeta, 100000);
      const double ref_obj = oracle::mle_smooth(in.c, in.b, ref, cfg.sigma_z) + zeta * ref.lpNorm<1>();
      CHECK(est.objective <= ref_obj + 1e-4);
    }
  }

  TEST_CASE("zeta resolution") {
    Gen g(11);
    const auto in = planted(g, 5, 7, 1, 0.5);
    const RealVector cb = in.c * in.b;
    CHECK(resolve_cs_zeta(ZetaRule::relative(0.2), cb) == doctest::Approx(0.2 * cb.cwiseAbs().maxCoeff()));
    CHECK(resolve_cs_zeta(ZetaRule::absolute(0.7), cb) == 0.7);
    const RealVector g0 = mle_gradient(in.c, in.b, RealVector::Zero(5), 0.4);
    CHECK(resolve_mle_zeta(ZetaRule::relative(0.3), in.c, in.b, 0.4) ==
          doctest::Approx(0.3 * g0.cwiseAbs().maxCoeff()).epsilon(1e-13));
    MleConfig bad;
    bad.sigma_z = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = MleConfig{};
    bad.max_iters = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  }

  TEST_CASE("support restriction helpers") {
    Gen g(12);
    const RealMatrix c = testing_support::random_real(g, 6, 4);
    const IndexList all{0, 1, 2, 3, 4, 5};
    CHECK(restrict_columns(c, all) == c);
    const IndexList s{1, 4};
    const RealMatrix r = restrict_columns(c, s);
    CHECK(r.row(1) == c.row(4));
    RealVector x = RealVector::Zero(6);
    x(1) = 2.0;
    x(4) = -1.0;
    RealVector xs(2);
    xs << 2.0, -1.0;
    CHECK(embed(xs, s, 6) == x);
    CHECK(nonzero_support(x) == s);
    CHECK_THROWS_AS(restrict_columns(c, IndexList{1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(restrict_columns(c, IndexList{6}), std::invalid_argument);
    CHECK_THROWS_AS(embed(xs, IndexList{1}, 6), std::invalid_argument);

    const ComplexVector gv = testing_support::random_complex(g, 3, 1);
    CHECK((complex_from_stacked(stacked_from_complex(gv)) - gv).norm() == 0.0);
  }

  TEST_CASE("reduced one-bit CS on the true support beats the full solve") {
    Gen g(13);
    std::vector<double> full_err, reduced_err;
    for (int t = 0; t < 50; ++t) {
      const Index n = 40;
      RealMatrix c = testing_support::random_real(g, n, 30);
      RealVector x = RealVector::Zero(n);
      IndexList s;
      while (s.size() < 4) {
        const Index j = testing_support::uniform_int(g, 0, static_cast<int>(n) - 1);
        if (std::find(s.begin(), s.end(), j) == s.end()) s.push_back(j);
      }
      std::sort(s.begin(), s.end());
      for (Index j : s) x(j) = testing_support::uniform(g, 0.5, 2.0) * (testing_support::uniform(g, 0, 1) < 0.5 ? -1 : 1);
      x /= x.norm();
      const RealVector z = c.transpose() * x;
      RealVector b(z.size());
      for (Index i = 0; i < z.size(); ++i) b(i) = z(i) >= 0 ? 1.0 : -1.0;
      const SignBits bits = testing_support::to_sign_bits(b);
      CsConfig cfg;
      const auto full = onebit_cs(c, bits, cfg);
      const auto red = onebit_cs(restrict_columns(c, s), bits, cfg);
      full_err.push_back((full.x - x).norm());
      reduced_err.push_back((embed(red.x, s, n) - x).norm());
    }
    std::nth_element(full_err.begin(), full_err.begin() + 25, full_err.end());
    std::nth_element(reduced_err.begin(), reduced_err.begin() + 25, reduced_err.end());
    CHECK(reduced_err[25] <= full_err[25]);
  }
}
