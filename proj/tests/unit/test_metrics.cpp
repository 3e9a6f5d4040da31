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

#include "../support/random.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>

using namespace ddfb;
using testing_support::Gen;

TEST_SUITE("metrics") {
  TEST_CASE("nrmse") {
    ComplexMatrix h(1, 2);
    h << cdouble(3, 0), cdouble(0, 4);
    CHECK(nrmse(h, h) == 0.0);
    CHECK(nrmse(ComplexMatrix::Zero(1, 2), h) == 1.0);
    CHECK(nrmse(2.0 * h, h) == doctest::Approx(1.0));
    CHECK_THROWS_AS(nrmse(h, ComplexMatrix::Zero(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(nrmse(ComplexMatrix::Zero(2, 1), h), std::invalid_argument);
  }

  TEST_CASE("vector beamforming gain") {
    Gen g(1);
    const ComplexVector h = testing_support::random_complex(g, 16, 1);
    CHECK(beamforming_gain(h, h, 2.0) == doctest::Approx(2.0 * h.squaredNorm()));
    // Invariant to any complex scaling of the estimate.
    CHECK(beamforming_gain(h, cdouble(-0.3, 2.0) * h, 1.0) == doctest::Approx(h.squaredNorm()));
    CHECK(beamforming_gain(h, ComplexVector::Zero(16), 1.0) == 0.0);
    ComplexVector orth = ComplexVector::Zero(16);
    orth(0) = std::conj(h(1));
    orth(1) = -std::conj(h(0));
    CHECK(beamforming_gain(h, orth, 1.0) < 1e-24 * h.squaredNorm());
    for (int k = 0; k < 20; ++k) {
      const ComplexVector e = testing_support::random_complex(g, 16, 1);
      CHECK(beamforming_gain(h, e, 1.5) <= 1.5 * h.squaredNorm() * (1 + 1e-12));
    }
  }

  TEST_CASE("matrix beamforming gain uses the principal right singular vector") {
    Gen g(2);
    const ComplexMatrix h = testing_support::random_complex(g, 3, 10);
    Eigen::JacobiSVD<ComplexMatrix> svd(h);
    const double top = svd.singularValues()(0);
    CHECK(beamforming_gain(h, h, 1.0) == doctest::Approx(top * top).epsilon(1e-12));
    CHECK(beamforming_gain(h, h, 1.0) <= h.squaredNorm());
    const ComplexMatrix row = h.topRows(1);
    CHECK(beamforming_gain(row, row, 1.0) == doctest::Approx(row.squaredNorm()));
    CHECK(beamforming_gain(h, ComplexMatrix::Zero(3, 10), 1.0) == 0.0);
  }

  TEST_CASE("zero-forcing precoder") {
    Gen g(3);
    const ComplexMatrix t = testing_support::random_complex(g, 4, 12);
    const auto zf = zf_precoder(t);
    CHECK(std::abs(zf.v.squaredNorm() - 4.0) < 1e-10);
    CHECK((t * zf.v - zf.t * ComplexMatrix::Identity(4, 4)).norm() < 1e-10);
    // t^2 = K / trace((T T^H)^{-1}).
    const ComplexMatrix gram_inv = (t * t.adjoint()).inverse();
    CHECK(zf.t * zf.t == doctest::Approx(4.0 / gram_inv.trace().real()).epsilon(1e-10));

    ComplexMatrix rank_def = t;
    rank_def.row(3) = rank_def.row(0);
    CHECK_THROWS_AS(zf_precoder(rank_def), std::domain_error);
    CHECK_THROWS_AS(zf_precoder(testing_support::random_complex(g, 5, 4)), std::domain_error);
  }

  TEST_CASE("training prefactor") {
    CHECK(training_prefactor(80, 1680) == doctest::Approx(0.95238095238095).epsilon(1e-13));
    CHECK(training_prefactor(0, 10) == 1.0);
    CHECK_THROWS_AS(training_prefactor(10, 10), std::invalid_argument);
  }

  TEST_CASE("sum rate with perfect channel knowledge") {
    Gen g(4);
    MultiuserContext ctx;
    ctx.channels = testing_support::random_complex(g, 3, 16);
    ctx.tx_power = 2.0;
    ctx.noise_power = 0.5;
    const auto zf = zf_precoder(ctx.channels);
    const auto r = sinr_and_sum_rate(ctx, zf.v);
    CHECK(r.interference < 1e-10);
    const double pre = 1.0 - 80.0 / 1680.0;
    double sum = 0.0;
    for (int k = 0; k < 3; ++k) {
      // With no leakage every user sees P_T t^2 / (K sigma^2).
      CHECK(r.sinr[k] == doctest::Approx(2.0 * zf.t * zf.t / (3 * 0.5)).epsilon(1e-9));
      CHECK(r.rate[k] == doctest::Approx(pre * std::log2(1.0 + r.sinr[k])).epsilon(1e-14));
      sum += r.rate[k];
    }
    CHECK(r.sum_rate == doctest::Approx(sum).epsilon(1e-14));

    ctx.noise_power = 1e12;
    CHECK(sinr_and_sum_rate(ctx, zf.v).sum_rate < 1e-9);
  }

  TEST_CASE("leakage from a mismatched precoder") {
    Gen g(5);
    MultiuserContext ctx;
    ctx.channels = testing_support::random_complex(g, 2, 8);
    const ComplexMatrix est = ctx.channels + 0.3 * testing_support::random_complex(g, 2, 8);
    const auto r = sinr_and_sum_rate(ctx, zf_precoder(est).v);
    CHECK(r.interference > 1e-6);
    const auto perfect = sinr_and_sum_rate(ctx, zf_precoder(ctx.channels).v);
    CHECK(perfect.interference < r.interference);
    CHECK_THROWS_AS(sinr_and_sum_rate(ctx, ComplexMatrix::Zero(8, 3)), std::invalid_argument);
  }
}
