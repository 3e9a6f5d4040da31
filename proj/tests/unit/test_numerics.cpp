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

#include "../support/oracles.hpp"
#include "../support/random.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace ddfb;
using testing_support::Gen;

TEST_SUITE("numerics") {
  TEST_CASE("q_function at reference points") {
    CHECK(q_function(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(q_function(1.0) == doctest::Approx(oracle::q(1.0)).epsilon(1e-12));
    CHECK(q_function(1.0) == doctest::Approx(0.158655253931457).epsilon(1e-12));
    CHECK(q_function(40.0) < 1e-300);
    CHECK(q_function(-40.0) == 1.0);
    CHECK(q_function(std::numeric_limits<double>::infinity()) == 0.0);
    CHECK(q_function(-std::numeric_limits<double>::infinity()) == 1.0);
  }

  TEST_CASE("log_q_stable matches 50-digit reference on [-38, 38]") {
    CHECK(log_q_stable(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
    CHECK(log_q_stable(10.0) == doctest::Approx(-53.23128515051247).epsilon(1e-12));
    double worst = 0.0;
    for (double x = -38.0; x <= 38.0; x += 0.173) {
      const double ref = oracle::log_q(x);
      const double got = log_q_stable(x);
      const double rel = std::abs(got - ref) / std::max(std::abs(ref), 1e-300);
      worst = std::max(worst, rel);
    }
    CHECK(worst <= 1e-10);
    // Far tail stays finite and keeps decreasing.
    CHECK(std::isfinite(log_q_stable(300.0)));
    CHECK(log_q_stable(300.0) < log_q_stable(299.0));
  }

  TEST_CASE("log_q_stable is monotone decreasing") {
    // ln Q(x) underflows to -0 below about x = -38, so strictness starts above it.
    double prev = log_q_stable(-50.0);
    for (double x = -49.9; x < 60.0; x += 0.1) {
      const double v = log_q_stable(x);
      if (x > -37.0) CHECK(v < prev);
      else CHECK(v <= prev);
      prev = v;
    }
  }

  TEST_CASE("inverse_mills_ratio") {
    CHECK(inverse_mills_ratio(0.0) == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-14));
    CHECK(inverse_mills_ratio(30.0) == doctest::Approx(30.0333).epsilon(1e-5));
    CHECK(inverse_mills_ratio(-40.0) < 1e-300);
    for (double x : {-5.0, -1.0, 0.5, 2.0, 8.0, 20.0, 37.5}) {
      const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
      const double ref = pdf / oracle::q(x);
      CHECK(inverse_mills_ratio(x) == doctest::Approx(ref).epsilon(1e-10));
    }
  }

  TEST_CASE("erfinv") {
    CHECK(erfinv(0.0) == 0.0);
    CHECK(erfinv(0.5) == doctest::Approx(oracle::erfinv_bisect(0.5)).epsilon(1e-12));
    CHECK(erfinv(0.5) == doctest::Approx(0.4769362762044699).epsilon(1e-12));
    CHECK(std::abs(erfinv(std::erf(0.7)) - 0.7) < 1e-10);
    for (double y = -0.999; y < 1.0; y += 0.0371) CHECK(std::abs(std::erf(erfinv(y)) - y) < 1e-10);
    CHECK_THROWS_AS(erfinv(1.0), std::domain_error);
    CHECK_THROWS_AS(erfinv(-1.5), std::domain_error);
  }

  TEST_CASE("spectral_norm_sq") {
    CHECK(spectral_norm_sq(RealMatrix::Identity(4, 4)) == doctest::Approx(1.0).epsilon(1e-12));
    RealMatrix d = RealMatrix::Zero(2, 2);
    d(0, 0) = 3.0;
    d(1, 1) = 1.0;
    CHECK(spectral_norm_sq(d) == doctest::Approx(9.0).epsilon(1e-10));
    Gen g(7);
    const RealMatrix a = testing_support::random_real(g, 5, 7);
    CHECK(spectral_norm_sq(a) == doctest::Approx(oracle::spectral_norm_sq(a)).epsilon(1e-6));
  }

  TEST_CASE("pseudo_inverse_apply") {
    Gen g(11);
    const ComplexMatrix b = testing_support::random_complex(g, 4, 3);
    CHECK((pseudo_inverse_apply(ComplexMatrix::Identity(4, 4), b).value - b).norm() < 1e-14);

    SUBCASE("tall consistent system") {
      const ComplexMatrix a = testing_support::random_complex(g, 9, 4);
      const ComplexMatrix x = testing_support::random_complex(g, 4, 2);
      const auto r = pseudo_inverse_apply(a, a * x);
      CHECK_FALSE(r.regularized);
      CHECK((r.value - x).norm() < 1e-10);
    }
    SUBCASE("tall residual orthogonality") {
      const ComplexMatrix a = testing_support::random_complex(g, 9, 4);
      const ComplexMatrix rhs = testing_support::random_complex(g, 9, 2);
      const auto r = pseudo_inverse_apply(a, rhs);
      CHECK((a.adjoint() * (rhs - a * r.value)).norm() < 1e-8);
    }
    SUBCASE("wide system gives the minimum-norm solution") {
      const ComplexMatrix a = testing_support::random_complex(g, 3, 8);
      const ComplexMatrix rhs = testing_support::random_complex(g, 3, 1);
      const auto r = pseudo_inverse_apply(a, rhs);
      CHECK((a * r.value - rhs).norm() < 1e-10);
      const ComplexMatrix ref = a.completeOrthogonalDecomposition().pseudoInverse() * rhs;
      CHECK((r.value - ref).norm() < 1e-10);
    }
    SUBCASE("rank deficiency") {
      ComplexMatrix a = testing_support::random_complex(g, 6, 3);
      a.col(2) = a.col(0);
      CHECK_THROWS_AS(pseudo_inverse_apply(a, testing_support::random_complex(g, 6, 1), false), std::runtime_error);
      const auto r = pseudo_inverse_apply(a, testing_support::random_complex(g, 6, 1), true);
      CHECK(r.regularized);
      CHECK(r.value.allFinite());
    }
    CHECK_THROWS_AS(pseudo_inverse_apply(ComplexMatrix::Identity(3, 3), ComplexMatrix::Zero(4, 1)),
                    std::invalid_argument);
  }

  TEST_CASE("vec, unvec and kron") {
    ComplexMatrix m(2, 2);
    m << 1.0, 3.0, 2.0, 4.0;
    const ComplexVector v = vec(m);
    for (int i = 0; i < 4; ++i) CHECK(v(i).real() == i + 1.0);
    CHECK(unvec(v, 2, 2) == m);
    CHECK_THROWS_AS(unvec(v, 3, 2), std::invalid_argument);

    Gen g(3);
    const ComplexMatrix a = testing_support::random_complex(g, 2, 3);
    const ComplexMatrix k = kron(ComplexMatrix::Identity(2, 2), a);
    CHECK((k.topLeftCorner(2, 3) - a).norm() == 0.0);
    CHECK((k.bottomRightCorner(2, 3) - a).norm() == 0.0);
    CHECK(k.topRightCorner(2, 3).norm() == 0.0);

    // vec(A G B^H) = (conj(B) kron A) vec(G)
    const ComplexMatrix aa = testing_support::random_complex(g, 3, 4);
    const ComplexMatrix gg = testing_support::random_complex(g, 4, 5);
    const ComplexMatrix bb = testing_support::random_complex(g, 6, 5);
    const ComplexVector lhs = oracle::vec(aa * gg * bb.adjoint());
    const ComplexVector rhs = oracle::kron(bb.conjugate(), aa) * oracle::vec(gg);
    CHECK((lhs - rhs).norm() < 1e-10);
    CHECK((kron(bb.conjugate(), aa) - oracle::kron(bb.conjugate(), aa)).norm() < 1e-14);
    CHECK((vec(gg) - oracle::vec(gg)).norm() == 0.0);
  }
}
