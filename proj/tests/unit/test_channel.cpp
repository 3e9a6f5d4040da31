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
#include "ddfb/channel.hpp"
#include "ddfb/dictionary.hpp"

#include "../support/random.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ddfb;

namespace {
ArrayConfig ula(int m) { return ArrayConfig{m, 0.5}; }
}  // namespace

TEST_SUITE("channel") {
  TEST_CASE("steering vector") {
    const ComplexVector a0 = steering_vector(ula(8), 0.0);
    for (Index i = 0; i < 8; ++i) CHECK(std::abs(a0(i) - cdouble(1.0 / std::sqrt(8.0), 0.0)) < 1e-15);

    const ComplexVector a = steering_vector(ula(2), kPi / 2);
    CHECK(std::abs(a(0) - cdouble(1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
    CHECK(std::abs(a(1) - cdouble(-1.0 / std::sqrt(2.0), 0.0)) < 1e-15);

    testing_support::Gen g(5);
    for (int k = 0; k < 20; ++k) {
      const double phi = testing_support::uniform(g, -kPi, kPi);
      CHECK(std::abs(steering_vector(ula(37), phi).norm() - 1.0) < 1e-12);
    }
    // Entry m carries phase -2 pi d m sin(phi).
    const double phi = 0.3;
    const ComplexVector s = steering_vector(ArrayConfig{5, 0.7}, phi);
    for (Index m = 0; m < 5; ++m)
      CHECK(std::abs(s(m) - std::polar(1.0 / std::sqrt(5.0), -2.0 * kPi * 0.7 * m * std::sin(phi))) < 1e-14);
  }

  TEST_CASE("directivity patterns") {
    const ThreeGppPattern p;
    CHECK(directivity(p, 0.0) == doctest::Approx(std::pow(10.0, 8.0 / 20.0)).epsilon(1e-14));
    CHECK(directivity(p, 3.0) == doctest::Approx(std::pow(10.0, (8.0 - 30.0) / 20.0)).epsilon(1e-14));
    CHECK(directivity(p, 3.0) == doctest::Approx(0.0794).epsilon(1e-3));
    const SectorPattern sec{-kPi / 2, kPi / 2};
    CHECK(directivity(sec, 0.0) == 1.0);
    CHECK(directivity(sec, 3.0) == 0.0);
    CHECK(directivity(sec, kPi / 2) == 0.0);
    CHECK(directivity(IsotropicPattern{}, 1.234) == 1.0);
    CHECK(p.knee() == doctest::Approx(55.0 * kPi / 180.0 * std::sqrt(2.5)).epsilon(1e-14));
  }

  TEST_CASE("validation") {
    CHECK_THROWS_AS(validate(ArrayConfig{0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ArrayConfig{4, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(DirectivityPattern{SectorPattern{1.0, 0.5}}), std::invalid_argument);
    ThreeGppPattern bad;
    bad.phi_3db = 0.0;
    CHECK_THROWS_AS(validate(DirectivityPattern{bad}), std::invalid_argument);
    ScenarioModel s;
    s.paths_min = 0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = ScenarioModel{};
    s.noise_power_w = 0.0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    CHECK_NOTHROW(validate(ScenarioModel{}));
  }

  TEST_CASE("single strong Rician path has unit magnitude") {
    ScenarioModel s;
    s.paths_min = s.paths_max = 1;
    s.rician_k_min = s.rician_k_max = 1e9;
    Rng rng(1);
    for (int k = 0; k < 20; ++k) {
      const auto r = draw_paths(s, ula(16), ula(2), std::nullopt, rng);
      REQUIRE(r.paths.size() == 1);
      CHECK(std::abs(std::abs(r.paths[0].gain) / std::sqrt(32.0) - 1.0) < 1e-4);
    }
  }

  TEST_CASE("on-grid draws come from the supplied grids") {
    ScenarioModel s;
    s.angle_mode = AngleMode::OnGrid;
    const auto gt = uniform_grid(-kPi / 2, kPi / 2, 12).angles;
    const auto gr = uniform_grid(-kPi / 2, kPi / 2, 5).angles;
    Rng rng(2);
    for (int k = 0; k < 50; ++k) {
      const auto r = draw_paths(s, ula(8), ula(2), GridPair{&gt, &gr}, rng);
      for (const auto& p : r.paths) {
        CHECK(std::find(gt.begin(), gt.end(), p.aod) != gt.end());
        CHECK(std::find(gr.begin(), gr.end(), p.aoa) != gr.end());
      }
    }
    CHECK_THROWS_AS(draw_paths(s, ula(8), ula(2), std::nullopt, rng), std::invalid_argument);
  }

  TEST_CASE("off-grid draws respect the configured ranges") {
    ScenarioModel s;
    s.paths_min = 3;
    s.paths_max = 7;
    Rng rng(3);
    std::vector<int> seen(8, 0);
    for (int k = 0; k < 400; ++k) {
      const auto r = draw_paths(s, ula(4), ula(1), std::nullopt, rng);
      const int l = static_cast<int>(r.paths.size());
      REQUIRE(l >= 3);
      REQUIRE(l <= 7);
      ++seen[static_cast<std::size_t>(l)];
      for (const auto& p : r.paths) {
        CHECK(p.aod >= s.angle_min);
        CHECK(p.aod < s.angle_max);
        CHECK(p.aoa >= s.angle_min);
        CHECK(p.aoa < s.angle_max);
      }
      CHECK(r.aggregate_power() > 0.0);
    }
    for (int l = 3; l <= 7; ++l) CHECK(seen[static_cast<std::size_t>(l)] > 40);
  }

  TEST_CASE("Rician second moment is one without path loss") {
    ScenarioModel s;
    s.paths_min = s.paths_max = 1;
    Rng rng(4);
    double acc = 0.0;
    const int n = 100000;
    for (int k = 0; k < n; ++k) {
      const auto r = draw_paths(s, ula(1), ula(1), std::nullopt, rng);
      acc += std::norm(r.paths[0].gain);  // array gain is 1 for M_T = M_R = L = 1
    }
    CHECK(std::abs(acc / n - 1.0) < 0.02);
  }

  TEST_CASE("path-loss draws scale the mean power") {
    ScenarioModel s;
    s.pathloss = ThreeGppPathloss{};
    s.paths_min = s.paths_max = 1;
    Rng rng(5);
    double log_sum = 0.0;
    const int n = 4000;
    for (int k = 0; k < n; ++k) log_sum += 10.0 * std::log10(draw_paths(s, ula(1), ula(1), std::nullopt, rng).paths[0].mean_power);
    // (lambda / 4 pi)^2 (1/d)^eta at d ~ 100 m, eta = 2.8: about -94 dB.
    const double lambda = ThreeGppPathloss{}.wavelength_m();
    const double expected = 10.0 * std::log10(std::pow(lambda / (4.0 * kPi), 2.0)) - 28.0 * std::log10(100.0);
    CHECK(std::abs(log_sum / n - expected) < 1.0);
  }

  TEST_CASE("assemble_channel") {
    const Antenna tx{ula(8), IsotropicPattern{}};
    const Antenna rx{ula(3), IsotropicPattern{}};
    PathRealization one;
    one.paths.push_back({cdouble(std::sqrt(24.0), 0.0), 0.4, -0.9, 1.0});
    const ComplexMatrix h = assemble_channel(one, tx, rx);
    CHECK(h.rows() == 3);
    CHECK(h.cols() == 8);
    CHECK(std::abs(h.norm() - std::sqrt(24.0)) < 1e-12);
    Eigen::JacobiSVD<ComplexMatrix> svd(h);
    CHECK(svd.singularValues()(1) < 1e-12);

    PathRealization cancel;
    cancel.paths.push_back({cdouble(1.0, 2.0), 0.1, 0.2, 1.0});
    cancel.paths.push_back({cdouble(-1.0, -2.0), 0.1, 0.2, 1.0});
    CHECK(assemble_channel(cancel, tx, rx).norm() < 1e-15);

    ScenarioModel s;
    Rng rng(6);
    const Antenna tx3{ula(16), ThreeGppPattern{}};
    for (int k = 0; k < 10; ++k) {
      const auto r = draw_paths(s, tx3.array, rx.array, std::nullopt, rng);
      CHECK((assemble_channel(r, tx3, rx) - assemble_channel_matrix_form(r, tx3, rx)).norm() < 1e-10);
    }
  }

  TEST_CASE("training and noise") {
    Rng rng(8);
    const ComplexMatrix s = training_matrix(16, 4000, 2.0, rng);
    CHECK(s.rows() == 16);
    CHECK(s.cols() == 4000);
    for (Index j = 0; j < 5; ++j) CHECK(s.col(j).squaredNorm() == doctest::Approx(2.0).epsilon(1e-12));
    for (Index i = 0; i < 5; ++i)
      CHECK(std::abs(std::abs(s(i, 0)) - std::sqrt(2.0 / 16.0)) < 1e-14);

    const ComplexMatrix h = testing_support::random_complex(rng, 2, 16);
    const ComplexMatrix s2 = training_matrix(16, 10, 1.0, rng);
    CHECK((simulate_training(h, s2, 0.0, rng) - h * s2).norm() == 0.0);

    const ComplexMatrix y = simulate_training(ComplexMatrix::Zero(1, 16), training_matrix(16, 10000, 1.0, rng), 0.3, rng);
    CHECK(std::abs(y.squaredNorm() / 10000.0 - 0.3) < 0.05 * 0.3);
    CHECK_THROWS_AS(simulate_training(h, training_matrix(15, 3, 1.0, rng), 1.0, rng), std::invalid_argument);
  }
}
