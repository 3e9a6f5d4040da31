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
#include "ddfb/rng.hpp"

#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace ddfb {

struct ArrayConfig {
  int num_elements = 1;
  double element_spacing_wavelengths = 0.5;  // d_y / lambda; geometry is always a ULA
};

struct IsotropicPattern {};

/// Indicator of the sector [lower, upper).
struct SectorPattern {
  double lower = -kPi / 2;
  double upper = kPi / 2;
};

/// Clamped-parabola element pattern (amplitude):
///   10^(max_gain_dbi/20 + max(-0.6 (phi/phi_3db)^2, -front_back_db/20)).
struct ThreeGppPattern {
  double phi_3db = 55.0 * kPi / 180.0;
  double front_back_db = 30.0;
  double max_gain_dbi = 8.0;

  /// Half-width of the parabolic region, phi_3db * sqrt(A_m / 12).
  double knee() const;
};

using DirectivityPattern = std::variant<IsotropicPattern, SectorPattern, ThreeGppPattern>;

void validate(const ArrayConfig& array);
void validate(const DirectivityPattern& pattern);

struct Antenna {
  ArrayConfig array;
  DirectivityPattern pattern = IsotropicPattern{};
};

enum class AngleMode { OnGrid, OffGrid };

struct NoPathloss {};

struct ThreeGppPathloss {
  double distance_min_m = 80.0;
  double distance_max_m = 120.0;
  double exponent_mean = 2.8;
  double exponent_std = 0.1;
  double shadowing_std_db = 4.0;
  double carrier_hz = 2e9;

  double wavelength_m() const;
};

using PathlossModel = std::variant<NoPathloss, ThreeGppPathloss>;

struct ScenarioModel {
  int paths_min = 5;
  int paths_max = 10;
  double angle_min = -kPi / 2;  // support [angle_min, angle_max)
  double angle_max = kPi / 2;
  AngleMode angle_mode = AngleMode::OffGrid;
  double rician_k_min = 0.0;
  double rician_k_max = 40.0;
  PathlossModel pathloss = NoPathloss{};
  double tx_power_w = 1.0;     // P_T
  double noise_power_w = 1.0;  // sigma^2
};

/// Throws std::invalid_argument naming the first violated invariant.
void validate(const ScenarioModel& scenario);

struct Path {
  cdouble gain;  // sqrt(M_T M_R / L) * alpha_l * exp(j varphi_l)
  double aoa = 0.0;
  double aod = 0.0;
  double mean_power = 1.0;  // v_l = E|alpha_l|^2
};

struct PathRealization {
  std::vector<Path> paths;

  /// sqrt(sum_l v_l).
  double aggregate_power() const;
};

ComplexVector steering_vector(const ArrayConfig& array, double phi);

double directivity(const DirectivityPattern& pattern, double phi);

/// Angle grids used when the scenario draws angles on-grid.
struct GridPair {
  const std::vector<double>* tx = nullptr;  // AoD candidates
  const std::vector<double>* rx = nullptr;  // AoA candidates
};

/// Draws one path realization. Throws std::invalid_argument when angle_mode
/// is OnGrid and no grids are supplied.
PathRealization draw_paths(const ScenarioModel& scenario, const ArrayConfig& tx,
                           const ArrayConfig& rx, std::optional<GridPair> grids, Rng& rng);

/// H = sum_l gain_l c_T(aod_l) c_R(aoa_l) a_R(aoa_l) a_T(aod_l)^H, M_R x M_T.
ComplexMatrix assemble_channel(const PathRealization& paths, const Antenna& tx, const Antenna& rx);

/// Same channel as A_R diag(gains) A_T^H with the per-path steering matrices.
ComplexMatrix assemble_channel_matrix_form(const PathRealization& paths, const Antenna& tx,
                                           const Antenna& rx);

/// QPSK training, entries (+-1 +-j)/sqrt(2) * sqrt(P_T / M_T); M_T x N_tr.
ComplexMatrix training_matrix(int num_tx, int num_training, double tx_power_w, Rng& rng);

/// Y = H S + N with N i.i.d. CN(0, noise_power).
ComplexMatrix simulate_training(const ComplexMatrix& h, const ComplexMatrix& s, double noise_power,
                                Rng& rng);

}  // namespace ddfb
