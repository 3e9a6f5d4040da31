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

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ddfb {

namespace {
constexpr double kSpeedOfLight = 2.998e8;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

double ThreeGppPattern::knee() const { return phi_3db * std::sqrt(front_back_db / 12.0); }

double ThreeGppPathloss::wavelength_m() const { return kSpeedOfLight / carrier_hz; }

void validate(const ArrayConfig& array) {
  if (array.num_elements < 1) throw std::invalid_argument("array: num_elements must be >= 1");
  if (!(array.element_spacing_wavelengths > 0.0))
    throw std::invalid_argument("array: element spacing must be > 0");
}

void validate(const DirectivityPattern& pattern) {
  std::visit(overloaded{
                 [](const IsotropicPattern&) {},
                 [](const SectorPattern& p) {
                   if (!(p.lower < p.upper))
                     throw std::invalid_argument("sector pattern: lower must be < upper");
                 },
                 [](const ThreeGppPattern& p) {
                   if (!(p.phi_3db > 0.0)) throw std::invalid_argument("3gpp pattern: phi_3db must be > 0");
                   if (!(p.front_back_db > 0.0))
                     throw std::invalid_argument("3gpp pattern: front_back_db must be > 0");
                 },
             },
             pattern);
}

void validate(const ScenarioModel& s) {
  if (s.paths_min < 1 || s.paths_max < s.paths_min)
    throw std::invalid_argument("scenario: path count range must satisfy 1 <= min <= max");
  if (!(s.angle_min < s.angle_max)) throw std::invalid_argument("scenario: empty angle support");
  if (s.angle_min < -kPi - 1e-12 || s.angle_max > kPi + 1e-12)
    throw std::invalid_argument("scenario: angle support must lie within [-pi, pi)");
  if (!(s.rician_k_min >= 0.0) || s.rician_k_max < s.rician_k_min)
    throw std::invalid_argument("scenario: Rician factor range must be nonnegative and nonempty");
  if (!(s.tx_power_w > 0.0)) throw std::invalid_argument("scenario: transmit power must be > 0");
  if (!(s.noise_power_w > 0.0)) throw std::invalid_argument("scenario: noise power must be > 0");
  if (const auto* pl = std::get_if<ThreeGppPathloss>(&s.pathloss)) {
    if (!(pl->distance_min_m > 0.0) || pl->distance_max_m < pl->distance_min_m)
      throw std::invalid_argument("scenario: distance range must be positive and nonempty");
    if (!(pl->carrier_hz > 0.0)) throw std::invalid_argument("scenario: carrier must be > 0");
    if (pl->exponent_std < 0.0 || pl->shadowing_std_db < 0.0)
      throw std::invalid_argument("scenario: standard deviations must be >= 0");
  }
}

double PathRealization::aggregate_power() const {
  double sum = 0.0;
  for (const auto& p : paths) sum += p.mean_power;
  return std::sqrt(sum);
}

ComplexVector steering_vector(const ArrayConfig& array, double phi) {
  const int m = array.num_elements;
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  const double step = -2.0 * kPi * array.element_spacing_wavelengths * std::sin(phi);
  ComplexVector a(m);
  for (int i = 0; i < m; ++i) a(i) = std::polar(scale, step * i);
  return a;
}

double directivity(const DirectivityPattern& pattern, double phi) {
  return std::visit(overloaded{
                        [](const IsotropicPattern&) { return 1.0; },
                        [phi](const SectorPattern& p) { return (phi >= p.lower && phi < p.upper) ? 1.0 : 0.0; },
                        [phi](const ThreeGppPattern& p) {
                          const double r = phi / p.phi_3db;
                          const double exponent =
                              p.max_gain_dbi / 20.0 + std::max(-0.6 * r * r, -p.front_back_db / 20.0);
                          return std::pow(10.0, exponent);
                        },
                    },
                    pattern);
}

PathRealization draw_paths(const ScenarioModel& scenario, const ArrayConfig& tx, const ArrayConfig& rx,
                           std::optional<GridPair> grids, Rng& rng) {
  if (scenario.angle_mode == AngleMode::OnGrid) {
    if (!grids || !grids->tx || !grids->rx || grids->tx->empty() || grids->rx->empty())
      throw std::invalid_argument("draw_paths: on-grid angles require both angle grids");
  }
  const int num_paths = uniform_int(rng, scenario.paths_min, scenario.paths_max);
  const double array_gain =
      std::sqrt(static_cast<double>(tx.num_elements) * rx.num_elements / num_paths);

  auto pick = [&](const std::vector<double>& grid) {
    return grid[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(grid.size()) - 1))];
  };

  PathRealization out;
  out.paths.reserve(num_paths);
  for (int l = 0; l < num_paths; ++l) {
    Path p;
    if (scenario.angle_mode == AngleMode::OnGrid) {
      p.aoa = pick(*grids->rx);
      p.aod = pick(*grids->tx);
    } else {
      p.aoa = uniform_real(rng, scenario.angle_min, scenario.angle_max);
      p.aod = uniform_real(rng, scenario.angle_min, scenario.angle_max);
    }
    const double kappa = scenario.rician_k_max > scenario.rician_k_min
                             ? uniform_real(rng, scenario.rician_k_min, scenario.rician_k_max)
                             : scenario.rician_k_min;
    double v = 1.0;
    if (const auto* pl = std::get_if<ThreeGppPathloss>(&scenario.pathloss)) {
      const double d = pl->distance_max_m > pl->distance_min_m
                           ? uniform_real(rng, pl->distance_min_m, pl->distance_max_m)
                           : pl->distance_min_m;
      const double eta = std::normal_distribution<double>(pl->exponent_mean, pl->exponent_std)(rng);
      const double lambda = pl->wavelength_m();
      const double rho = std::pow(lambda / (4.0 * kPi), 2.0) * std::pow(1.0 / d, eta);
      const double shadow_db =
          std::normal_distribution<double>(10.0 * std::log10(rho), pl->shadowing_std_db)(rng);
      v = std::pow(10.0, shadow_db / 10.0);
    }
    p.mean_power = v;
    const cdouble alpha =
        complex_normal(rng, cdouble(std::sqrt(kappa * v / (kappa + 1.0)), 0.0), v / (kappa + 1.0));
    const double delay_phase = uniform_real(rng, 0.0, 2.0 * kPi);
    p.gain = array_gain * alpha * std::polar(1.0, delay_phase);
    out.paths.push_back(p);
  }
  return out;
}

ComplexMatrix assemble_channel(const PathRealization& paths, const Antenna& tx, const Antenna& rx) {
  ComplexMatrix h = ComplexMatrix::Zero(rx.array.num_elements, tx.array.num_elements);
  for (const auto& p : paths.paths) {
    const double c = directivity(tx.pattern, p.aod) * directivity(rx.pattern, p.aoa);
    if (c == 0.0) continue;
    h.noalias() += (p.gain * c) * steering_vector(rx.array, p.aoa) *
                   steering_vector(tx.array, p.aod).adjoint();
  }
  return h;
}

ComplexMatrix assemble_channel_matrix_form(const PathRealization& paths, const Antenna& tx,
                                           const Antenna& rx) {
  const Index l = static_cast<Index>(paths.paths.size());
  ComplexMatrix a_r(rx.array.num_elements, l);
  ComplexMatrix a_t(tx.array.num_elements, l);
  ComplexVector alpha(l);
  for (Index i = 0; i < l; ++i) {
    const auto& p = paths.paths[static_cast<std::size_t>(i)];
    a_r.col(i) = directivity(rx.pattern, p.aoa) * steering_vector(rx.array, p.aoa);
    a_t.col(i) = directivity(tx.pattern, p.aod) * steering_vector(tx.array, p.aod);
    alpha(i) = p.gain;
  }
  return a_r * alpha.asDiagonal() * a_t.adjoint();
}

ComplexMatrix training_matrix(int num_tx, int num_training, double tx_power_w, Rng& rng) {
  if (num_tx < 1 || num_training < 1) throw std::invalid_argument("training_matrix: empty dimensions");
  const double amp = std::sqrt(tx_power_w / num_tx) / std::sqrt(2.0);
  std::bernoulli_distribution coin(0.5);
  ComplexMatrix s(num_tx, num_training);
  for (Index j = 0; j < s.cols(); ++j)
    for (Index i = 0; i < s.rows(); ++i)
      s(i, j) = cdouble(coin(rng) ? amp : -amp, coin(rng) ? amp : -amp);
  return s;
}

ComplexMatrix simulate_training(const ComplexMatrix& h, const ComplexMatrix& s, double noise_power,
                                Rng& rng) {
  if (h.cols() != s.rows()) throw std::invalid_argument("simulate_training: H and S not conformable");
  ComplexMatrix y = h * s;
  if (noise_power > 0.0) {
    for (Index j = 0; j < y.cols(); ++j)
      for (Index i = 0; i < y.rows(); ++i) y(i, j) += complex_normal(rng, {}, noise_power);
  }
  return y;
}

}  // namespace ddfb
