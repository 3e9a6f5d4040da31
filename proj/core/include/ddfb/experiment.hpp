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
#include "ddfb/dictionary.hpp"
#include "ddfb/recovery.hpp"
#include "ddfb/schemes.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ddfb {

struct SystemConfig {
  int m_tx = 128;
  int m_rx = 2;
  int n_tr = 64;
  int n_fb = 128;
  int users = 1;                  // K
  int coherence_symbols = 1680;   // U_c
};

struct DictionaryConfig {
  int g_tx = 140;
  int g_rx = 16;
  GridConstruction tx_construction = GridConstruction::Uniform;
  GridConstruction rx_construction = GridConstruction::Uniform;
  double lower = -kPi / 2;
  double upper = kPi / 2;
};

enum class RadiusMode { Fixed, PathPower, GainPower };

struct SchemeConfig {
  std::string id;
  SchemeKind kind = SchemeKind::OmpSq;
  int max_atoms = 15;  // L-bar
  int q_bits = 5;
  int n_fb = 0;        // 0: use the system value
  double eps_factor = 1.0;  // multiplies the default OMP threshold
  ZetaRule zeta = ZetaRule::relative(0.1);
  int max_iters = 500;
  double rel_tol = 1e-6;
  // R_2 for the CS solvers: a fixed value, P_alpha = sqrt(sum v_l), or
  // sqrt(M_T M_R / L) * P_alpha (the norm scale of the compact gain vector).
  RadiusMode r2_mode = RadiusMode::PathPower;
  double r2 = 1.0;
  std::optional<GridConstruction> tx_construction;  // overrides the dictionary default
};

enum class SweepAxis { SnrDb, Mtx, G, MaxAtoms, TxPower };

std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view name);

struct SweepConfig {
  SweepAxis axis = SweepAxis::SnrDb;
  std::vector<double> values{10.0};
};

struct ExperimentSpec {
  std::string name = "custom";
  int trials = 200;
  std::uint64_t master_seed = 1;
  SystemConfig system;
  ScenarioModel scenario;
  // When set, sigma^2 = P_T / 10^(snr_db / 10); otherwise scenario.noise_power_w is used.
  std::optional<double> snr_db = 10.0;
  Antenna tx;  // num_elements follows system.m_tx
  Antenna rx;  // num_elements follows system.m_rx
  DictionaryConfig dictionary;
  std::vector<SchemeConfig> schemes;
  SweepConfig sweep;
};

/// Returns every violation found (empty when valid).
std::vector<std::string> validation_errors(const ExperimentSpec& spec);

/// Throws std::invalid_argument listing all violations.
void validate(const ExperimentSpec& spec);

/// Copy of `spec` with the sweep axis set to `value`.
ExperimentSpec at_sweep_value(const ExperimentSpec& spec, double value);

/// Noise power implied by the spec.
double noise_power(const ExperimentSpec& spec);

// Self-describing INI text: sections [experiment], [system], [scenario],
// [tx_antenna], [rx_antenna], [dictionary], [sweep] and one [scheme:<id>]
// per scheme. Every field is written, so the text fully determines a run.
void write_spec(std::ostream& os, const ExperimentSpec& spec);
std::string spec_to_string(const ExperimentSpec& spec);

/// Parses the INI text; missing keys keep their defaults. Throws
/// std::invalid_argument on unknown sections/keys or malformed values.
ExperimentSpec read_spec(std::istream& is);
ExperimentSpec spec_from_string(const std::string& text);

/// Applies "section.key=value" (e.g. "system.m_tx=64", "scheme:mle.zeta=0.2").
void apply_override(ExperimentSpec& spec, const std::string& assignment);

}  // namespace ddfb
