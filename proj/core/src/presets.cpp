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
#include "ddfb/presets.hpp"

#include <functional>
#include <stdexcept>
#include <utility>

namespace ddfb {

namespace {

// Presets run OMP for exactly L-bar atoms (no residual threshold): the
// reported low-SNR dependence on L-bar only arises when OMP never stops early.
SchemeConfig scheme(std::string id, SchemeKind kind) {
  SchemeConfig s;
  s.id = std::move(id);
  s.kind = kind;
  s.eps_factor = 0.0;
  return s;
}

SchemeConfig omp_sq(int q_bits, int max_atoms = 15) {
  SchemeConfig s = scheme("omp-sq", SchemeKind::OmpSq);
  s.q_bits = q_bits;
  s.max_atoms = max_atoms;
  return s;
}

SchemeConfig with_n_fb(SchemeConfig s, int n_fb) {
  s.n_fb = n_fb;
  return s;
}

SchemeConfig quantized(std::string id, SchemeKind kind, int q_bits) {
  SchemeConfig s = scheme(std::move(id), kind);
  s.q_bits = q_bits;
  return s;
}

// NRMSE-vs-SNR family: Rician paths, isotropic elements, unit transmit power.
ExperimentSpec rician_base() {
  ExperimentSpec s;
  s.scenario.paths_min = 5;
  s.scenario.paths_max = 10;
  s.scenario.rician_k_min = 0.0;
  s.scenario.rician_k_max = 40.0;
  s.scenario.tx_power_w = 1.0;
  s.trials = 200;
  return s;
}

ExperimentSpec fig3(AngleMode mode) {
  ExperimentSpec s = rician_base();
  s.name = mode == AngleMode::OnGrid ? "fig3-ongrid" : "fig3";
  s.scenario.angle_mode = mode;
  s.system = {128, 2, 64, 128, 1, 1680};
  s.dictionary.g_tx = 140;
  s.dictionary.g_rx = 16;
  s.schemes = {scheme("onebit-cs", SchemeKind::OneBitCs), scheme("onebit-mle", SchemeKind::OneBitMle)};
  s.sweep = {SweepAxis::SnrDb, {-10, -5, 0, 5, 10, 15, 20}};
  return s;
}

ExperimentSpec fig4() {
  ExperimentSpec s = rician_base();
  s.name = "fig4";
  s.system = {128, 2, 64, 128, 1, 1680};
  s.dictionary.g_tx = 240;
  s.dictionary.g_rx = 240;
  s.schemes = {quantized("ls-sq", SchemeKind::LsSq, 3), omp_sq(5),
               with_n_fb(scheme("hybrid-mle", SchemeKind::HybridMle), 100),
               with_n_fb(scheme("hybrid-cs", SchemeKind::HybridCs), 120)};
  s.sweep = {SweepAxis::SnrDb, {-10, -5, 0, 5, 10, 15, 20}};
  return s;
}

ExperimentSpec fig5() {
  ExperimentSpec s = fig4();
  s.name = "fig5";
  s.schemes.erase(s.schemes.begin());  // setup 1 and 3 only
  s.snr_db = 10.0;
  s.sweep = {SweepAxis::MaxAtoms, {5, 10, 15, 20, 25}};
  return s;
}

ExperimentSpec fig6() {
  ExperimentSpec s = rician_base();
  s.name = "fig6";
  s.system = {128, 1, 80, 80, 1, 1680};
  s.snr_db = 10.0;
  s.schemes = {omp_sq(5), scheme("hybrid-mle", SchemeKind::HybridMle), scheme("hybrid-cs", SchemeKind::HybridCs)};
  s.sweep = {SweepAxis::G, {7, 31, 127}};
  return s;
}

ExperimentSpec fig7() {
  ExperimentSpec s = rician_base();
  s.name = "fig7";
  s.system = {128, 1, 80, 80, 1, 1680};
  s.dictionary.g_tx = 240;
  s.dictionary.g_rx = 240;
  s.schemes = {scheme("perfect", SchemeKind::Perfect),  omp_sq(5),
               scheme("hybrid-mle", SchemeKind::HybridMle), scheme("hybrid-cs", SchemeKind::HybridCs),
               quantized("ls-sq", SchemeKind::LsSq, 4), quantized("ls-vq", SchemeKind::LsVq, 5)};
  s.sweep = {SweepAxis::SnrDb, {-10, -5, 0, 5, 10, 15, 20}};
  return s;
}

// Path-loss scenario at 2 GHz with fixed transmit and noise power.
ExperimentSpec pathloss_base() {
  ExperimentSpec s;
  s.trials = 200;
  s.scenario.paths_min = 5;
  s.scenario.paths_max = 20;
  s.scenario.rician_k_min = 0.0;
  s.scenario.rician_k_max = 50.0;
  s.scenario.pathloss = ThreeGppPathloss{};
  s.scenario.tx_power_w = 0.5;
  s.scenario.noise_power_w = 1e-10;
  s.snr_db.reset();
  s.system = {128, 1, 64, 64, 1, 1680};
  s.dictionary.g_tx = 180;
  s.dictionary.g_rx = 180;
  return s;
}

SchemeConfig atoms(SchemeConfig s, int max_atoms) {
  s.max_atoms = max_atoms;
  return s;
}

ExperimentSpec fig8() {
  ExperimentSpec s = pathloss_base();
  s.name = "fig8";
  s.schemes = {scheme("perfect", SchemeKind::Perfect),
               omp_sq(3, 25),
               scheme("onebit-cs", SchemeKind::OneBitCs),
               scheme("onebit-mle", SchemeKind::OneBitMle),
               atoms(scheme("hybrid-cs", SchemeKind::HybridCs), 25),
               atoms(scheme("hybrid-mle", SchemeKind::HybridMle), 25),
               quantized("ls-sq", SchemeKind::LsSq, 2),
               quantized("ls-vq", SchemeKind::LsVq, 4)};
  s.sweep = {SweepAxis::Mtx, {64, 128, 256, 512}};
  return s;
}

SchemeConfig with_dictionary(SchemeConfig s, const std::string& suffix, GridConstruction c) {
  s.id += suffix;
  s.tx_construction = c;
  return s;
}

ExperimentSpec fig9() {
  ExperimentSpec s = pathloss_base();
  s.name = "fig9";
  s.tx.pattern = ThreeGppPattern{};
  const SchemeConfig mle = scheme("mle", SchemeKind::OneBitMle);
  const SchemeConfig hyb = atoms(scheme("hybrid-mle", SchemeKind::HybridMle), 25);
  s.schemes = {scheme("perfect", SchemeKind::Perfect),
               with_dictionary(mle, "-companded", GridConstruction::Companded),
               with_dictionary(mle, "-uniform", GridConstruction::Uniform),
               with_dictionary(hyb, "-companded", GridConstruction::Companded),
               with_dictionary(hyb, "-uniform", GridConstruction::Uniform)};
  s.sweep = {SweepAxis::Mtx, {64, 128, 256, 512}};
  return s;
}

ExperimentSpec fig11() {
  ExperimentSpec s = pathloss_base();
  s.name = "fig11";
  s.tx.pattern = ThreeGppPattern{};
  s.dictionary.tx_construction = GridConstruction::Companded;
  s.system = {256, 1, 80, 80, 16, 1680};
  s.dictionary.g_tx = 210;
  s.dictionary.g_rx = 180;
  s.schemes = {scheme("perfect", SchemeKind::Perfect), atoms(omp_sq(5), 25),
               atoms(scheme("hybrid-mle", SchemeKind::HybridMle), 25),
               atoms(scheme("hybrid-cs", SchemeKind::HybridCs), 25)};
  s.sweep = {SweepAxis::TxPower, {0.05, 0.1, 0.5, 1.0, 5.0}};
  return s;
}

// With a single receive antenna every receive-dictionary column is the same
// scalar, so the desk variants collapse G_R to 1 where M_R = 1.
ExperimentSpec desk(ExperimentSpec s) {
  s.name += "-desk";
  if (s.system.m_rx == 1 && s.sweep.axis != SweepAxis::G) s.dictionary.g_rx = 1;
  return s;
}

using Builder = std::function<ExperimentSpec()>;

const std::vector<std::tuple<std::string, std::string, Builder>>& registry() {
  static const std::vector<std::tuple<std::string, std::string, Builder>> r{
      {"fig3", "NRMSE vs SNR, one-bit CS/MLE, off-grid angles", [] { return fig3(AngleMode::OffGrid); }},
      {"fig3-desk", "fig3 at M_T=64, SNR {-10,0,10}",
       [] {
         ExperimentSpec s = desk(fig3(AngleMode::OffGrid));
         s.system.m_tx = 64;
         s.sweep.values = {-10, 0, 10};
         return s;
       }},
      {"fig3-ongrid", "NRMSE vs SNR, one-bit CS/MLE, on-grid angles", [] { return fig3(AngleMode::OnGrid); }},
      {"fig3-ongrid-desk", "fig3-ongrid at M_T=64, SNR {-10,0,10}",
       [] {
         ExperimentSpec s = desk(fig3(AngleMode::OnGrid));
         s.system.m_tx = 64;
         s.sweep.values = {-10, 0, 10};
         return s;
       }},
      {"fig4", "NRMSE vs SNR, LS-SQ / OMP-SQ / hybrids, G_T=G_R=240", fig4},
      {"fig4-desk", "fig4 with G_T=G_R=120, SNR {-10,0,10}",
       [] {
         ExperimentSpec s = desk(fig4());
         s.dictionary.g_tx = s.dictionary.g_rx = 120;
         s.sweep.values = {-10, 0, 10};
         return s;
       }},
      {"fig5", "NRMSE vs maximum OMP atoms", fig5},
      {"fig5-desk", "fig5 with G_T=G_R=120, 50 trials",
       [] {
         ExperimentSpec s = desk(fig5());
         s.dictionary.g_tx = s.dictionary.g_rx = 120;
         s.trials = 50;
         return s;
       }},
      {"fig6", "NRMSE vs dictionary size G_T=G_R, M_R=1", fig6},
      {"fig6-desk", "fig6 at M_T=64, 50 trials",
       [] {
         ExperimentSpec s = desk(fig6());
         s.system.m_tx = 64;
         s.trials = 50;
         return s;
       }},
      {"fig7", "beamforming gain vs SNR, M_T=128, M_R=1", fig7},
      {"fig7-desk", "fig7 with G_R=1, SNR {10,20}",
       [] {
         ExperimentSpec s = desk(fig7());
         s.sweep.values = {10, 20};
         return s;
       }},
      {"fig8", "beamforming gain vs M_T, path-loss scenario, isotropic elements", fig8},
      {"fig8-desk", "fig8 with G_R=1, M_T {64,128,256}, 50 trials",
       [] {
         ExperimentSpec s = desk(fig8());
         s.sweep.values = {64, 128, 256};
         s.trials = 50;
         return s;
       }},
      {"fig9", "beamforming gain vs M_T, 3GPP pattern, companded vs uniform dictionary", fig9},
      {"fig9-desk", "fig9 with G_R=1, M_T {64,128,256}",
       [] {
         ExperimentSpec s = desk(fig9());
         s.sweep.values = {64, 128, 256};
         return s;
       }},
      {"fig11", "ZF sum rate vs P_T, K=16, M_T=256", fig11},
      {"fig11-desk", "fig11 with G_R=1, 20 trials",
       [] {
         ExperimentSpec s = desk(fig11());
         s.trials = 20;
         return s;
       }},
  };
  return r;
}

}  // namespace

std::vector<PresetInfo> list_presets() {
  std::vector<PresetInfo> out;
  for (const auto& [name, summary, build] : registry()) out.push_back({name, summary});
  return out;
}

ExperimentSpec preset(const std::string& name) {
  for (const auto& [n, summary, build] : registry())
    if (n == name) {
      ExperimentSpec s = build();
      validate(s);
      return s;
    }
  std::string names;
  for (const auto& [n, summary, build] : registry()) names += (names.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown preset '" + name + "' (available: " + names + ")");
}

}  // namespace ddfb
