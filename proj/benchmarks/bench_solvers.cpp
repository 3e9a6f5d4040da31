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
// Microbenchmarks for the per-trial hot paths: OMP at the UE, the one-bit
// solvers at the BS (full and support-restricted), and dictionary setup.

#include "ddfb/channel.hpp"
#include "ddfb/dictionary.hpp"
#include "ddfb/harness.hpp"
#include "ddfb/presets.hpp"
#include "ddfb/recovery.hpp"
#include "ddfb/schemes.hpp"

#include <benchmark/benchmark.h>

using namespace ddfb;

namespace {

struct Setup {
  ComplexMatrix a_tx, a_rx, s, q, p;
  RealMatrix c;
  ComplexMatrix y;
};

// M_R = 1 link with a G_T-point uniform dictionary and N_fb = N_tr.
Setup make_setup(int m_tx, int g_tx, int n_tr, bool with_c) {
  Rng rng(17);
  const Antenna tx{ArrayConfig{m_tx, 0.5}, IsotropicPattern{}};
  const Antenna rx{ArrayConfig{1, 0.5}, IsotropicPattern{}};
  Setup st;
  std::tie(st.a_tx, st.a_rx) =
      build_dictionary_matrices(uniform_grid(-kPi / 2, kPi / 2, g_tx), uniform_grid(-kPi / 2, kPi / 2, 1), tx, rx);
  st.s = training_matrix(m_tx, n_tr, 1.0, rng);
  st.q = build_sensing(st.s, st.a_tx, st.a_rx);
  st.p = build_compression(st.q.rows(), n_tr, rng);
  if (with_c) st.c = build_real_stacked(st.q, st.p);
  ScenarioModel sc;
  const auto h = assemble_channel(draw_paths(sc, tx.array, rx.array, std::nullopt, rng), tx, rx);
  st.y = simulate_training(h, st.s, 0.1, rng);
  return st;
}

void BM_OmpEncode(benchmark::State& state) {
  const auto st = make_setup(static_cast<int>(state.range(0)), 240, 80, false);
  for (auto _ : state) benchmark::DoNotOptimize(ue_encode_omp_sq(st.y, st.q, 15, 0.0, 5));
}
BENCHMARK(BM_OmpEncode)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_OneBitMleFull(benchmark::State& state) {
  const auto st = make_setup(static_cast<int>(state.range(0)), 240, 80, true);
  const auto payload = ue_encode_onebit(st.y, st.p);
  MleConfig cfg;
  cfg.sigma_z = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(bs_decode_onebit(payload, st.c, cfg, st.a_tx, st.a_rx));
}
BENCHMARK(BM_OneBitMleFull)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_OneBitCsFull(benchmark::State& state) {
  const auto st = make_setup(static_cast<int>(state.range(0)), 240, 80, true);
  const auto payload = ue_encode_onebit(st.y, st.p);
  for (auto _ : state) benchmark::DoNotOptimize(bs_decode_onebit(payload, st.c, CsConfig{}, st.a_tx, st.a_rx));
}
BENCHMARK(BM_OneBitCsFull)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

// Hybrid decoding builds only the rows of C on the fed-back support.
void BM_HybridMleReduced(benchmark::State& state) {
  const auto st = make_setup(static_cast<int>(state.range(0)), 240, 80, false);
  const auto payload = ue_encode_hybrid(st.y, st.q, st.p, 15, 0.0);
  MleConfig cfg;
  cfg.sigma_z = 0.5;
  for (auto _ : state) benchmark::DoNotOptimize(bs_decode_hybrid(payload, st.q, st.p, cfg, st.a_tx, st.a_rx));
}
BENCHMARK(BM_HybridMleReduced)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_CompandedGrid(benchmark::State& state) {
  const DirectivityPattern p = ThreeGppPattern{};
  for (auto _ : state)
    benchmark::DoNotOptimize(companded_grid(p, -kPi / 2, kPi / 2, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CompandedGrid)->Arg(180)->Arg(240)->Unit(benchmark::kMicrosecond);

void BM_RealStacked(benchmark::State& state) {
  const auto st = make_setup(static_cast<int>(state.range(0)), 240, 80, false);
  for (auto _ : state) benchmark::DoNotOptimize(build_real_stacked(st.q, st.p));
}
BENCHMARK(BM_RealStacked)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

// One full trial of the beamforming preset (all schemes, one SNR point).
void BM_Fig7Trial(benchmark::State& state) {
  ExperimentSpec spec = preset("fig7-desk");
  spec.trials = 1;
  spec.sweep.values = {10.0};
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(spec));
}
BENCHMARK(BM_Fig7Trial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
