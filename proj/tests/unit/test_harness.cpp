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
#include "ddfb/harness.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

using namespace ddfb;

namespace {

SchemeConfig make(const std::string& id, SchemeKind kind) {
  SchemeConfig s;
  s.id = id;
  s.kind = kind;
  s.max_atoms = 3;
  s.q_bits = 3;
  s.eps_factor = 0.0;
  return s;
}

ExperimentSpec tiny() {
  ExperimentSpec s;
  s.name = "tiny";
  s.trials = 6;
  s.master_seed = 42;
  s.system = {8, 1, 8, 8, 1, 1680};
  s.scenario.paths_min = 2;
  s.scenario.paths_max = 3;
  s.dictionary.g_tx = 16;
  s.dictionary.g_rx = 1;
  s.schemes = {make("perfect", SchemeKind::Perfect),   make("omp-sq", SchemeKind::OmpSq),
               make("mle", SchemeKind::OneBitMle),     make("hybrid-cs", SchemeKind::HybridCs),
               make("ls-sq", SchemeKind::LsSq),        make("ls-vq", SchemeKind::LsVq)};
  s.sweep = {SweepAxis::SnrDb, {0.0, 10.0}};
  return s;
}

std::string records_text(const ExperimentSpec& spec, const ExperimentResult& r) {
  std::ostringstream os;
  write_records_csv(os, spec, r.records);
  return os.str();
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("record layout and count") {
    const ExperimentSpec spec = tiny();
    const auto r = run_experiment(spec);
    REQUIRE(r.records.size() == 2 * 6 * 6);
    std::size_t i = 0;
    for (double v : spec.sweep.values)
      for (int t = 0; t < spec.trials; ++t)
        for (const auto& sc : spec.schemes) {
          const auto& rec = r.records[i++];
          CHECK(rec.sweep_value == v);
          CHECK(rec.trial_index == t);
          CHECK(rec.scheme_id == sc.id);
          CHECK(rec.wall_time_ms == 0.0);
        }
    CHECK(r.summary.size() == 2 * 6);
  }

  TEST_CASE("bit counts follow the formulas") {
    const auto r = run_experiment(tiny());
    for (const auto& rec : r.records) {
      CAPTURE(rec.scheme_id);
      if (rec.scheme_id == "perfect") CHECK(rec.bit_count == 0);
      if (rec.scheme_id == "omp-sq") {
        CHECK(rec.bit_budget == omp_sq_bits(3, 16, 3));
        CHECK(rec.bit_count % (4 + 6) == 0);
        CHECK(rec.bit_count <= rec.bit_budget);
      }
      if (rec.scheme_id == "mle") CHECK(rec.bit_count == onebit_bits(8));
      if (rec.scheme_id == "hybrid-cs") {
        CHECK(rec.bit_budget == hybrid_bits(8, 3, 16));
        CHECK((rec.bit_count - onebit_bits(8)) % 4 == 0);
      }
      if (rec.scheme_id == "ls-sq") CHECK(rec.bit_count == ls_sq_bits(8, 1, 3));
      if (rec.scheme_id == "ls-vq") CHECK(rec.bit_count == ls_vq_bits(8, 3));
    }
  }

  TEST_CASE("perfect channel knowledge is the reference") {
    const auto r = run_experiment(tiny());
    std::map<std::pair<double, int>, double> perfect;
    for (const auto& rec : r.records)
      if (rec.scheme_id == "perfect") {
        CHECK(rec.nrmse == 0.0);
        perfect[{rec.sweep_value, rec.trial_index}] = rec.beamforming_gain;
      }
    for (const auto& rec : r.records) {
      CHECK(std::isfinite(rec.nrmse));
      CHECK(rec.beamforming_gain <= perfect.at({rec.sweep_value, rec.trial_index}) * (1 + 1e-12));
    }
  }

  TEST_CASE("output depends on the seed, not on the worker count") {
    const ExperimentSpec spec = tiny();
    RunOptions one, three;
    three.workers = 3;
    std::size_t calls = 0, last = 0;
    three.progress = [&](std::size_t done, std::size_t total) {
      ++calls;
      CHECK(done > last);
      CHECK(done <= total);
      CHECK(total == 12);
      last = done;
    };
    const std::string a = records_text(spec, run_experiment(spec, one));
    const std::string b = records_text(spec, run_experiment(spec, three));
    CHECK(a == b);
    CHECK(calls >= 1);
    CHECK(last == 12);
    ExperimentSpec other = spec;
    other.master_seed = 43;
    CHECK(records_text(other, run_experiment(other)) != a);
  }

  TEST_CASE("summary statistics") {
    const auto r = run_experiment(tiny());
    const auto again = summarize(r.records);
    REQUIRE(again.size() == r.summary.size());
    for (const auto& row : r.summary) {
      double sum = 0.0, sq = 0.0;
      int n = 0;
      for (const auto& rec : r.records)
        if (rec.sweep_value == row.sweep_value && rec.scheme_id == row.scheme_id) {
          sum += rec.nrmse;
          ++n;
        }
      const double mean = sum / n;
      for (const auto& rec : r.records)
        if (rec.sweep_value == row.sweep_value && rec.scheme_id == row.scheme_id)
          sq += (rec.nrmse - mean) * (rec.nrmse - mean);
      CHECK(row.trials == n);
      CHECK(row.nrmse_mean == doctest::Approx(mean).epsilon(1e-12));
      CHECK(row.nrmse_stderr == doctest::Approx(std::sqrt(sq / (n - 1) / n)).epsilon(1e-10));
    }
  }

  TEST_CASE("CSV preamble") {
    const ExperimentSpec spec = tiny();
    const auto r = run_experiment(spec);
    std::ostringstream os;
    write_summary_csv(os, spec, r.summary);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "# schema: ddfb-summary/1");
    std::getline(in, line);
    CHECK(line == "# sweep_axis: snr_db");
    std::getline(in, line);
    CHECK(line.substr(0, 22) == "sweep_value,scheme_id,");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == r.summary.size());

    const std::string rec = records_text(spec, r);
    CHECK(rec.rfind("# schema: ddfb-records/1\n", 0) == 0);
  }

  TEST_CASE("protocol matrices") {
    const ExperimentSpec spec = tiny();
    const auto m = protocol_matrices(spec, std::nullopt, 0, true);
    CHECK(m.a_tx.rows() == 8);
    CHECK(m.a_tx.cols() == 16);
    CHECK(m.s.cols() == 8);
    CHECK(m.q.cols() == 16);
    CHECK(m.p.cols() == 8);
    CHECK(m.c.rows() == 32);
    CHECK(m.c.cols() == 16);
    const auto m2 = protocol_matrices(spec, std::nullopt, 4, false);
    CHECK(m2.s == m.s);
    CHECK(m2.p.cols() == 4);
  }
}
