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
// Command-line front end: run experiments, inspect presets and configs, and
// export protocol matrices for debugging.

#include "ddfb/harness.hpp"
#include "ddfb/matrix_io.hpp"
#include "ddfb/presets.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace {

struct SpecSource {
  std::string preset;
  std::string config;
  std::vector<std::string> overrides;
  int trials = 0;
  long long seed = -1;
  std::string sweep_axis;
  std::vector<double> sweep_values;
};

void add_source_options(CLI::App* cmd, SpecSource& src) {
  auto* p = cmd->add_option("--preset", src.preset, "Named preset (see list-presets)");
  auto* c = cmd->add_option("--config", src.config, "Experiment config file (INI)")->check(CLI::ExistingFile);
  p->excludes(c);
  cmd->add_option("--trials", src.trials, "Override the trial count")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", src.seed, "Override the master seed")->check(CLI::NonNegativeNumber);
  cmd->add_option("--sweep-axis", src.sweep_axis, "Sweep axis: snr_db, m_tx, g, max_atoms, tx_power");
  cmd->add_option("--sweep-values", src.sweep_values, "Sweep values")->delimiter(',');
  cmd->add_option("--set", src.overrides, "Override a field, e.g. system.m_tx=64 or scheme:omp-sq.q_bits=4");
}

ddfb::ExperimentSpec resolve(const SpecSource& src) {
  ddfb::ExperimentSpec spec;
  if (!src.preset.empty()) {
    spec = ddfb::preset(src.preset);
  } else if (!src.config.empty()) {
    std::ifstream in(src.config);
    if (!in) throw std::runtime_error("cannot open config '" + src.config + "'");
    spec = ddfb::read_spec(in);
  }
  if (src.trials > 0) spec.trials = src.trials;
  if (src.seed >= 0) spec.master_seed = static_cast<std::uint64_t>(src.seed);
  if (!src.sweep_axis.empty()) spec.sweep.axis = ddfb::sweep_axis_from_string(src.sweep_axis);
  if (!src.sweep_values.empty()) spec.sweep.values = src.sweep_values;
  for (const auto& o : src.overrides) ddfb::apply_override(spec, o);
  return spec;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

int cmd_run(const SpecSource& src, const std::string& out_dir, int workers, bool timing, bool quiet) {
  const ddfb::ExperimentSpec spec = resolve(src);
  ddfb::validate(spec);
  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "spec.resolved.txt", ddfb::spec_to_string(spec));

  ddfb::RunOptions opts;
  opts.workers = workers;
  opts.record_timing = timing;
  if (!quiet)
    opts.progress = [](std::size_t done, std::size_t total) {
      fmt::print(stderr, "\r{}/{} trials", done, total);
      if (done == total) fmt::print(stderr, "\n");
    };
  const auto result = ddfb::run_experiment(spec, opts);

  std::ostringstream rec, sum;
  ddfb::write_records_csv(rec, spec, result.records);
  ddfb::write_summary_csv(sum, spec, result.summary);
  write_file(fs::path(out_dir) / "records.csv", rec.str());
  write_file(fs::path(out_dir) / "summary.csv", sum.str());
  if (!quiet) {
    for (const auto& r : result.summary)
      fmt::print("{:>10.4g}  {:<22} nrmse {:.4f} ± {:.4f}  gain {:.4g}  rate {:.4g}  bits {:.1f}\n", r.sweep_value,
                 r.scheme_id, r.nrmse_mean, r.nrmse_stderr, r.gain_mean, r.sum_rate_mean, r.bit_count_mean);
  }
  return 0;
}

int cmd_export(const SpecSource& src, const std::string& what, const std::string& out, const std::string& construction,
               int n_fb) {
  const ddfb::ExperimentSpec spec = resolve(src);
  std::optional<ddfb::GridConstruction> c;
  if (construction == "uniform") c = ddfb::GridConstruction::Uniform;
  if (construction == "companded") c = ddfb::GridConstruction::Companded;
  const auto m = ddfb::protocol_matrices(spec, c, n_fb, what == "c");
  if (what == "a_tx") ddfb::write_matrix(fs::path(out), m.a_tx);
  else if (what == "a_rx") ddfb::write_matrix(fs::path(out), m.a_rx);
  else if (what == "s") ddfb::write_matrix(fs::path(out), m.s);
  else if (what == "q") ddfb::write_matrix(fs::path(out), m.q);
  else if (what == "p") ddfb::write_matrix(fs::path(out), m.p);
  else ddfb::write_matrix(fs::path(out), m.c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ddfb: limited-feedback sparse channel estimation for massive MIMO"};
  app.require_subcommand(1);

  SpecSource run_src;
  std::string out_dir = "ddfb-out";
  int workers = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
  bool timing = false, quiet = false;
  auto* run = app.add_subcommand("run", "Run a Monte-Carlo experiment");
  add_source_options(run, run_src);
  run->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--record-timing", timing, "Record per-scheme wall time (makes records.csv run-dependent)");
  run->add_flag("--quiet", quiet, "No progress or summary output");

  auto* list = app.add_subcommand("list-presets", "List available presets");

  SpecSource dump_src;
  auto* dump = app.add_subcommand("dump-config", "Print the fully resolved config (defaults when no source is given)");
  add_source_options(dump, dump_src);

  SpecSource exp_src;
  std::string what, exp_out, construction = "default";
  int n_fb = 0;
  auto* exp = app.add_subcommand("export-matrix", "Write a protocol matrix in the DDFBMAT binary format");
  add_source_options(exp, exp_src);
  exp->add_option("--matrix", what, "Matrix to export")
      ->required()
      ->check(CLI::IsMember({"a_tx", "a_rx", "s", "q", "p", "c"}));
  exp->add_option("--out", exp_out, "Output file")->required();
  exp->add_option("--construction", construction, "Transmit dictionary")
      ->check(CLI::IsMember({"default", "uniform", "companded"}));
  exp->add_option("--n-fb", n_fb, "Compression width (0: system value)")->check(CLI::NonNegativeNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_src, out_dir, workers, timing, quiet);
    if (*list) {
      for (const auto& p : ddfb::list_presets()) fmt::print("{:<18} {}\n", p.name, p.summary);
      return 0;
    }
    if (*dump) {
      ddfb::write_spec(std::cout, resolve(dump_src));
      return 0;
    }
    if (*exp) return cmd_export(exp_src, what, exp_out, construction, n_fb);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
  return 0;
}
