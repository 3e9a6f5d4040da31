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

#include "ddfb/metrics.hpp"
#include "ddfb/rng.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace ddfb {

namespace {

// Shared, read-only objects of one sweep point.
struct DictionarySet {
  ComplexMatrix a_tx;
  ComplexMatrix a_rx;
  ComplexMatrix q;
  double omp_eps = 0.0;  // default threshold for eps_factor = 1
};

struct CompressionSet {
  ComplexMatrix p;
  RealMatrix c;           // only when a full-dimension one-bit scheme needs it
  double c_norm_sq = -1.0;
};

struct Protocol {
  ExperimentSpec spec;  // resolved at the sweep value
  double noise_power = 0.0;
  ComplexMatrix s;
  std::vector<double> grid_tx;  // uniform grids for on-grid path draws
  std::vector<double> grid_rx;
  std::map<GridConstruction, DictionarySet> dicts;
  std::map<std::pair<GridConstruction, int>, CompressionSet> comps;

  GridConstruction construction(const SchemeConfig& sc) const {
    return sc.tx_construction.value_or(spec.dictionary.tx_construction);
  }
  int n_fb(const SchemeConfig& sc) const { return sc.n_fb > 0 ? sc.n_fb : spec.system.n_fb; }
  const DictionarySet& dict(const SchemeConfig& sc) const { return dicts.at(construction(sc)); }
  const CompressionSet& comp(const SchemeConfig& sc) const { return comps.at({construction(sc), n_fb(sc)}); }
};

bool uses_compression(SchemeKind k) {
  return k == SchemeKind::OneBitCs || k == SchemeKind::OneBitMle || k == SchemeKind::HybridCs ||
         k == SchemeKind::HybridMle;
}

bool uses_dictionary(SchemeKind k) { return uses_compression(k) || k == SchemeKind::OmpSq; }

bool needs_full_c(SchemeKind k) { return k == SchemeKind::OneBitCs || k == SchemeKind::OneBitMle; }

AngleDictionary make_dictionary(GridConstruction c, const DirectivityPattern& pattern, const DictionaryConfig& d,
                                int n) {
  if (c == GridConstruction::Companded) return companded_grid(pattern, d.lower, d.upper, n);
  return uniform_grid(d.lower, d.upper, n);
}

std::unique_ptr<Protocol> build_protocol(const ExperimentSpec& spec) {
  auto pr = std::make_unique<Protocol>();
  pr->spec = spec;
  pr->spec.tx.array.num_elements = spec.system.m_tx;
  pr->spec.rx.array.num_elements = spec.system.m_rx;
  pr->noise_power = noise_power(spec);
  pr->spec.scenario.noise_power_w = pr->noise_power;
  const auto& sys = pr->spec.system;
  const auto& dc = pr->spec.dictionary;

  Rng training_rng(derive_seed(spec.master_seed, stream::kTraining, 0));
  pr->s = training_matrix(sys.m_tx, sys.n_tr, pr->spec.scenario.tx_power_w, training_rng);
  pr->grid_tx = uniform_grid(dc.lower, dc.upper, dc.g_tx).angles;
  pr->grid_rx = uniform_grid(dc.lower, dc.upper, dc.g_rx).angles;

  const double sigma = std::sqrt(pr->noise_power);
  for (const auto& sc : pr->spec.schemes) {
    if (!uses_dictionary(sc.kind)) continue;
    const GridConstruction c = pr->construction(sc);
    if (!pr->dicts.count(c)) {
      const auto dict_tx = make_dictionary(c, pr->spec.tx.pattern, dc, dc.g_tx);
      const auto dict_rx = make_dictionary(dc.rx_construction, pr->spec.rx.pattern, dc, dc.g_rx);
      DictionarySet ds;
      std::tie(ds.a_tx, ds.a_rx) = build_dictionary_matrices(dict_tx, dict_rx, pr->spec.tx, pr->spec.rx);
      ds.q = build_sensing(pr->s, ds.a_tx, ds.a_rx);
      ds.omp_eps = omp_default_eps(ds.q, sigma);
      pr->dicts.emplace(c, std::move(ds));
    }
    if (!uses_compression(sc.kind)) continue;
    const auto key = std::make_pair(c, pr->n_fb(sc));
    auto it = pr->comps.find(key);
    if (it == pr->comps.end()) {
      // Keyed by N_fb only, so every dictionary and sweep point shares the selection.
      Rng rng(derive_seed(spec.master_seed, stream::kCompression, static_cast<std::uint64_t>(key.second)));
      CompressionSet cs;
      cs.p = build_compression(static_cast<Index>(sys.m_rx) * sys.n_tr, key.second, rng);
      it = pr->comps.emplace(key, std::move(cs)).first;
    }
    if (needs_full_c(sc.kind) && it->second.c.size() == 0) {
      it->second.c = build_real_stacked(pr->dicts.at(c).q, it->second.p);
      it->second.c_norm_sq = spectral_norm_sq(it->second.c);
    }
  }
  return pr;
}

std::size_t bit_budget(const Protocol& pr, const SchemeConfig& sc) {
  const auto& sys = pr.spec.system;
  const Index g = static_cast<Index>(pr.spec.dictionary.g_tx) * pr.spec.dictionary.g_rx;
  switch (sc.kind) {
    case SchemeKind::OmpSq: return omp_sq_bits(static_cast<std::size_t>(sc.max_atoms), g, sc.q_bits);
    case SchemeKind::OneBitCs:
    case SchemeKind::OneBitMle: return onebit_bits(pr.n_fb(sc));
    case SchemeKind::HybridCs:
    case SchemeKind::HybridMle: return hybrid_bits(pr.n_fb(sc), static_cast<std::size_t>(sc.max_atoms), g);
    case SchemeKind::LsSq: return ls_sq_bits(sys.m_tx, sys.m_rx, sc.q_bits);
    case SchemeKind::LsVq: return ls_vq_bits(sys.m_tx, sc.q_bits);
    case SchemeKind::Perfect: return 0;
  }
  return 0;
}

OneBitSolver make_solver(const SchemeConfig& sc, const Protocol& pr, const PathRealization& paths) {
  const bool cs = sc.kind == SchemeKind::OneBitCs || sc.kind == SchemeKind::HybridCs;
  if (cs) {
    CsConfig cfg;
    cfg.zeta = sc.zeta;
    const double p_alpha = paths.aggregate_power();
    switch (sc.r2_mode) {
      case RadiusMode::Fixed: cfg.r2 = sc.r2; break;
      case RadiusMode::PathPower: cfg.r2 = p_alpha; break;
      case RadiusMode::GainPower:
        cfg.r2 = std::sqrt(static_cast<double>(pr.spec.system.m_tx) * pr.spec.system.m_rx /
                           static_cast<double>(paths.paths.size())) *
                 p_alpha;
        break;
    }
    return cfg;
  }
  MleConfig cfg;
  cfg.zeta = sc.zeta;
  cfg.sigma_z = std::sqrt(pr.noise_power / 2.0);
  cfg.max_iters = sc.max_iters;
  cfg.rel_tol = sc.rel_tol;
  return cfg;
}

struct SchemeOutcome {
  ComplexMatrix h_hat;
  std::size_t bits = 0;
  int iterations = 0;
};

SchemeOutcome run_scheme(const SchemeConfig& sc, const Protocol& pr, const ComplexMatrix& h, const ComplexMatrix& y,
                         const PathRealization& paths) {
  SchemeOutcome out;
  auto take = [&out](const FeedbackPayload& payload, ChannelEstimate est) {
    out.bits = payload.bit_count;
    out.iterations = est.solver_iterations;
    out.h_hat = std::move(est.h_hat);
  };
  switch (sc.kind) {
    case SchemeKind::Perfect:
      out.h_hat = h;
      break;
    case SchemeKind::OmpSq: {
      const auto& d = pr.dict(sc);
      SparseEstimate ue;
      const auto payload = ue_encode_omp_sq(y, d.q, sc.max_atoms, sc.eps_factor * d.omp_eps, sc.q_bits, &ue);
      take(payload, bs_decode_omp_sq(payload, d.a_tx, d.a_rx));
      out.iterations = ue.iterations;
      break;
    }
    case SchemeKind::OneBitCs:
    case SchemeKind::OneBitMle: {
      const auto& d = pr.dict(sc);
      const auto& c = pr.comp(sc);
      const auto payload = ue_encode_onebit(y, c.p);
      take(payload, bs_decode_onebit(payload, c.c, make_solver(sc, pr, paths), d.a_tx, d.a_rx, c.c_norm_sq));
      break;
    }
    case SchemeKind::HybridCs:
    case SchemeKind::HybridMle: {
      const auto& d = pr.dict(sc);
      const auto& c = pr.comp(sc);
      const auto payload = ue_encode_hybrid(y, d.q, c.p, sc.max_atoms, sc.eps_factor * d.omp_eps);
      take(payload, bs_decode_hybrid(payload, d.q, c.p, make_solver(sc, pr, paths), d.a_tx, d.a_rx));
      break;
    }
    case SchemeKind::LsSq: {
      const auto payload = ue_encode_ls_sq(y, pr.s, sc.q_bits);
      take(payload, bs_decode_ls_sq(payload));
      break;
    }
    case SchemeKind::LsVq: {
      const auto payload = ue_encode_ls_vq(y, pr.s, sc.q_bits);
      take(payload, bs_decode_ls_vq(payload));
      break;
    }
  }
  return out;
}

std::vector<TrialRecord> run_trial(const Protocol& pr, double sweep_value, int trial, bool timing) {
  const auto& spec = pr.spec;
  const int users = spec.system.users;
  Rng rng(trial_seed(spec.master_seed, static_cast<std::uint64_t>(trial)));

  std::vector<PathRealization> paths(static_cast<std::size_t>(users));
  std::vector<ComplexMatrix> h(static_cast<std::size_t>(users)), y(static_cast<std::size_t>(users));
  const GridPair grids{&pr.grid_tx, &pr.grid_rx};
  for (int k = 0; k < users; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    paths[uk] = draw_paths(spec.scenario, spec.tx.array, spec.rx.array, grids, rng);
    h[uk] = assemble_channel(paths[uk], spec.tx, spec.rx);
    y[uk] = simulate_training(h[uk], pr.s, pr.noise_power, rng);
  }

  std::vector<TrialRecord> out;
  out.reserve(spec.schemes.size());
  for (const auto& sc : spec.schemes) {
    const auto t0 = std::chrono::steady_clock::now();
    TrialRecord rec;
    rec.sweep_value = sweep_value;
    rec.trial_index = trial;
    rec.scheme_id = sc.id;
    rec.bit_budget = bit_budget(pr, sc);
    ComplexMatrix t_hat(users, spec.system.m_tx);
    double nrmse_sum = 0.0, gain_sum = 0.0;
    for (int k = 0; k < users; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const SchemeOutcome o = run_scheme(sc, pr, h[uk], y[uk], paths[uk]);
      nrmse_sum += nrmse(o.h_hat, h[uk]);
      gain_sum += beamforming_gain(h[uk], o.h_hat, spec.scenario.tx_power_w);
      rec.bit_count = std::max(rec.bit_count, o.bits);
      rec.solver_iterations += o.iterations;
      if (users > 1) t_hat.row(k) = o.h_hat.row(0);
    }
    rec.nrmse = nrmse_sum / users;
    rec.beamforming_gain = gain_sum / users;
    if (users > 1) {
      MultiuserContext ctx;
      ctx.channels.resize(users, spec.system.m_tx);
      for (int k = 0; k < users; ++k) ctx.channels.row(k) = h[static_cast<std::size_t>(k)].row(0);
      ctx.tx_power = spec.scenario.tx_power_w;
      ctx.noise_power = pr.noise_power;
      ctx.coherence_symbols = spec.system.coherence_symbols;
      ctx.training_symbols = spec.system.n_tr;
      try {
        rec.sum_rate = sinr_and_sum_rate(ctx, zf_precoder(t_hat).v).sum_rate;
      } catch (const std::domain_error&) {
        rec.sum_rate = 0.0;  // rank-deficient estimate: no ZF transmission possible
      }
    }
    if (timing)
      rec.wall_time_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(rec));
  }
  return out;
}

std::string f17(double v) { return fmt::format("{:.17g}", v); }

void mean_stderr(const std::vector<double>& v, double& mean, double& se) {
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  mean = sum / n;
  if (v.size() < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace

DictionaryMatrices protocol_matrices(const ExperimentSpec& spec, std::optional<GridConstruction> tx_construction,
                                     int n_fb, bool with_c) {
  validate(spec);
  ExperimentSpec point = at_sweep_value(spec, spec.sweep.values.front());
  SchemeConfig probe;
  probe.id = "probe";
  probe.kind = with_c ? SchemeKind::OneBitMle : SchemeKind::HybridMle;
  probe.n_fb = n_fb;
  probe.tx_construction = tx_construction;
  point.schemes = {probe};
  const auto pr = build_protocol(point);
  const auto& d = pr->dict(probe);
  const auto& c = pr->comp(probe);
  return {d.a_tx, d.a_rx, pr->s, d.q, c.p, c.c};
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options) {
  validate(spec);
  const std::size_t n_points = spec.sweep.values.size();
  const auto trials = static_cast<std::size_t>(spec.trials);

  std::vector<std::unique_ptr<Protocol>> protocols;
  protocols.reserve(n_points);
  for (double v : spec.sweep.values) {
    ExperimentSpec point = at_sweep_value(spec, v);
    validate(point);
    protocols.push_back(build_protocol(point));
  }

  const std::size_t total = n_points * trials;
  std::vector<std::vector<TrialRecord>> slots(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex mu;
  std::condition_variable cv;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      const std::size_t point = task / trials;
      const int trial = static_cast<int>(task % trials);
      try {
        slots[task] = run_trial(*protocols[point], spec.sweep.values[point], trial, options.record_timing);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
      ++done;
      cv.notify_one();
    }
  };

  const int n_workers = std::max(1, std::min<int>(options.workers, static_cast<int>(total)));
  std::vector<std::thread> pool;
  for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
  if (options.progress) {
    std::size_t reported = 0;
    std::unique_lock lock(mu);
    while (reported < total && !failure) {
      cv.wait_for(lock, std::chrono::milliseconds(200), [&] { return done.load() > reported || failure; });
      const std::size_t now = done.load();
      if (now > reported) {
        reported = now;
        lock.unlock();
        options.progress(reported, total);
        lock.lock();
      }
    }
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.records.reserve(total * spec.schemes.size());
  for (auto& slot : slots)
    for (auto& r : slot) result.records.push_back(std::move(r));
  result.summary = summarize(result.records);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  // Keyed by first appearance so the order follows the records.
  std::vector<std::pair<double, std::string>> keys;
  std::map<std::pair<double, std::string>, std::vector<const TrialRecord*>> groups;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.sweep_value, r.scheme_id);
    auto& g = groups[key];
    if (g.empty()) keys.push_back(key);
    g.push_back(&r);
  }
  std::vector<SummaryRow> out;
  for (const auto& key : keys) {
    const auto& g = groups.at(key);
    std::vector<double> nr, gain, rate;
    double bits = 0.0, iters = 0.0;
    for (const auto* r : g) {
      nr.push_back(r->nrmse);
      gain.push_back(r->beamforming_gain);
      rate.push_back(r->sum_rate);
      bits += static_cast<double>(r->bit_count);
      iters += r->solver_iterations;
    }
    SummaryRow row;
    row.sweep_value = key.first;
    row.scheme_id = key.second;
    row.trials = static_cast<int>(g.size());
    mean_stderr(nr, row.nrmse_mean, row.nrmse_stderr);
    mean_stderr(gain, row.gain_mean, row.gain_stderr);
    mean_stderr(rate, row.sum_rate_mean, row.sum_rate_stderr);
    row.bit_count_mean = bits / static_cast<double>(g.size());
    row.bit_budget = g.front()->bit_budget;
    row.iterations_mean = iters / static_cast<double>(g.size());
    out.push_back(std::move(row));
  }
  return out;
}

const std::vector<std::string>& records_columns() {
  static const std::vector<std::string> c{"sweep_value", "trial_index",     "scheme_id",  "nrmse",
                                          "beamforming_gain", "sum_rate",   "bit_count",  "bit_budget",
                                          "solver_iterations", "wall_time_ms"};
  return c;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> c{"sweep_value",
                                          "scheme_id",
                                          "trials",
                                          "nrmse_mean",
                                          "nrmse_stderr",
                                          "beamforming_gain_mean",
                                          "beamforming_gain_stderr",
                                          "sum_rate_mean",
                                          "sum_rate_stderr",
                                          "bit_count_mean",
                                          "bit_budget",
                                          "solver_iterations_mean"};
  return c;
}

namespace {
void write_preamble(std::ostream& os, const char* schema, const ExperimentSpec& spec,
                    const std::vector<std::string>& columns) {
  os << "# schema: " << schema << '\n' << "# sweep_axis: " << to_string(spec.sweep.axis) << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
}
}  // namespace

void write_records_csv(std::ostream& os, const ExperimentSpec& spec, const std::vector<TrialRecord>& records) {
  write_preamble(os, kRecordsSchema, spec, records_columns());
  for (const auto& r : records)
    fmt::print(os, "{},{},{},{},{},{},{},{},{},{}\n", f17(r.sweep_value), r.trial_index, r.scheme_id, f17(r.nrmse),
               f17(r.beamforming_gain), f17(r.sum_rate), r.bit_count, r.bit_budget, r.solver_iterations,
               f17(r.wall_time_ms));
}

void write_summary_csv(std::ostream& os, const ExperimentSpec& spec, const std::vector<SummaryRow>& rows) {
  write_preamble(os, kSummarySchema, spec, summary_columns());
  for (const auto& r : rows)
    fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{},{}\n", f17(r.sweep_value), r.scheme_id, r.trials,
               f17(r.nrmse_mean), f17(r.nrmse_stderr), f17(r.gain_mean), f17(r.gain_stderr), f17(r.sum_rate_mean),
               f17(r.sum_rate_stderr), f17(r.bit_count_mean), r.bit_budget, f17(r.iterations_mean));
}

}  // namespace ddfb
