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

#include "ddfb/experiment.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ddfb {

/// One (sweep value, trial, scheme) outcome. With K > 1 users, nrmse and
/// beamforming_gain are averaged over users, bit_count is the largest
/// per-user payload and solver_iterations is summed; sum_rate is 0 for K = 1.
struct TrialRecord {
  double sweep_value = 0.0;
  int trial_index = 0;
  std::string scheme_id;
  double nrmse = 0.0;
  double beamforming_gain = 0.0;
  double sum_rate = 0.0;
  std::size_t bit_count = 0;   // realized payload length
  std::size_t bit_budget = 0;  // worst case (full L-bar support)
  int solver_iterations = 0;
  double wall_time_ms = 0.0;   // 0 unless timing is requested
};

struct SummaryRow {
  double sweep_value = 0.0;
  std::string scheme_id;
  int trials = 0;
  double nrmse_mean = 0.0, nrmse_stderr = 0.0;
  double gain_mean = 0.0, gain_stderr = 0.0;
  double sum_rate_mean = 0.0, sum_rate_stderr = 0.0;
  double bit_count_mean = 0.0;
  std::size_t bit_budget = 0;
  double iterations_mean = 0.0;
};

struct RunOptions {
  int workers = 1;
  bool record_timing = false;
  /// Called from the coordinating thread as trials complete; updates may be
  /// coalesced, and the last call reports done == total.
  std::function<void(std::size_t done, std::size_t total)> progress;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;  // ordered by sweep value, trial, scheme
  std::vector<SummaryRow> summary;   // ordered by sweep value, scheme
};

/// Protocol objects (dictionaries, training, compression, and optionally the
/// real-stacked C) exactly as a run builds them for `spec` at its first sweep
/// value. `n_fb` = 0 uses the system value.
DictionaryMatrices protocol_matrices(const ExperimentSpec& spec, std::optional<GridConstruction> tx_construction = {},
                                     int n_fb = 0, bool with_c = false);

/// Runs every sweep value x trial x scheme. Output depends only on the spec
/// (including its master seed), not on the worker count.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& options = {});

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

inline constexpr const char* kRecordsSchema = "ddfb-records/1";
inline constexpr const char* kSummarySchema = "ddfb-summary/1";

/// CSV writers: a "# schema: <name>" line, a "# sweep_axis: <axis>" line, the
/// header row, then one row per entry; floats use 17 significant digits.
void write_records_csv(std::ostream& os, const ExperimentSpec& spec, const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& os, const ExperimentSpec& spec, const std::vector<SummaryRow>& rows);

/// Column names in file order.
const std::vector<std::string>& records_columns();
const std::vector<std::string>& summary_columns();

}  // namespace ddfb
