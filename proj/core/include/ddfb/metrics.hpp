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

#include <vector>

namespace ddfb {

/// ||H_hat - H||_F / ||H||_F. Throws std::invalid_argument for a zero H or
/// mismatched shapes.
double nrmse(const ComplexMatrix& h_hat, const ComplexMatrix& h);

/// P_T |h^H h_hat|^2 / ||h_hat||^2 for column vectors; 0 when h_hat = 0.
double beamforming_gain(const ComplexVector& h, const ComplexVector& h_hat, double tx_power);

/// P_T ||H v||^2 with v the principal right singular vector of H_hat; reduces
/// to the vector form for a single receive antenna. 0 when H_hat = 0.
double beamforming_gain(const ComplexMatrix& h, const ComplexMatrix& h_hat, double tx_power);

struct ZfPrecoder {
  ComplexMatrix v;    // M_T x K, ||V||_F^2 = K
  double t = 0.0;     // T_hat V = t I
};

/// V = t T_hat^H (T_hat T_hat^H)^{-1}, t^2 = K / trace((T_hat T_hat^H)^{-1}).
/// Throws std::domain_error when the reciprocal condition number of
/// T_hat T_hat^H is below 1e-10 (or K > M_T).
ZfPrecoder zf_precoder(const ComplexMatrix& t_hat);

struct MultiuserContext {
  ComplexMatrix channels;  // K x M_T, row k is user k's true channel
  double tx_power = 1.0;   // P_T
  double noise_power = 1.0;  // sigma^2
  int coherence_symbols = 1680;  // U_c
  int training_symbols = 80;     // N_tr
};

struct MultiuserRates {
  std::vector<double> sinr;
  std::vector<double> rate;  // per user, bit/s/Hz including the training prefactor
  double sum_rate = 0.0;
  double interference = 0.0;  // sum_k sum_{k' != k} |h_k v_k'|^2 / sum_k |h_k v_k|^2
};

/// (1 - N_tr / U_c) factor applied to every per-user rate.
double training_prefactor(int training_symbols, int coherence_symbols);

/// gamma_k = P_T |h_k v_k|^2 / (sum_{k' != k} P_T |h_k v_k'|^2 + K sigma^2).
MultiuserRates sinr_and_sum_rate(const MultiuserContext& ctx, const ComplexMatrix& v);

}  // namespace ddfb
