// SPDX-License-Identifier: Apache-2.0
//
// pacesim: link-level simulator for periodic analog channel estimation
// Copyright (C) 2026 The pacesim authors
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

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pace/experiment_config.hpp"
#include "pace/result_io.hpp"

namespace pace
{

// Recovery-loop input SNR |A1|^2 T_s / N0, solved for N0.
double pll_snr_to_n0(double snr_db, double a1_mag, const SystemParams &params);

// Per-antenna channel SNR beta(0,0) E_cs / (K N0), solved for N0.
double channel_snr_to_n0(double snr_db, double beta00, const SystemParams &params);

// Closed-form locked-state variance of the chosen loop for reference amplitudes A (all RX antennas).
// The single loop listens on the first antenna of the arraying set.
double closed_form_variance(const CVec &ref_amplitudes, const SystemParams &params, const PllConfig &pll,
                            const ArrayingConfig &arraying, bool arrayed);

struct PaceTrial
{
    CVec i_pace;
    double mean_factor = 0.0;
};

// One noisy reference-symbol burst through the nonlinear loop and the integrate-and-hold bank.
PaceTrial pace_trial_nonlinear(const CVec &ref_amplitudes, const SystemParams &params, const PllConfig &pll,
                               const ArrayingConfig &arraying, bool arrayed, std::uint64_t trial_seed);

// Runs fn(0..n-1) on a worker pool. Results must be written to per-index slots by fn.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn);

std::vector<ResultRow> run_fig3(const ExperimentConfig &config);
std::vector<ResultRow> run_ise_vs_snr(const ExperimentConfig &config);
std::vector<ResultRow> run_ise_vs_l(const ExperimentConfig &config);
TraceTable run_pll_trace(const ExperimentConfig &config);
std::vector<OverheadRow> run_overhead(const ExperimentConfig &config);

// Lowest grid x from which |mean_factor - analytic| <= tol holds for every higher x of the scheme.
std::optional<double> threshold_snr(const std::vector<ResultRow> &rows, const std::string &scheme, double tol = 0.05);

// SNR shift in dB that brings the spectral efficiency of gamma_ref down to target_ise.
double snr_gap_db(std::span<const double> gamma_ref, double target_ise);

} // namespace pace
