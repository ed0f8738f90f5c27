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

#include <span>
#include <string>
#include <vector>

#include "pace/rng.hpp"
#include "pace/system_model.hpp"

namespace pace
{

struct LinkMetrics
{
    std::vector<double> gamma;
    double ise = 0.0;
    std::string scheme;
};

struct PowerAllocation
{
    std::vector<double> e_d;
    double water_level = 0.0;
};

struct EigenResult
{
    CVec vector;
    double value = 0.0;
    int iterations = 0;
    bool degenerate = false; // power iteration did not settle
};

// Data-phase channel seen through the TX beam, precomputed for all subcarriers.
struct DataChannel
{
    BeamformedChannel bc;
    CMat phasors; // L x K, data-phase delays

    DataChannel(const ChannelSnapshot &snap, const SystemParams &params);

    // I^H H(f_k) t for every subcarrier.
    CVec combined_gains(const CVec &combiner) const;
};

// Subcarrier k output of the OFDM demodulator for data symbol x and noise draw W[k] (one entry per antenna).
cd demod_output(const CVec &i_pace, const ChannelSnapshot &snap, const SystemParams &params, cd x, int k,
                const CVec &noise_draw);

// Frequency-domain noise for one subcarrier, CN(0, N0 T_cs / T_s) per antenna.
CVec draw_data_noise(int num_rx, const SystemParams &params, Rng &rng);

std::vector<double> effective_snr(const CVec &i_pace, const ChannelSnapshot &snap, const SystemParams &params);
std::vector<double> effective_snr(const CVec &i_pace, const DataChannel &channel, const SystemParams &params);

// Per-subcarrier matched combining, I = H(f_k) t on every subcarrier.
std::vector<double> perfect_mrc_snr(const DataChannel &channel, const SystemParams &params);

double ise(std::span<const double> gamma);
LinkMetrics link_metrics(std::vector<double> gamma, std::string scheme);

double snr_lower_bound(const ChannelSnapshot &snap, const SystemParams &params, double var_theta, int k);
double ise_lower_bound(const ChannelSnapshot &snap, const SystemParams &params, double var_theta);

// Maximizes sum log(1 + g_k e_k) subject to sum e_k = budget, e_k >= 0.
PowerAllocation waterfill(std::span<const double> gains, double budget);

// (1/K) sum_k H^(f_k) t t^H H^(f_k)^H over design-phase channels.
CMat spatial_correlation(const ChannelSnapshot &snap, const SystemParams &params);
CMat spatial_correlation(const BeamformedChannel &bc, const SystemParams &params);

// Power iteration from the deterministic start given by the largest-norm column of h.
EigenResult principal_eigenvector(const CMat &h, double rel_tol = 1e-10, int max_iter = 10000);

EigenResult statistical_beamformer(const ChannelSnapshot &snap, const SystemParams &params);

// Fraction of the aCSI coherence time spent on channel-estimation pilots.
double ce_overhead(int pilots_per_beam, int n_beams, double cs_time, double t_acsi);

} // namespace pace
