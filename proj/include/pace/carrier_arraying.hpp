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
#include <vector>

#include "pace/loop_spectrum.hpp"
#include "pace/system_model.hpp"

namespace pace
{

// Weighted carrier arraying: one first-order secondary loop per selected antenna feeding a
// type-2 primary loop. Secondary gains follow G_m = mu / |A_m|; the primary gain follows
// G_p = gp_rule * mu / |A_rss|^2.
struct ArrayingConfig
{
    std::vector<int> antennas = {0, 4, 14}; // zero-based RX antenna indices
    double mu = kTwoPi * 1e6;               // |A_m| G_m [1/s]
    double gp_rule = kPi * 5e6;             // G_p |A_rss|^2 / mu [1/s]
    double epsilon_p = 4e6;                 // primary filter zero [1/s]
    double f_if = 1e9;                      // secondary free-running frequency [Hz]
    double f_offset_p = 5e6;                // primary input offset [Hz]
    double dt = 1e-6 / 1024;
    double duration = 6.5e-6;

    void validate() const;
    void validate(int num_rx) const;

    double primary_gain(double a_rss) const { return gp_rule * mu / (a_rss * a_rss); }

    static ArrayingConfig defaults_for(const SystemParams &params, double f_offset_p = 5e6);
};

struct ArrayedTrace
{
    std::vector<double> theta;            // primary phase
    std::vector<std::vector<double>> phi; // secondary phases, one row per selected antenna
    std::vector<double> ref_phases;       // per-antenna constant input rotations
    double dt = 0.0;
};

struct ArrayedLinearStats
{
    double variance = 0.0;
    double band_variance = 0.0;
    double variance_bound = 0.0;
};

double a_rss(std::span<const cd> amplitudes);

// amplitudes and noises are indexed like config.antennas. An empty noise list means noiseless inputs.
ArrayedTrace simulate_arrayed_pll(const ArrayingConfig &config, std::span<const cd> amplitudes,
                                  const std::vector<std::vector<cd>> &noises);

std::vector<double> arrayed_linear_psd(const ArrayingConfig &config, double a_rss, double noise_psd,
                                       std::span<const double> f_grid, const Band &band);

ArrayedLinearStats arrayed_linear_variance(const ArrayingConfig &config, double a_rss, double noise_psd,
                                           const Band &band = {});

} // namespace pace
