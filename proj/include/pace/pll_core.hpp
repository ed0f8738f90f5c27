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
#include <optional>
#include <span>
#include <vector>

#include "pace/loop_spectrum.hpp"
#include "pace/system_model.hpp"

namespace pace
{

// Type-2 loop with filter 1 + epsilon/s. The gain G is derived per input as loop_gain_product / |A1|.
struct PllConfig
{
    double epsilon = 4e6;                    // filter zero [1/s]
    double loop_gain_product = kPi * 5e6;    // G |A1| [1/s]
    double f_offset = 5e6;                   // input minus free-running frequency [Hz]
    double dt = 1e-6 / 1024;                 // step [s]
    double duration = 6.5e-6;                // [s]
    double theta0 = 0.0;

    void validate() const;

    // Loop constants tied to the OFDM grid: epsilon = 4/T_s, G|A1| = pi |f_offset|,
    // dt = T_s/K and a duration covering the reference symbols.
    static PllConfig defaults_for(const SystemParams &params, double f_offset = 5e6);
};

enum class LoopModel
{
    nonlinear, // sinusoidal phase detector
    linear     // phase detector replaced by its small-angle slope
};

struct PllTrace
{
    std::vector<double> theta;
    double dt = 0.0;
    std::optional<double> lock_time;
    PllConfig config;
    double ref_phase = 0.0; // constant rotation applied to the input so that equilibrium sits at zero

    double time(std::size_t i) const { return static_cast<double>(i) * dt; }
};

struct LinearPllStats
{
    double variance = 0.0;      // full-band locked-state variance [rad^2]
    double band_variance = 0.0; // same with noise confined to the signal band
    double variance_bound = 0.0;
    cd a;
    cd b;
    std::vector<double> freqs;
    std::vector<double> psd;
};

// Number of samples covering duration at step dt.
std::size_t trace_length(double duration, double dt);

// White complex Gaussian noise with spectral density N0 over a bandwidth 1/dt.
std::vector<cd> synth_baseband_noise(double noise_psd, double dt, std::size_t n_samples, std::uint64_t seed);

// Integrates the loop for one input amplitude. Empty noise means a noiseless input;
// otherwise noise must hold at least trace_length(duration, dt) samples.
PllTrace simulate_pll(const PllConfig &config, cd a1, std::span<const cd> noise, LoopModel model = LoopModel::nonlinear);

double acquisition_time(const PllConfig &config, double a1_mag);

std::vector<double> linear_psd(const PllConfig &config, double a1_mag, double noise_psd, std::span<const double> f_grid,
                               const Band &band);
double linear_autocorr(const PllConfig &config, double a1_mag, double noise_psd, double tau);
LinearPllStats linear_variance(const PllConfig &config, double a1_mag, double noise_psd, const Band &band = {},
                               std::span<const double> f_grid = {});

// Earliest time after which the windowed mean slope stays under slope_tol and the phase never moves
// more than pi from its value at that time.
std::optional<double> detect_lock(const PllTrace &trace, double window, double slope_tol);

// Band occupied by the subcarriers, [-K1/T_s, K2/T_s].
Band signal_band(const SystemParams &params);

} // namespace pace
