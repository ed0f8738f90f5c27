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
#include <span>
#include <vector>

#include "pace/carrier_arraying.hpp"
#include "pace/pll_core.hpp"
#include "pace/rng.hpp"
#include "pace/system_model.hpp"

namespace pace
{

// Phase of the oscillator that mixes every antenna down, plus its constant input rotation.
struct PhaseTrack
{
    std::span<const double> theta;
    double dt = 0.0;
    double ref_phase = 0.0;
};

PhaseTrack track_of(const PllTrace &trace);
PhaseTrack track_of(const ArrayedTrace &trace); // reference rotation taken as zero

enum class EstimateMode
{
    simulated,
    analytic
};

struct PaceEstimate
{
    CVec i_pace;
    EstimateMode mode = EstimateMode::simulated;
    double var_theta = 0.0;
};

// Exact weights of a piecewise-constant trace over [t1, t2]: sample i covers [i dt, (i+1) dt).
struct WindowWeights
{
    std::size_t first = 0;
    std::vector<double> w;
};
WindowWeights window_weights(std::size_t n, double dt, double t1, double t2);

// Integrate-and-hold over the estimation window. noises holds one sequence per RX antenna,
// or is empty for a noiseless input.
PaceEstimate simulate_integrator(const ChannelSnapshot &snap, const SystemParams &params, const PhaseTrack &track,
                                 const std::vector<std::vector<cd>> &noises);

// Same estimate from precomputed reference amplitudes. Antennas listed in explicit_antennas use
// the given noise sequences; every other antenna gets its integrated noise drawn directly from rng,
// which has the same law because that noise is independent of the oscillator phase.
PaceEstimate simulate_integrator(const CVec &ref_amplitudes, const SystemParams &params, const PhaseTrack &track,
                                 std::span<const int> explicit_antennas,
                                 const std::vector<std::vector<cd>> &explicit_noises, Rng &rng);

// Gaussian surrogate: attenuated signal plus white estimation noise.
PaceEstimate analytic_pace(const ChannelSnapshot &snap, const SystemParams &params, double var_theta, std::uint64_t seed,
                           double ref_phase = 0.0);
PaceEstimate analytic_pace(const CVec &ref_amplitudes, const SystemParams &params, double var_theta, Rng &rng,
                           double ref_phase = 0.0);

// |(1 / (D2 T_cs)) integral of exp(-j theta) over the estimation window|.
double integrator_mean_factor(const PhaseTrack &track, const SystemParams &params);

} // namespace pace
