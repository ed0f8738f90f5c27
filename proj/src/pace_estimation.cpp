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

#include "pace/pace_estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pace
{

PhaseTrack track_of(const PllTrace &trace)
{
    return {trace.theta, trace.dt, trace.ref_phase};
}

PhaseTrack track_of(const ArrayedTrace &trace)
{
    return {trace.theta, trace.dt, 0.0};
}

WindowWeights window_weights(std::size_t n, double dt, double t1, double t2)
{
    if (!(dt > 0.0) || !(t1 >= 0.0) || !(t2 > t1))
        throw std::invalid_argument("window_weights: need dt > 0 and 0 <= t1 < t2");
    if (static_cast<double>(n) * dt < t2 * (1.0 - 1e-12))
        throw std::invalid_argument("window_weights: trace ends before the estimation window");
    WindowWeights ww;
    ww.first = static_cast<std::size_t>(std::floor(t1 / dt));
    const auto last = std::min(n, static_cast<std::size_t>(std::ceil(t2 / dt)));
    for (std::size_t i = ww.first; i < last; ++i)
    {
        const double lo = std::max(t1, static_cast<double>(i) * dt);
        const double hi = std::min(t2, static_cast<double>(i + 1) * dt);
        ww.w.push_back(std::max(0.0, hi - lo));
    }
    return ww;
}

namespace
{

struct WindowSums
{
    WindowWeights ww;
    std::vector<cd> rot; // exp(-j (ref + theta_i)) over the window
    cd signal_sum = 0.0; // sum_i w_i rot_i
    double weight_sq = 0.0;
};

WindowSums window_sums(const PhaseTrack &track, const SystemParams &params)
{
    WindowSums s;
    s.ww = window_weights(track.theta.size(), track.dt, params.window_start(), params.window_end());
    s.rot.resize(s.ww.w.size());
    for (std::size_t i = 0; i < s.ww.w.size(); ++i)
    {
        s.rot[i] = std::polar(1.0, -(track.ref_phase + track.theta[s.ww.first + i]));
        s.signal_sum += s.ww.w[i] * s.rot[i];
        s.weight_sq += s.ww.w[i] * s.ww.w[i];
    }
    return s;
}

cd integrate_noise(const WindowSums &s, const std::vector<cd> &noise)
{
    if (noise.size() < s.ww.first + s.ww.w.size())
        throw std::invalid_argument("simulate_integrator: noise shorter than the estimation window");
    cd acc = 0.0;
    for (std::size_t i = 0; i < s.ww.w.size(); ++i)
        acc += s.ww.w[i] * noise[s.ww.first + i] * s.rot[i];
    return acc;
}

} // namespace

PaceEstimate simulate_integrator(const ChannelSnapshot &snap, const SystemParams &params, const PhaseTrack &track,
                                 const std::vector<std::vector<cd>> &noises)
{
    const CVec amp = ref_tone_amplitudes(snap, params);
    if (!noises.empty() && noises.size() != static_cast<std::size_t>(amp.size()))
        throw std::invalid_argument("simulate_integrator: one noise sequence per RX antenna required");
    const auto s = window_sums(track, params);
    const double inv_d2 = 1.0 / params.estimate_symbols;
    PaceEstimate est;
    est.mode = EstimateMode::simulated;
    est.i_pace = amp * (s.signal_sum * inv_d2);
    for (std::size_t m = 0; m < noises.size(); ++m)
        est.i_pace[static_cast<Eigen::Index>(m)] += integrate_noise(s, noises[m]) * inv_d2;
    return est;
}

PaceEstimate simulate_integrator(const CVec &ref_amplitudes, const SystemParams &params, const PhaseTrack &track,
                                 std::span<const int> explicit_antennas,
                                 const std::vector<std::vector<cd>> &explicit_noises, Rng &rng)
{
    if (explicit_antennas.size() != explicit_noises.size())
        throw std::invalid_argument("simulate_integrator: one noise sequence per listed antenna required");
    const auto s = window_sums(track, params);
    const double inv_d2 = 1.0 / params.estimate_symbols;
    const Eigen::Index M = ref_amplitudes.size();
    std::vector<char> listed(static_cast<std::size_t>(M), 0);
    for (int m : explicit_antennas)
    {
        if (m < 0 || m >= M)
            throw std::invalid_argument("simulate_integrator: antenna index outside the RX array");
        listed[static_cast<std::size_t>(m)] = 1;
    }

    PaceEstimate est;
    est.mode = EstimateMode::simulated;
    est.i_pace = ref_amplitudes * (s.signal_sum * inv_d2);
    const double aggregate_var = params.noise_psd / track.dt * s.weight_sq * inv_d2 * inv_d2;
    for (Eigen::Index m = 0; m < M; ++m)
        if (!listed[static_cast<std::size_t>(m)])
            est.i_pace[m] += rng.complex_normal(aggregate_var);
    for (std::size_t k = 0; k < explicit_antennas.size(); ++k)
        est.i_pace[explicit_antennas[k]] += integrate_noise(s, explicit_noises[k]) * inv_d2;
    return est;
}

PaceEstimate analytic_pace(const CVec &ref_amplitudes, const SystemParams &params, double var_theta, Rng &rng,
                           double ref_phase)
{
    if (!(var_theta >= 0.0))
        throw std::invalid_argument("analytic_pace: phase variance must be non-negative");
    // sqrt(T_cs E_r) H t = T_cs A
    const double tcs = params.cs_time();
    const cd factor = tcs * std::exp(-0.5 * var_theta) * std::polar(1.0, -ref_phase);
    const double noise_var = tcs * params.noise_psd / params.estimate_symbols;
    PaceEstimate est;
    est.mode = EstimateMode::analytic;
    est.var_theta = var_theta;
    est.i_pace = ref_amplitudes * factor;
    for (Eigen::Index m = 0; m < est.i_pace.size(); ++m)
        est.i_pace[m] += rng.complex_normal(noise_var);
    return est;
}

PaceEstimate analytic_pace(const ChannelSnapshot &snap, const SystemParams &params, double var_theta, std::uint64_t seed,
                           double ref_phase)
{
    Rng rng(seed);
    return analytic_pace(ref_tone_amplitudes(snap, params), params, var_theta, rng, ref_phase);
}

double integrator_mean_factor(const PhaseTrack &track, const SystemParams &params)
{
    PhaseTrack bare = track;
    bare.ref_phase = 0.0;
    const auto s = window_sums(bare, params);
    return std::min(1.0, std::abs(s.signal_sum) / (params.estimate_symbols * params.cs_time()));
}

} // namespace pace
