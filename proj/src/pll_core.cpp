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

#include "pace/pll_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pace/rng.hpp"

namespace pace
{

void PllConfig::validate() const
{
    if (!(dt > 0.0) || !(duration > 0.0))
        throw std::invalid_argument("PllConfig: dt and duration must be positive");
    if (!(epsilon >= 0.0) || !(loop_gain_product > 0.0))
        throw std::invalid_argument("PllConfig: loop gain must be positive and epsilon non-negative");
    if (!(dt * loop_gain_product < 0.1))
        throw std::invalid_argument("PllConfig: step too large for the loop gain (dt * G|A1| must stay below 0.1)");
}

PllConfig PllConfig::defaults_for(const SystemParams &params, double f_offset)
{
    PllConfig c;
    c.epsilon = 4.0 / params.symbol_time;
    c.loop_gain_product = kPi * std::abs(f_offset);
    c.f_offset = f_offset;
    c.dt = params.sample_time();
    c.duration = params.window_end();
    return c;
}

std::size_t trace_length(double duration, double dt)
{
    return static_cast<std::size_t>(std::ceil(duration / dt - 1e-9));
}

Band signal_band(const SystemParams &params)
{
    return {params.k_low / params.symbol_time, params.k_high / params.symbol_time};
}

std::vector<cd> synth_baseband_noise(double noise_psd, double dt, std::size_t n_samples, std::uint64_t seed)
{
    std::vector<cd> out(n_samples);
    if (n_samples == 0)
        return out;
    Rng rng(seed);
    const double var = noise_psd / dt;
    for (auto &w : out)
        w = rng.complex_normal(var);
    return out;
}

PllTrace simulate_pll(const PllConfig &config, cd a1, std::span<const cd> noise, LoopModel model)
{
    config.validate();
    const double mag = std::abs(a1);
    if (!(mag > 0.0))
        throw std::invalid_argument("simulate_pll: input amplitude must be non-zero");
    const std::size_t n = trace_length(config.duration, config.dt);
    if (!noise.empty() && noise.size() < n)
        throw std::invalid_argument("simulate_pll: noise shorter than the simulated duration");

    PllTrace tr;
    tr.dt = config.dt;
    tr.config = config;
    // exp(-j ref_phase) = -j |A1| / A1
    const cd derot = cd(0.0, -1.0) * std::conj(a1) / mag;
    tr.ref_phase = -std::arg(derot);
    tr.theta.resize(n);

    const double gain = config.loop_gain_product / mag;
    const double drift = kTwoPi * config.f_offset;
    const double dt = config.dt;
    double theta = config.theta0;
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        tr.theta[i] = theta;
        double u;
        if (model == LoopModel::nonlinear)
        {
            u = -mag * std::sin(theta);
            if (!noise.empty())
                u += (noise[i] * derot * std::polar(1.0, -theta)).real();
        }
        else
        {
            u = -mag * theta;
            if (!noise.empty())
                u += (noise[i] * derot).real();
        }
        theta += dt * (gain * (u + z) - drift);
        z += dt * config.epsilon * u;
        if (!(std::abs(theta) < 1e6))
            throw SimulationDiagnostic("simulate_pll: phase diverged");
    }
    return tr;
}

double acquisition_time(const PllConfig &config, double a1_mag)
{
    if (!(a1_mag > 0.0) || !(config.epsilon > 0.0) || !(config.loop_gain_product > 0.0))
        throw std::invalid_argument("acquisition_time: amplitude, epsilon and loop gain must be positive");
    const double gain = config.loop_gain_product / a1_mag;
    const double r = kTwoPi * config.f_offset / (a1_mag * gain);
    return r * r / config.epsilon;
}

static spectrum::PolePair one_loop_poles(const PllConfig &config)
{
    const double g = config.loop_gain_product;
    return spectrum::poles(g, g * config.epsilon);
}

std::vector<double> linear_psd(const PllConfig &config, double a1_mag, double noise_psd, std::span<const double> f_grid,
                               const Band &band)
{
    if (!(a1_mag > 0.0))
        throw std::invalid_argument("linear_psd: amplitude must be non-zero");
    const double gain = config.loop_gain_product / a1_mag;
    const auto p = one_loop_poles(config);
    std::vector<double> out;
    out.reserve(f_grid.size());
    for (double f : f_grid)
    {
        const bool inside = f >= -band.below && f <= band.above;
        out.push_back(inside ? 0.5 * gain * gain * noise_psd * spectrum::shape(config.epsilon, p, f) : 0.0);
    }
    return out;
}

double linear_autocorr(const PllConfig &config, double a1_mag, double noise_psd, double tau)
{
    if (!(a1_mag > 0.0))
        throw std::invalid_argument("linear_autocorr: amplitude must be non-zero");
    const double gain = config.loop_gain_product / a1_mag;
    return 0.25 * gain * gain * noise_psd * spectrum::shape_autocorr(config.epsilon, one_loop_poles(config), tau);
}

LinearPllStats linear_variance(const PllConfig &config, double a1_mag, double noise_psd, const Band &band,
                               std::span<const double> f_grid)
{
    if (!(a1_mag > 0.0))
        throw std::invalid_argument("linear_variance: no lock possible with zero input amplitude");
    LinearPllStats s;
    const auto p = one_loop_poles(config);
    const double gain = config.loop_gain_product / a1_mag;
    s.a = p.a;
    s.b = p.b;
    s.variance = linear_autocorr(config, a1_mag, noise_psd, 0.0);
    s.variance_bound = noise_psd * (config.loop_gain_product + config.epsilon) / (4.0 * a1_mag * a1_mag);
    const bool full = band.below == 0.0 && band.above == 0.0;
    s.band_variance = full ? s.variance : 0.5 * gain * gain * noise_psd * spectrum::shape_integral(config.epsilon, p, band);
    if (!f_grid.empty())
    {
        s.freqs.assign(f_grid.begin(), f_grid.end());
        const double inf = std::numeric_limits<double>::infinity();
        s.psd = linear_psd(config, a1_mag, noise_psd, f_grid, full ? Band{inf, inf} : band);
    }
    return s;
}

std::optional<double> detect_lock(const PllTrace &trace, double window, double slope_tol)
{
    const std::size_t n = trace.theta.size();
    const auto w = static_cast<std::size_t>(std::max(1.0, std::round(window / trace.dt)));
    if (n <= w)
        throw std::invalid_argument("detect_lock: window must be shorter than the trace");
    const std::size_t last = n - w; // windows start at 0..last-1
    const auto &th = trace.theta;

    double hi = th[n - 1];
    double lo = th[n - 1];
    std::optional<std::size_t> best;
    for (std::size_t i = n; i-- > 0;)
    {
        hi = std::max(hi, th[i]);
        lo = std::min(lo, th[i]);
        if (hi - th[i] >= kPi || th[i] - lo >= kPi)
            break;
        if (i < last)
        {
            const double slope = (th[i + w] - th[i]) / (static_cast<double>(w) * trace.dt);
            if (std::abs(slope) >= slope_tol)
                break;
            best = i;
        }
    }
    if (!best)
        return std::nullopt;
    return trace.time(*best);
}

} // namespace pace
