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

#include "pace/carrier_arraying.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "pace/pll_core.hpp"

namespace pace
{

void ArrayingConfig::validate() const
{
    if (antennas.empty())
        throw std::invalid_argument("ArrayingConfig: antenna set must not be empty");
    if (std::set<int>(antennas.begin(), antennas.end()).size() != antennas.size())
        throw std::invalid_argument("ArrayingConfig: antenna indices must be distinct");
    for (int m : antennas)
        if (m < 0)
            throw std::invalid_argument("ArrayingConfig: antenna indices must be non-negative");
    if (!(mu > 0.0) || !(gp_rule > 0.0) || !(epsilon_p >= 0.0))
        throw std::invalid_argument("ArrayingConfig: mu and gp_rule must be positive, epsilon_p non-negative");
    if (!(dt > 0.0) || !(duration > 0.0))
        throw std::invalid_argument("ArrayingConfig: dt and duration must be positive");
    if (!(dt * std::max(mu, gp_rule) < 0.1))
        throw std::invalid_argument("ArrayingConfig: step too large for the loop gains");
}

void ArrayingConfig::validate(int num_rx) const
{
    validate();
    for (int m : antennas)
        if (m >= num_rx)
            throw std::invalid_argument("ArrayingConfig: antenna index outside the RX array");
}

ArrayingConfig ArrayingConfig::defaults_for(const SystemParams &params, double f_offset_p)
{
    ArrayingConfig c;
    c.mu = kTwoPi / params.symbol_time;
    c.gp_rule = kPi * std::abs(f_offset_p);
    c.epsilon_p = 4.0 / params.symbol_time;
    c.f_offset_p = f_offset_p;
    c.dt = params.sample_time();
    c.duration = params.window_end();
    return c;
}

double a_rss(std::span<const cd> amplitudes)
{
    double s = 0.0;
    for (cd a : amplitudes)
        s += std::norm(a);
    return std::sqrt(s);
}

ArrayedTrace simulate_arrayed_pll(const ArrayingConfig &config, std::span<const cd> amplitudes,
                                  const std::vector<std::vector<cd>> &noises)
{
    config.validate();
    const std::size_t nm = config.antennas.size();
    if (amplitudes.size() != nm)
        throw std::invalid_argument("simulate_arrayed_pll: one amplitude per selected antenna required");
    if (!noises.empty() && noises.size() != nm)
        throw std::invalid_argument("simulate_arrayed_pll: one noise sequence per selected antenna required");
    const std::size_t n = trace_length(config.duration, config.dt);
    for (const auto &w : noises)
        if (w.size() < n)
            throw std::invalid_argument("simulate_arrayed_pll: noise shorter than the simulated duration");

    std::vector<double> mag(nm), g_sec(nm);
    std::vector<cd> derot(nm);
    ArrayedTrace tr;
    tr.dt = config.dt;
    tr.ref_phases.resize(nm);
    for (std::size_t m = 0; m < nm; ++m)
    {
        mag[m] = std::abs(amplitudes[m]);
        if (!(mag[m] > 0.0))
            throw std::invalid_argument("simulate_arrayed_pll: every selected antenna needs a non-zero amplitude");
        g_sec[m] = config.mu / mag[m];
        derot[m] = cd(0.0, -1.0) * std::conj(amplitudes[m]) / mag[m];
        tr.ref_phases[m] = -std::arg(derot[m]);
    }
    const double g_pri = config.primary_gain(a_rss(amplitudes));
    const double drift = kTwoPi * config.f_offset_p;
    const double dt = config.dt;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    tr.theta.resize(n);
    tr.phi.assign(nm, std::vector<double>(n));
    std::vector<double> phi(nm, 0.0);
    double theta = 0.0;
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        tr.theta[i] = theta;
        double v = 0.0;
        for (std::size_t m = 0; m < nm; ++m)
        {
            tr.phi[m][i] = phi[m];
            const double x = phi[m] + theta;
            double d = -mag[m] * std::sin(x);
            if (!noises.empty())
                d += (noises[m][i] * derot[m] * std::polar(1.0, -x)).real();
            v += d / g_sec[m];
            phi[m] += dt * g_sec[m] * inv_sqrt2 * d;
        }
        theta += dt * (g_pri * inv_sqrt2 * (v + z) - drift);
        z += dt * config.epsilon_p * v;
        if (!(std::abs(theta) < 1e6))
            throw SimulationDiagnostic("simulate_arrayed_pll: primary phase diverged");
    }
    return tr;
}

namespace
{

struct ArrayedShape
{
    spectrum::PolePair poles;
    double scale; // multiplies shape(f) to give the spectral density per unit N0
};

ArrayedShape arrayed_shape(const ArrayingConfig &config, double a_rss)
{
    if (!(a_rss > 0.0))
        throw std::invalid_argument("arrayed loop: combined amplitude must be non-zero");
    const double a2 = a_rss * a_rss;
    const double gp = config.primary_gain(a_rss);
    const double lead = std::sqrt(2.0) * config.mu;
    // sqrt2 mu s^2 + (mu^2 + A^2 Gp) s + eps A^2 Gp
    const auto p = spectrum::poles((config.mu * config.mu + a2 * gp) / lead, config.epsilon_p * a2 * gp / lead);
    return {p, 0.5 * a2 * gp * gp / (lead * lead)};
}

} // namespace

std::vector<double> arrayed_linear_psd(const ArrayingConfig &config, double a_rss, double noise_psd,
                                       std::span<const double> f_grid, const Band &band)
{
    const auto sh = arrayed_shape(config, a_rss);
    std::vector<double> out;
    out.reserve(f_grid.size());
    for (double f : f_grid)
    {
        const bool inside = f >= -band.below && f <= band.above;
        out.push_back(inside ? noise_psd * sh.scale * spectrum::shape(config.epsilon_p, sh.poles, f) : 0.0);
    }
    return out;
}

ArrayedLinearStats arrayed_linear_variance(const ArrayingConfig &config, double a_rss, double noise_psd, const Band &band)
{
    if (!(config.mu > 0.0))
        throw std::invalid_argument("arrayed_linear_variance: mu must be positive");
    const auto sh = arrayed_shape(config, a_rss);
    const double a2 = a_rss * a_rss;
    const double r = config.primary_gain(a_rss) / config.mu; // G_p / mu
    const double rt2 = std::sqrt(2.0);

    ArrayedLinearStats s;
    s.variance = (a2 * r + rt2 * config.epsilon_p) * r * noise_psd / (4.0 * rt2 * (config.mu + a2 * r));
    s.variance_bound = (a2 * r / rt2 + config.epsilon_p) * noise_psd / (4.0 * a2);
    const bool full = band.below == 0.0 && band.above == 0.0;
    s.band_variance = full ? s.variance : noise_psd * sh.scale * spectrum::shape_integral(config.epsilon_p, sh.poles, band);
    return s;
}

} // namespace pace
