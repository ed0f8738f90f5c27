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

#include "pace/link_eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pace
{

DataChannel::DataChannel(const ChannelSnapshot &snap, const SystemParams &params)
    : bc(beamform(snap)), phasors(bc.delay_phasors(params, DelayPhase::data))
{
}

CVec DataChannel::combined_gains(const CVec &combiner) const
{
    // (I^H paths) phasors, as a column vector
    const CVec proj = bc.paths.adjoint() * combiner;
    return phasors.transpose() * proj.conjugate();
}

static void check_subcarrier(const SystemParams &params, int k)
{
    if (k < -params.k_low || k > params.k_high)
        throw std::invalid_argument("subcarrier index outside [-K1, K2]");
}

cd demod_output(const CVec &i_pace, const ChannelSnapshot &snap, const SystemParams &params, cd x, int k,
                const CVec &noise_draw)
{
    check_subcarrier(params, k);
    const CVec ht = beamform(snap).response(params.carrier_freq + params.subcarrier_freq(k), DelayPhase::data);
    if (noise_draw.size() != ht.size())
        throw std::invalid_argument("demod_output: noise draw must have one entry per RX antenna");
    return (i_pace.dot(ht) * x + i_pace.dot(noise_draw)) / std::sqrt(params.cs_time());
}

CVec draw_data_noise(int num_rx, const SystemParams &params, Rng &rng)
{
    const double var = params.noise_psd * params.cs_time() / params.symbol_time;
    CVec w(num_rx);
    for (int m = 0; m < num_rx; ++m)
        w[m] = rng.complex_normal(var);
    return w;
}

std::vector<double> effective_snr(const CVec &i_pace, const DataChannel &channel, const SystemParams &params)
{
    const double norm2 = i_pace.squaredNorm();
    if (!(norm2 > 0.0))
        throw std::invalid_argument("effective_snr: combiner is all zero");
    const double noise = norm2 * params.noise_psd * params.cs_time() / params.symbol_time;
    const CVec g = channel.combined_gains(i_pace);
    std::vector<double> gamma(static_cast<std::size_t>(params.num_subcarriers));
    for (int i = 0; i < params.num_subcarriers; ++i)
    {
        const double e = params.data_energy[static_cast<std::size_t>(i)];
        gamma[static_cast<std::size_t>(i)] = e == 0.0 ? 0.0 : std::norm(g[i]) * e / noise;
    }
    return gamma;
}

std::vector<double> effective_snr(const CVec &i_pace, const ChannelSnapshot &snap, const SystemParams &params)
{
    return effective_snr(i_pace, DataChannel(snap, params), params);
}

std::vector<double> perfect_mrc_snr(const DataChannel &channel, const SystemParams &params)
{
    const CMat gram = channel.bc.paths.adjoint() * channel.bc.paths;
    const double unit = params.noise_psd * params.cs_time() / params.symbol_time;
    std::vector<double> gamma(static_cast<std::size_t>(params.num_subcarriers));
    for (int i = 0; i < params.num_subcarriers; ++i)
    {
        const auto p = channel.phasors.col(i);
        const double h2 = p.dot(gram * p).real(); // ||H(f_k) t||^2
        const double e = params.data_energy[static_cast<std::size_t>(i)];
        gamma[static_cast<std::size_t>(i)] = e == 0.0 ? 0.0 : h2 * e / unit;
    }
    return gamma;
}

double ise(std::span<const double> gamma)
{
    if (gamma.empty())
        return 0.0;
    double s = 0.0;
    for (double g : gamma)
    {
        if (g < 0.0 || std::isnan(g))
            throw std::invalid_argument("ise: effective SNR must be non-negative");
        s += std::log2(1.0 + g);
    }
    return s / static_cast<double>(gamma.size());
}

LinkMetrics link_metrics(std::vector<double> gamma, std::string scheme)
{
    LinkMetrics m;
    m.ise = ise(gamma);
    m.gamma = std::move(gamma);
    m.scheme = std::move(scheme);
    return m;
}

double snr_lower_bound(const ChannelSnapshot &snap, const SystemParams &params, double var_theta, int k)
{
    check_subcarrier(params, k);
    const double ed = params.data_energy[static_cast<std::size_t>(k + params.k_low)];
    const double att = std::exp(-var_theta);
    const double b00 = beta(snap, 0.0, 0.0).real();
    const double bk = std::norm(beta(snap, params.carrier_freq, params.subcarrier_freq(k)));
    const double n0 = params.noise_psd;
    const double ratio = params.cs_time() / params.symbol_time;
    const double d2 = params.estimate_symbols;
    const double num = snap.rx_geom.size() * params.ref_energy * att * bk * ed;
    if (num == 0.0)
        return 0.0;
    const double den = b00 * n0 / d2 * ed + b00 * n0 * ratio * params.ref_energy * att + n0 * n0 * ratio / d2;
    return num / den;
}

double ise_lower_bound(const ChannelSnapshot &snap, const SystemParams &params, double var_theta)
{
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(params.num_subcarriers));
    for (int k = -params.k_low; k <= params.k_high; ++k)
        g.push_back(snr_lower_bound(snap, params, var_theta, k));
    return ise(g);
}

PowerAllocation waterfill(std::span<const double> gains, double budget)
{
    if (!(budget >= 0.0))
        throw std::invalid_argument("waterfill: budget must be non-negative");
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < gains.size(); ++i)
    {
        if (!(gains[i] >= 0.0))
            throw std::invalid_argument("waterfill: gains must be non-negative");
        if (gains[i] > 0.0)
            order.push_back(i);
    }
    if (order.empty())
        throw std::invalid_argument("waterfill: at least one gain must be positive");
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });

    // Grow the active set while the water level stays above the next floor 1/g.
    double floor_sum = 0.0;
    double level = 0.0;
    std::size_t active = 0;
    for (std::size_t n = 1; n <= order.size(); ++n)
    {
        const double inv = 1.0 / gains[order[n - 1]];
        const double w = (budget + floor_sum + inv) / static_cast<double>(n);
        if (n > 1 && w <= inv)
            break;
        floor_sum += inv;
        level = w;
        active = n;
    }

    PowerAllocation pa;
    pa.water_level = level;
    pa.e_d.assign(gains.size(), 0.0);
    for (std::size_t n = 0; n < active; ++n)
        pa.e_d[order[n]] = std::max(0.0, level - 1.0 / gains[order[n]]);
    return pa;
}

CMat spatial_correlation(const BeamformedChannel &bc, const SystemParams &params)
{
    const CMat p = bc.delay_phasors(params, DelayPhase::design);
    const CMat inner = (p * p.adjoint()) / static_cast<double>(params.num_subcarriers);
    CMat r = bc.paths * inner * bc.paths.adjoint();
    return 0.5 * (r + r.adjoint());
}

CMat spatial_correlation(const ChannelSnapshot &snap, const SystemParams &params)
{
    return spatial_correlation(beamform(snap), params);
}

static void fix_phase(CVec &v)
{
    for (Eigen::Index i = 0; i < v.size(); ++i)
    {
        if (std::abs(v[i]) > 1e-14)
        {
            v *= std::conj(v[i]) / std::abs(v[i]);
            v[i] = std::abs(v[i]);
            return;
        }
    }
}

EigenResult principal_eigenvector(const CMat &h, double rel_tol, int max_iter)
{
    if (h.rows() != h.cols() || h.rows() == 0)
        throw std::invalid_argument("principal_eigenvector: matrix must be square and non-empty");
    EigenResult res;
    Eigen::Index start = 0;
    h.colwise().norm().maxCoeff(&start);
    CVec v = h.col(start);
    if (!(v.norm() > 0.0))
    {
        // zero matrix: every unit vector maximizes the Rayleigh quotient
        res.vector = CVec::Unit(h.rows(), 0);
        return res;
    }
    v.normalize();
    double lambda = 0.0;
    for (res.iterations = 1; res.iterations <= max_iter; ++res.iterations)
    {
        CVec hv = h * v;
        lambda = v.dot(hv).real();
        const double resid = (hv - lambda * v).norm();
        const double nrm = hv.norm();
        if (!(nrm > 0.0))
            break;
        v = hv / nrm;
        if (resid <= rel_tol * std::abs(lambda))
            break;
    }
    if (res.iterations > max_iter)
    {
        res.iterations = max_iter;
        res.degenerate = true;
    }
    fix_phase(v);
    res.vector = v;
    res.value = v.dot(h * v).real();
    return res;
}

EigenResult statistical_beamformer(const ChannelSnapshot &snap, const SystemParams &params)
{
    return principal_eigenvector(spatial_correlation(snap, params));
}

double ce_overhead(int pilots_per_beam, int n_beams, double cs_time, double t_acsi)
{
    if (!(t_acsi > 0.0))
        throw std::invalid_argument("ce_overhead: coherence time must be positive");
    if (pilots_per_beam < 0 || n_beams < 0 || !(cs_time >= 0.0))
        throw std::invalid_argument("ce_overhead: counts and symbol time must be non-negative");
    const double f = static_cast<double>(pilots_per_beam) * n_beams * cs_time / t_acsi;
    return std::clamp(f, 0.0, 1.0);
}

} // namespace pace
