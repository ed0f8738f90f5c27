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

#include "pace/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace pace
{

void SystemParams::set_flat_data_energy()
{
    data_energy.assign(static_cast<std::size_t>(std::max(num_subcarriers, 0)), symbol_energy / num_subcarriers);
}

void SystemParams::validate() const
{
    if (num_subcarriers < 1 || k_low < 0 || k_high < 0 || num_subcarriers != k_low + k_high + 1)
        throw std::invalid_argument("SystemParams: K must equal K1 + K2 + 1 with K1, K2 >= 0");
    if (!(symbol_time > 0.0) || !(cp_time >= 0.0))
        throw std::invalid_argument("SystemParams: T_s must be positive and T_cp non-negative");
    if (lock_symbols < 1 || estimate_symbols < 1)
        throw std::invalid_argument("SystemParams: D1 and D2 must be at least 1");
    if (data_energy.size() != static_cast<std::size_t>(num_subcarriers))
        throw std::invalid_argument("SystemParams: E_d must have K entries");
    if (!(ref_energy >= 0.0) || !(noise_psd >= 0.0) || !(symbol_energy >= 0.0))
        throw std::invalid_argument("SystemParams: energies and N0 must be non-negative");
    double total = 0.0;
    for (double e : data_energy)
    {
        if (!(e >= 0.0))
            throw std::invalid_argument("SystemParams: E_d entries must be non-negative");
        total += e;
    }
    const double slack = 1e-9 * std::max(symbol_energy, 1.0);
    if (ref_energy > symbol_energy + slack)
        throw std::invalid_argument("SystemParams: E_r exceeds E_cs");
    if (total > symbol_energy + slack)
        throw std::invalid_argument("SystemParams: sum of E_d exceeds E_cs");
    const double cycles = carrier_freq * cs_time();
    if (!(carrier_freq > 0.0) || std::abs(cycles - std::round(cycles)) > 1e-6)
        throw std::invalid_argument("SystemParams: f_c must be a positive multiple of 1/T_cs");
}

void ArrayGeometry::validate() const
{
    if (num_h < 1 || num_v < 1)
        throw std::invalid_argument("ArrayGeometry: element counts must be at least 1");
    if (!(spacing_h > 0.0) || !(spacing_v > 0.0) || !(wavelength > 0.0))
        throw std::invalid_argument("ArrayGeometry: spacings and wavelength must be positive");
}

ArrayGeometry ArrayGeometry::half_wavelength(int num_h, int num_v, double carrier_freq)
{
    const double lambda = kSpeedOfLight / carrier_freq;
    return {num_h, num_v, lambda / 2, lambda / 2, lambda};
}

void ChannelSnapshot::validate(const SystemParams &params) const
{
    rx_geom.validate();
    tx_geom.validate();
    if (tx_beam.size() != tx_geom.size())
        throw std::invalid_argument("ChannelSnapshot: TX beam length must equal M_tx");
    if (std::abs(tx_beam.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("ChannelSnapshot: TX beam must have unit norm");
    for (const auto &p : mpcs)
    {
        if (!(p.tau_design >= 0.0 && p.tau_design < params.cp_time) || !(p.tau_data >= 0.0 && p.tau_data < params.cp_time))
            throw std::invalid_argument("ChannelSnapshot: path delays must lie in [0, T_cp)");
    }
}

CVec array_response(const ArrayGeometry &geom, double azi, double ele)
{
    const double kh = kTwoPi * geom.spacing_h * std::sin(azi) * std::sin(ele) / geom.wavelength;
    const double kv = kTwoPi * geom.spacing_v * std::cos(ele) / geom.wavelength;
    CVec a(geom.size());
    for (int h = 0; h < geom.num_h; ++h)
        for (int v = 0; v < geom.num_v; ++v)
            a[h * geom.num_v + v] = std::polar(1.0, h * kh + v * kv);
    return a;
}

static double path_delay(const Mpc &p, DelayPhase phase)
{
    return phase == DelayPhase::design ? p.tau_design : p.tau_data;
}

CMat freq_channel_matrix(const ChannelSnapshot &snap, double carrier_freq, double f_k, DelayPhase phase)
{
    CMat H = CMat::Zero(snap.rx_geom.size(), snap.tx_geom.size());
    for (const auto &p : snap.mpcs)
    {
        const cd w = p.alpha * std::polar(1.0, -kTwoPi * (carrier_freq + f_k) * path_delay(p, phase));
        H.noalias() += (w * array_response(snap.rx_geom, p.rx_azi, p.rx_ele)) *
                       array_response(snap.tx_geom, p.tx_azi, p.tx_ele).adjoint();
    }
    return H;
}

BeamformedChannel beamform(const ChannelSnapshot &snap)
{
    const int L = static_cast<int>(snap.mpcs.size());
    BeamformedChannel bc;
    bc.paths.resize(snap.rx_geom.size(), L);
    bc.gains.resize(L);
    bc.tau_design.resize(L);
    bc.tau_data.resize(L);
    for (int l = 0; l < L; ++l)
    {
        const auto &p = snap.mpcs[l];
        const cd g = p.alpha * array_response(snap.tx_geom, p.tx_azi, p.tx_ele).dot(snap.tx_beam);
        bc.gains[l] = g;
        bc.paths.col(l) = g * array_response(snap.rx_geom, p.rx_azi, p.rx_ele);
        bc.tau_design[l] = p.tau_design;
        bc.tau_data[l] = p.tau_data;
    }
    return bc;
}

CVec BeamformedChannel::response(double abs_freq, DelayPhase phase) const
{
    const auto &tau = delays(phase);
    CVec w(tau.size());
    for (Eigen::Index l = 0; l < tau.size(); ++l)
        w[l] = std::polar(1.0, -kTwoPi * abs_freq * tau[l]);
    return paths * w;
}

CMat BeamformedChannel::delay_phasors(const SystemParams &params, DelayPhase phase) const
{
    const auto &tau = delays(phase);
    CMat C(tau.size(), params.num_subcarriers);
    for (Eigen::Index l = 0; l < tau.size(); ++l)
    {
        // Split the carrier term off so the per-subcarrier phase stays small.
        const double carrier_phase = std::fmod(kTwoPi * params.carrier_freq * tau[l], kTwoPi);
        for (int i = 0; i < params.num_subcarriers; ++i)
        {
            const double fk = params.subcarrier_freq(i - params.k_low);
            C(l, i) = std::polar(1.0, -(carrier_phase + kTwoPi * fk * tau[l]));
        }
    }
    return C;
}

CVec ref_tone_amplitudes(const ChannelSnapshot &snap, const SystemParams &params)
{
    return std::sqrt(params.ref_energy / params.cs_time()) * beamform(snap).response(params.carrier_freq, DelayPhase::design);
}

cd beta(const ChannelSnapshot &snap, double f_dot, double f_ddot)
{
    cd sum = 0.0;
    for (const auto &p : snap.mpcs)
    {
        const cd g = p.alpha * array_response(snap.tx_geom, p.tx_azi, p.tx_ele).dot(snap.tx_beam);
        const double ph = kTwoPi * f_dot * (p.tau_design - p.tau_data) - kTwoPi * f_ddot * p.tau_data;
        sum += std::norm(g) * std::polar(1.0, ph);
    }
    return sum;
}

ChannelSnapshot apply_mobility(const ChannelSnapshot &snap, double distance, double motion_azi)
{
    ChannelSnapshot out = snap;
    for (auto &p : out.mpcs)
    {
        const double shift = distance / kSpeedOfLight * std::sin(p.rx_ele) * std::cos(motion_azi - p.rx_azi);
        p.tau_data = std::max(0.0, p.tau_design - shift);
    }
    return out;
}

double check_orthogonality(const ChannelSnapshot &snap)
{
    const int L = static_cast<int>(snap.mpcs.size());
    if (L < 2)
        throw std::invalid_argument("check_orthogonality: need at least two paths");
    std::vector<CVec> a;
    a.reserve(L);
    for (const auto &p : snap.mpcs)
        a.push_back(array_response(snap.rx_geom, p.rx_azi, p.rx_ele));
    double worst = 0.0;
    for (int i = 0; i < L; ++i)
        for (int j = i + 1; j < L; ++j)
            worst = std::max(worst, std::abs(a[i].dot(a[j])));
    return worst / snap.rx_geom.size();
}

ChannelSnapshot sparse_fixture(const SystemParams &params)
{
    ChannelSnapshot snap;
    snap.rx_geom = ArrayGeometry::half_wavelength(16, 4, params.carrier_freq);
    snap.tx_geom = ArrayGeometry::half_wavelength(32, 8, params.carrier_freq);

    const double delays[3] = {0.0, 20e-9, 40e-9};
    const double drift[3] = {30e-12, 25e-12, 25e-12};
    const double rx_azi[3] = {0.0, kPi / 6, -kPi / 6};
    const double rx_ele[3] = {0.45 * kPi, kPi / 2, kPi / 2};
    const double tx_azi[3] = {0.0, 0.02, -0.03};
    const double gain[3] = {std::sqrt(0.6), -std::sqrt(0.3), std::sqrt(0.1)};

    snap.tx_beam = array_response(snap.tx_geom, tx_azi[0], kPi / 2) / std::sqrt(double(snap.tx_geom.size()));
    for (int l = 0; l < 3; ++l)
    {
        Mpc p;
        p.tau_design = delays[l];
        p.tau_data = delays[l] + drift[l];
        p.rx_azi = rx_azi[l];
        p.rx_ele = rx_ele[l];
        p.tx_azi = tx_azi[l];
        p.tx_ele = kPi / 2;
        p.alpha = gain[l] / array_response(snap.tx_geom, p.tx_azi, p.tx_ele).dot(snap.tx_beam);
        snap.mpcs.push_back(p);
    }
    return snap;
}

std::vector<cd> accuracy_sweep_amplitudes()
{
    return {1.0, std::polar(0.7, kPi / 3), std::polar(0.5, -kPi / 3)};
}

ChannelSnapshot snapshot_with_amplitudes(const CVec &target, const SystemParams &params)
{
    const int M = static_cast<int>(target.size());
    if (M < 1)
        throw std::invalid_argument("snapshot_with_amplitudes: empty target");
    if (!(params.ref_energy > 0.0))
        throw std::invalid_argument("snapshot_with_amplitudes: E_r must be positive");

    ChannelSnapshot snap;
    snap.rx_geom = ArrayGeometry::half_wavelength(M, 1, params.carrier_freq);
    snap.tx_geom = ArrayGeometry::half_wavelength(1, 1, params.carrier_freq);
    snap.tx_beam = CVec::Ones(1);

    // DFT-orthogonal arrival directions span every length-M vector.
    const CVec scaled = target / std::sqrt(params.ref_energy / params.cs_time());
    for (int n = -(M - 1) / 2; n <= M / 2; ++n)
    {
        Mpc p;
        p.rx_azi = std::asin(std::clamp(2.0 * n / M, -1.0, 1.0));
        p.alpha = array_response(snap.rx_geom, p.rx_azi, kPi / 2).dot(scaled) / double(M);
        snap.mpcs.push_back(p);
    }
    return snap;
}

} // namespace pace
