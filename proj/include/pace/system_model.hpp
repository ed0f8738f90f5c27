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

#include <vector>

#include "pace/types.hpp"

namespace pace
{

// OFDM timing, energy budget and reference-symbol protocol.
// Subcarrier k runs over [-k_low, k_high]; per-subcarrier arrays are stored at offset k + k_low.
struct SystemParams
{
    int num_subcarriers = 1024;  // K
    int k_low = 512;             // K1
    int k_high = 511;            // K2
    double symbol_time = 1e-6;   // T_s [s]
    double cp_time = 1e-7;       // T_cp [s]
    double carrier_freq = 30e9;  // f_c [Hz]
    double symbol_energy = 1024; // E_cs
    double ref_energy = 20;      // E_r
    std::vector<double> data_energy = std::vector<double>(1024, 1.0); // E_d[k]
    double noise_psd = 1e-3;     // N0
    int lock_symbols = 4;        // D1
    int estimate_symbols = 2;    // D2

    double cs_time() const { return symbol_time + cp_time; }
    int total_symbols() const { return lock_symbols + estimate_symbols; }
    double subcarrier_freq(int k) const { return k / symbol_time; }
    double sample_time() const { return symbol_time / num_subcarriers; }

    // Start and end of the estimation window, measured from the first reference sample.
    double window_start() const { return lock_symbols * cs_time() - cp_time; }
    double window_end() const { return total_symbols() * cs_time() - cp_time; }

    // Flat allocation of the symbol budget: E_d[k] = E_cs / K.
    void set_flat_data_energy();

    // Throws std::invalid_argument when any structural invariant is violated.
    void validate() const;
};

// Uniform planar array, horizontal index outer, vertical index inner.
struct ArrayGeometry
{
    int num_h = 1;
    int num_v = 1;
    double spacing_h = 0.005;
    double spacing_v = 0.005;
    double wavelength = 0.01;

    int size() const { return num_h * num_v; }
    void validate() const;

    static ArrayGeometry half_wavelength(int num_h, int num_v, double carrier_freq);
};

struct Mpc
{
    cd alpha = 1.0;
    double tau_design = 0.0; // [s]
    double tau_data = 0.0;   // [s]
    double rx_azi = 0.0;
    double rx_ele = kPi / 2;
    double tx_azi = 0.0;
    double tx_ele = kPi / 2;
};

struct ChannelSnapshot
{
    std::vector<Mpc> mpcs;
    ArrayGeometry rx_geom;
    ArrayGeometry tx_geom;
    CVec tx_beam; // t, unit norm

    void validate(const SystemParams &params) const;
};

enum class DelayPhase
{
    design,
    data
};

// Phasor signature of a plane wave arriving from (azi, ele).
CVec array_response(const ArrayGeometry &geom, double azi, double ele);

// Full M_rx x M_tx channel matrix at absolute frequency carrier_freq + f_k.
CMat freq_channel_matrix(const ChannelSnapshot &snap, double carrier_freq, double f_k, DelayPhase phase);

// Per-path RX signatures after TX beamforming, so that the beamformed channel at absolute
// frequency f is sum_l paths.col(l) * exp(-j 2 pi f tau_l).
struct BeamformedChannel
{
    CMat paths;               // M_rx x L, column l = a_rx(l) * alpha_l * a_tx(l)^H t
    CVec gains;               // alpha_l * a_tx(l)^H t
    Eigen::VectorXd tau_design;
    Eigen::VectorXd tau_data;

    int num_rx() const { return static_cast<int>(paths.rows()); }
    int num_paths() const { return static_cast<int>(paths.cols()); }

    const Eigen::VectorXd &delays(DelayPhase phase) const { return phase == DelayPhase::design ? tau_design : tau_data; }

    // H(f) t at absolute frequency f.
    CVec response(double abs_freq, DelayPhase phase) const;

    // L x K matrix of exp(-j 2 pi (f_c + f_k) tau_l), so that H(f_k) t = paths * phasors.col(k + K1).
    CMat delay_phasors(const SystemParams &params, DelayPhase phase) const;
};

BeamformedChannel beamform(const ChannelSnapshot &snap);

// Reference-tone amplitude at every RX antenna during the design phase.
CVec ref_tone_amplitudes(const ChannelSnapshot &snap, const SystemParams &params);

// Frequency-coupling function between design and data phases.
cd beta(const ChannelSnapshot &snap, double f_dot, double f_ddot);

// Plane-wave delay drift after the receiver moves distance d in azimuth direction motion_azi.
ChannelSnapshot apply_mobility(const ChannelSnapshot &snap, double distance, double motion_azi);

// Largest normalized cross-correlation between RX responses of distinct paths.
double check_orthogonality(const ChannelSnapshot &snap);

// Three-path reference scenario: 16x4 RX, 32x8 TX, delays 0/20/40 ns drifting by 30/25/25 ps,
// normalized effective gains sqrt(0.6), -sqrt(0.3), sqrt(0.1).
ChannelSnapshot sparse_fixture(const SystemParams &params);

// Reference amplitudes used for the recovery-accuracy sweep, at zero-based antennas 0, 4 and 14.
std::vector<cd> accuracy_sweep_amplitudes();
inline const std::vector<int> kArrayedAntennas = {0, 4, 14};

// A 16-element linear-array snapshot whose reference amplitudes equal target exactly.
ChannelSnapshot snapshot_with_amplitudes(const CVec &target, const SystemParams &params);

} // namespace pace
