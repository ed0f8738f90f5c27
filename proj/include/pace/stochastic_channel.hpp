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
#include <vector>

#include "pace/rng.hpp"
#include "pace/system_model.hpp"

namespace pace
{

// Simplified cluster/ray generator. Spreads are standard deviations (angles) or exponential
// means (delays); set them to zero for co-located sub-paths.
struct ClusterParams
{
    double delay_mean = 20e-9;       // mean of the exponential cluster-delay profile [s]
    double max_delay = 90e-9;        // cluster and sub-path delays are resampled above this [s]
    double power_decay_time = 20e-9; // power falls as exp(-tau / decay) [s]
    double shadowing_db = 3.0;       // per-cluster log-normal shadowing std [dB]
    int subpaths = 10;
    double intra_delay_spread = 1e-9;
    double intra_angle_spread = kPi / 50;
    double rx_azi_range = kPi / 2;   // cluster RX azimuth uniform in [-range, range]
    double rx_ele_halfwidth = kPi / 8; // cluster RX elevation uniform in pi/2 +- halfwidth
    double tx_azi_range = kPi / 12;
    double tx_ele_halfwidth = kPi / 36;
    ArrayGeometry rx_geom = ArrayGeometry::half_wavelength(16, 4, 30e9);
    ArrayGeometry tx_geom = ArrayGeometry::half_wavelength(32, 8, 30e9);

    void validate() const;
};

struct Cluster
{
    double delay = 0.0;
    double power = 0.0; // unnormalized, decay law times shadowing
    double shadow_db = 0.0;
    double rx_azi = 0.0;
    double rx_ele = kPi / 2;
    double tx_azi = 0.0;
    double tx_ele = kPi / 2;
};

// Cluster centers only; exposed so the delay/power law can be checked directly.
std::vector<Cluster> draw_clusters(int num_clusters, Rng &rng, const ClusterParams &cp);

// Full snapshot with num_clusters * subpaths paths, total power 1 and data delays equal to
// design delays. The TX beam points at the strongest cluster center.
ChannelSnapshot stochastic_channel(int num_clusters, std::uint64_t seed, const ClusterParams &cp);

} // namespace pace
