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

#include "pace/stochastic_channel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pace
{

void ClusterParams::validate() const
{
    if (!(delay_mean > 0.0) || !(max_delay > 0.0) || !(power_decay_time > 0.0))
        throw std::invalid_argument("ClusterParams: delay mean, max delay and decay time must be positive");
    if (!(shadowing_db >= 0.0) || !(intra_delay_spread >= 0.0) || !(intra_angle_spread >= 0.0))
        throw std::invalid_argument("ClusterParams: spreads must be non-negative");
    if (intra_delay_spread >= max_delay)
        throw std::invalid_argument("ClusterParams: intra-cluster delay spread must be below the max delay");
    if (subpaths < 1)
        throw std::invalid_argument("ClusterParams: need at least one sub-path");
    rx_geom.validate();
    tx_geom.validate();
}

static double bounded_exponential(Rng &rng, double mean, double limit)
{
    if (mean == 0.0)
        return 0.0;
    for (;;)
    {
        const double x = rng.exponential(mean);
        if (x < limit)
            return x;
    }
}

std::vector<Cluster> draw_clusters(int num_clusters, Rng &rng, const ClusterParams &cp)
{
    if (num_clusters < 1)
        throw std::invalid_argument("draw_clusters: need at least one cluster");
    cp.validate();
    std::vector<Cluster> out(static_cast<std::size_t>(num_clusters));
    for (auto &c : out)
    {
        c.delay = bounded_exponential(rng, cp.delay_mean, cp.max_delay);
        c.shadow_db = cp.shadowing_db * rng.normal();
        c.power = std::exp(-c.delay / cp.power_decay_time) * std::pow(10.0, -c.shadow_db / 10.0);
        c.rx_azi = rng.uniform(-cp.rx_azi_range, cp.rx_azi_range);
        c.rx_ele = kPi / 2 + rng.uniform(-cp.rx_ele_halfwidth, cp.rx_ele_halfwidth);
        c.tx_azi = rng.uniform(-cp.tx_azi_range, cp.tx_azi_range);
        c.tx_ele = kPi / 2 + rng.uniform(-cp.tx_ele_halfwidth, cp.tx_ele_halfwidth);
    }
    std::sort(out.begin(), out.end(), [](const Cluster &a, const Cluster &b) { return a.delay < b.delay; });
    return out;
}

ChannelSnapshot stochastic_channel(int num_clusters, std::uint64_t seed, const ClusterParams &cp)
{
    Rng rng(seed);
    const auto clusters = draw_clusters(num_clusters, rng, cp);

    ChannelSnapshot snap;
    snap.rx_geom = cp.rx_geom;
    snap.tx_geom = cp.tx_geom;

    double total = 0.0;
    for (const auto &c : clusters)
    {
        const double amp = std::sqrt(c.power / cp.subpaths);
        for (int s = 0; s < cp.subpaths; ++s)
        {
            Mpc p;
            double tau;
            do
                tau = c.delay + (cp.intra_delay_spread > 0.0 ? rng.exponential(cp.intra_delay_spread) : 0.0);
            while (tau >= cp.max_delay);
            p.tau_design = tau;
            p.tau_data = tau;
            p.rx_azi = c.rx_azi + cp.intra_angle_spread * rng.normal();
            p.rx_ele = c.rx_ele + cp.intra_angle_spread * rng.normal();
            p.tx_azi = c.tx_azi + cp.intra_angle_spread * rng.normal();
            p.tx_ele = c.tx_ele + cp.intra_angle_spread * rng.normal();
            p.alpha = std::polar(amp, rng.uniform(-kPi, kPi));
            total += std::norm(p.alpha);
            snap.mpcs.push_back(p);
        }
    }
    const double scale = 1.0 / std::sqrt(total);
    for (auto &p : snap.mpcs)
        p.alpha *= scale;

    const auto strongest = std::max_element(clusters.begin(), clusters.end(),
                                            [](const Cluster &a, const Cluster &b) { return a.power < b.power; });
    snap.tx_beam = array_response(snap.tx_geom, strongest->tx_azi, strongest->tx_ele) / std::sqrt(double(snap.tx_geom.size()));
    return snap;
}

} // namespace pace
