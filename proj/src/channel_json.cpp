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

#include "pace/channel_json.hpp"

#include <stdexcept>

namespace pace
{

using nlohmann::json;

template <typename T>
static void read_opt(const json &j, const char *key, T &dst)
{
    if (auto it = j.find(key); it != j.end())
        it->get_to(dst);
}

json complex_to_json(cd z)
{
    return json::array({z.real(), z.imag()});
}

cd complex_from_json(const json &j)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument("complex value must be a number or an [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

void to_json(json &j, const SystemParams &p)
{
    j = json{{"K", p.num_subcarriers}, {"K1", p.k_low},   {"K2", p.k_high},          {"T_s", p.symbol_time},
             {"T_cp", p.cp_time},      {"T_cs", p.cs_time()}, {"f_c", p.carrier_freq}, {"E_cs", p.symbol_energy},
             {"E_r", p.ref_energy},    {"E_d", p.data_energy}, {"N0", p.noise_psd},   {"D1", p.lock_symbols},
             {"D2", p.estimate_symbols}};
}

void from_json(const json &j, SystemParams &p)
{
    if (!j.is_object())
        throw std::invalid_argument("system parameters must be a JSON object");
    read_opt(j, "K", p.num_subcarriers);
    read_opt(j, "K1", p.k_low);
    read_opt(j, "K2", p.k_high);
    read_opt(j, "T_s", p.symbol_time);
    read_opt(j, "T_cp", p.cp_time);
    read_opt(j, "f_c", p.carrier_freq);
    read_opt(j, "E_cs", p.symbol_energy);
    read_opt(j, "E_r", p.ref_energy);
    read_opt(j, "N0", p.noise_psd);
    read_opt(j, "D1", p.lock_symbols);
    read_opt(j, "D2", p.estimate_symbols);
    if (auto it = j.find("E_d"); it != j.end())
    {
        if (it->is_number())
            p.data_energy.assign(static_cast<std::size_t>(std::max(p.num_subcarriers, 0)), it->get<double>());
        else
            it->get_to(p.data_energy);
    }
    else if (p.data_energy.size() != static_cast<std::size_t>(std::max(p.num_subcarriers, 0)) || j.contains("E_cs"))
        p.set_flat_data_energy();
}

void to_json(json &j, const ArrayGeometry &g)
{
    j = json{{"M_H", g.num_h}, {"M_V", g.num_v}, {"delta_H", g.spacing_h}, {"delta_V", g.spacing_v}, {"lambda", g.wavelength}};
}

void from_json(const json &j, ArrayGeometry &g)
{
    read_opt(j, "M_H", g.num_h);
    read_opt(j, "M_V", g.num_v);
    read_opt(j, "delta_H", g.spacing_h);
    read_opt(j, "delta_V", g.spacing_v);
    read_opt(j, "lambda", g.wavelength);
}

void to_json(json &j, const Mpc &m)
{
    j = json{{"alpha", complex_to_json(m.alpha)}, {"tau_design", m.tau_design}, {"tau_data", m.tau_data},
             {"rx_azi", m.rx_azi},               {"rx_ele", m.rx_ele},         {"tx_azi", m.tx_azi},
             {"tx_ele", m.tx_ele}};
}

void from_json(const json &j, Mpc &m)
{
    if (auto it = j.find("alpha"); it != j.end())
        m.alpha = complex_from_json(*it);
    read_opt(j, "tau_design", m.tau_design);
    if (j.contains("tau_data"))
        read_opt(j, "tau_data", m.tau_data);
    else
        m.tau_data = m.tau_design;
    read_opt(j, "rx_azi", m.rx_azi);
    read_opt(j, "rx_ele", m.rx_ele);
    read_opt(j, "tx_azi", m.tx_azi);
    read_opt(j, "tx_ele", m.tx_ele);
}

void to_json(json &j, const ChannelSnapshot &s)
{
    json t = json::array();
    for (Eigen::Index i = 0; i < s.tx_beam.size(); ++i)
        t.push_back(complex_to_json(s.tx_beam[i]));
    j = json{{"mpcs", s.mpcs}, {"rx_geom", s.rx_geom}, {"tx_geom", s.tx_geom}, {"t", t}};
}

void from_json(const json &j, ChannelSnapshot &s)
{
    read_opt(j, "mpcs", s.mpcs);
    read_opt(j, "rx_geom", s.rx_geom);
    read_opt(j, "tx_geom", s.tx_geom);
    if (auto it = j.find("t"); it != j.end())
    {
        s.tx_beam.resize(static_cast<Eigen::Index>(it->size()));
        for (std::size_t i = 0; i < it->size(); ++i)
            s.tx_beam[static_cast<Eigen::Index>(i)] = complex_from_json((*it)[i]);
    }
}

} // namespace pace
