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

#include "pace/experiment_config.hpp"

#include <algorithm>
#include <set>

#include "pace/channel_json.hpp"

namespace pace
{

using nlohmann::json;

namespace
{

const std::set<std::string> kSchemes = {"pace_one_pll", "pace_arrayed", "statistical", "perfect_mrc"};

std::vector<double> db_grid(double lo, double hi, double step)
{
    std::vector<double> g;
    for (int i = 0; lo + i * step <= hi + 1e-9; ++i)
        g.push_back(lo + i * step);
    return g;
}

void reject_unknown(const json &j, const std::set<std::string> &allowed, const std::string &where)
{
    if (!j.is_object())
        throw ConfigError(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

template <typename T>
void read_opt(const json &j, const char *key, T &dst)
{
    if (auto it = j.find(key); it != j.end())
        it->get_to(dst);
}

std::string to_string(Scenario s)
{
    return s == Scenario::sparse_fixture ? "sparse_fixture" : "stochastic";
}

std::string to_string(Recovery r)
{
    switch (r)
    {
    case Recovery::one_pll: return "one_pll";
    case Recovery::arrayed: return "arrayed";
    default: return "analytic_var";
    }
}

std::string to_string(SimMode m)
{
    return m == SimMode::nonlinear ? "nonlinear" : "analytic";
}

void apply_recovery(ExperimentConfig &c)
{
    if (!c.recovery)
        return;
    std::vector<std::string> keep;
    for (const auto &s : c.schemes)
        if (s.rfind("pace_", 0) != 0)
            keep.push_back(s);
    switch (*c.recovery)
    {
    case Recovery::one_pll: keep.insert(keep.begin(), "pace_one_pll"); break;
    case Recovery::arrayed: keep.insert(keep.begin(), "pace_arrayed"); break;
    case Recovery::analytic_var:
        keep.insert(keep.begin(), "pace_arrayed");
        c.mode = SimMode::analytic;
        break;
    }
    c.schemes = keep;
}

json pll_json(const PllConfig &p)
{
    return {{"epsilon", p.epsilon}, {"loop_gain_product", p.loop_gain_product}, {"f_offset", p.f_offset},
            {"dt", p.dt},           {"duration", p.duration},                   {"theta0", p.theta0}};
}

json arraying_json(const ArrayingConfig &a)
{
    return {{"antennas", a.antennas}, {"mu", a.mu},   {"gp_rule", a.gp_rule},  {"epsilon_p", a.epsilon_p},
            {"f_if", a.f_if},         {"f_offset_p", a.f_offset_p}, {"dt", a.dt}, {"duration", a.duration}};
}

json clusters_json(const ClusterParams &c)
{
    return {{"delay_mean", c.delay_mean},
            {"max_delay", c.max_delay},
            {"power_decay_time", c.power_decay_time},
            {"shadowing_db", c.shadowing_db},
            {"subpaths", c.subpaths},
            {"intra_delay_spread", c.intra_delay_spread},
            {"intra_angle_spread", c.intra_angle_spread},
            {"rx_azi_range", c.rx_azi_range},
            {"rx_ele_halfwidth", c.rx_ele_halfwidth},
            {"tx_azi_range", c.tx_azi_range},
            {"tx_ele_halfwidth", c.tx_ele_halfwidth},
            {"rx_geom", c.rx_geom},
            {"tx_geom", c.tx_geom}};
}

// Loop constants and array geometry follow the OFDM grid unless overridden afterwards.
void derive_from_system(ExperimentConfig &c)
{
    c.pll = PllConfig::defaults_for(c.system, c.pll.f_offset);
    const auto antennas = c.arraying.antennas;
    c.arraying = ArrayingConfig::defaults_for(c.system, c.arraying.f_offset_p);
    c.arraying.antennas = antennas;
    c.clusters.rx_geom = ArrayGeometry::half_wavelength(c.clusters.rx_geom.num_h, c.clusters.rx_geom.num_v, c.system.carrier_freq);
    c.clusters.tx_geom = ArrayGeometry::half_wavelength(c.clusters.tx_geom.num_h, c.clusters.tx_geom.num_v, c.system.carrier_freq);
    c.clusters.max_delay = 0.9 * c.system.cp_time;
}

} // namespace

std::string to_string(ExperimentId id)
{
    switch (id)
    {
    case ExperimentId::fig3: return "fig3";
    case ExperimentId::ise_vs_snr: return "ise_vs_snr";
    case ExperimentId::ise_vs_l: return "ise_vs_L";
    case ExperimentId::pll_trace: return "pll_trace";
    default: return "overhead";
    }
}

ExperimentId experiment_from_string(const std::string &s)
{
    if (s == "fig3")
        return ExperimentId::fig3;
    if (s == "ise_vs_snr" || s == "ise-vs-snr")
        return ExperimentId::ise_vs_snr;
    if (s == "ise_vs_L" || s == "ise_vs_l" || s == "ise-vs-l")
        return ExperimentId::ise_vs_l;
    if (s == "pll_trace" || s == "pll-trace")
        return ExperimentId::pll_trace;
    if (s == "overhead")
        return ExperimentId::overhead;
    throw ConfigError("unknown experiment '" + s + "'");
}

ExperimentConfig default_config(ExperimentId id)
{
    ExperimentConfig c;
    c.experiment = id;
    c.system.set_flat_data_energy();
    c.system.ref_energy = 20.0 * c.system.symbol_energy / c.system.num_subcarriers;
    derive_from_system(c);
    switch (id)
    {
    case ExperimentId::fig3:
        c.schemes = {"pace_one_pll", "pace_arrayed"};
        c.snr_db = db_grid(0.0, 30.0, 1.0);
        c.trials = 500;
        break;
    case ExperimentId::ise_vs_snr:
        c.schemes = {"pace_one_pll", "pace_arrayed", "statistical", "perfect_mrc"};
        c.snr_db = db_grid(-10.0, 20.0, 1.0);
        c.trials = 200;
        break;
    case ExperimentId::ise_vs_l:
        c.scenario = Scenario::stochastic;
        c.schemes = {"pace_one_pll", "pace_arrayed", "statistical"};
        c.mode = SimMode::analytic;
        c.snr_db = {0.0};
        c.l_grid = {1, 2, 4, 8, 16};
        c.trials = 200;
        c.draws = 50;
        break;
    case ExperimentId::pll_trace:
        c.schemes = {"pace_one_pll"};
        break;
    case ExperimentId::overhead:
        c.schemes = {"pace", "sparse_ruler", "exhaustive"};
        c.n_beams = {167};
        c.t_acsi = {10e-3};
        break;
    }
    return c;
}

void ExperimentConfig::validate() const
{
    if (trials < 1 || draws < 1)
        throw ConfigError("trials and draws must be at least 1");
    if (threads < 0)
        throw ConfigError("threads must be non-negative");
    if (schemes.empty())
        throw ConfigError("scheme list must not be empty");
    try
    {
        system.validate();
        pll.validate();
        arraying.validate();
        clusters.validate();
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }
    if (!(mobility_distance >= 0.0))
        throw ConfigError("mobility distance must be non-negative");
    switch (experiment)
    {
    case ExperimentId::fig3:
        if (snr_db.empty())
            throw ConfigError("fig3: SNR grid must not be empty");
        for (const auto &s : schemes)
            if (s != "pace_one_pll" && s != "pace_arrayed")
                throw ConfigError("fig3: scheme must be pace_one_pll or pace_arrayed, got '" + s + "'");
        break;
    case ExperimentId::ise_vs_snr:
    case ExperimentId::ise_vs_l:
        if (snr_db.empty())
            throw ConfigError("SNR grid must not be empty");
        if (experiment == ExperimentId::ise_vs_l && l_grid.empty())
            throw ConfigError("ise_vs_L: L grid must not be empty");
        for (int l : l_grid)
            if (l < 1)
                throw ConfigError("ise_vs_L: L values must be at least 1");
        for (const auto &s : schemes)
            if (!kSchemes.count(s))
                throw ConfigError("unknown scheme '" + s + "'");
        break;
    case ExperimentId::pll_trace:
        if (schemes.size() != 1 || (schemes[0] != "pace_one_pll" && schemes[0] != "pace_arrayed"))
            throw ConfigError("pll_trace: exactly one of pace_one_pll or pace_arrayed");
        break;
    case ExperimentId::overhead:
        if (n_beams.empty() || t_acsi.empty())
            throw ConfigError("overhead: beam and coherence-time grids must not be empty");
        for (double t : t_acsi)
            if (!(t > 0.0))
                throw ConfigError("overhead: coherence times must be positive");
        for (int n : n_beams)
            if (n < 0)
                throw ConfigError("overhead: beam counts must be non-negative");
        for (const auto &s : schemes)
            if (s != "pace" && s != "sparse_ruler" && s != "exhaustive")
                throw ConfigError("overhead: unknown scheme '" + s + "'");
        break;
    }
}

ExperimentConfig config_from_json(const json &j, ExperimentId id)
{
    static const std::set<std::string> top = {"experiment", "scenario", "recovery", "schemes", "snr_db", "L", "trials",
                                              "draws", "seed", "mode", "threads", "system", "pll", "arraying",
                                              "clusters", "mobility_distance", "power_allocation", "trace_snr_db",
                                              "n_beams", "t_acsi", "pace_pilots", "sparse_ruler_pilots",
                                              "exhaustive_pilots"};
    reject_unknown(j, top, "config");
    try
    {
        if (auto it = j.find("experiment"); it != j.end() && experiment_from_string(it->get<std::string>()) != id)
            throw ConfigError("config names experiment '" + it->get<std::string>() + "' but '" + to_string(id) +
                              "' was requested");
        ExperimentConfig c = default_config(id);

        if (auto it = j.find("system"); it != j.end())
        {
            reject_unknown(*it, {"K", "K1", "K2", "T_s", "T_cp", "T_cs", "f_c", "E_cs", "E_r", "E_d", "N0", "D1", "D2"},
                           "system");
            const bool has_er = it->contains("E_r");
            it->get_to(c.system);
            if (!has_er)
                c.system.ref_energy = 20.0 * c.system.symbol_energy / c.system.num_subcarriers;
            derive_from_system(c);
        }
        if (auto it = j.find("pll"); it != j.end())
        {
            reject_unknown(*it, {"epsilon", "loop_gain_product", "f_offset", "dt", "duration", "theta0"}, "pll");
            if (it->contains("f_offset") && !it->contains("loop_gain_product"))
                c.pll.loop_gain_product = kPi * std::abs(it->at("f_offset").get<double>());
            read_opt(*it, "epsilon", c.pll.epsilon);
            read_opt(*it, "loop_gain_product", c.pll.loop_gain_product);
            read_opt(*it, "f_offset", c.pll.f_offset);
            read_opt(*it, "dt", c.pll.dt);
            read_opt(*it, "duration", c.pll.duration);
            read_opt(*it, "theta0", c.pll.theta0);
        }
        if (auto it = j.find("arraying"); it != j.end())
        {
            reject_unknown(*it, {"antennas", "mu", "gp_rule", "epsilon_p", "f_if", "f_offset_p", "dt", "duration"},
                           "arraying");
            if (it->contains("f_offset_p") && !it->contains("gp_rule"))
                c.arraying.gp_rule = kPi * std::abs(it->at("f_offset_p").get<double>());
            read_opt(*it, "antennas", c.arraying.antennas);
            read_opt(*it, "mu", c.arraying.mu);
            read_opt(*it, "gp_rule", c.arraying.gp_rule);
            read_opt(*it, "epsilon_p", c.arraying.epsilon_p);
            read_opt(*it, "f_if", c.arraying.f_if);
            read_opt(*it, "f_offset_p", c.arraying.f_offset_p);
            read_opt(*it, "dt", c.arraying.dt);
            read_opt(*it, "duration", c.arraying.duration);
        }
        if (auto it = j.find("clusters"); it != j.end())
        {
            reject_unknown(*it, {"delay_mean", "max_delay", "power_decay_time", "shadowing_db", "subpaths",
                                 "intra_delay_spread", "intra_angle_spread", "rx_azi_range", "rx_ele_halfwidth",
                                 "tx_azi_range", "tx_ele_halfwidth", "rx_geom", "tx_geom"},
                           "clusters");
            auto &cp = c.clusters;
            read_opt(*it, "delay_mean", cp.delay_mean);
            read_opt(*it, "max_delay", cp.max_delay);
            read_opt(*it, "power_decay_time", cp.power_decay_time);
            read_opt(*it, "shadowing_db", cp.shadowing_db);
            read_opt(*it, "subpaths", cp.subpaths);
            read_opt(*it, "intra_delay_spread", cp.intra_delay_spread);
            read_opt(*it, "intra_angle_spread", cp.intra_angle_spread);
            read_opt(*it, "rx_azi_range", cp.rx_azi_range);
            read_opt(*it, "rx_ele_halfwidth", cp.rx_ele_halfwidth);
            read_opt(*it, "tx_azi_range", cp.tx_azi_range);
            read_opt(*it, "tx_ele_halfwidth", cp.tx_ele_halfwidth);
            read_opt(*it, "rx_geom", cp.rx_geom);
            read_opt(*it, "tx_geom", cp.tx_geom);
        }

        if (auto it = j.find("scenario"); it != j.end())
        {
            const auto s = it->get<std::string>();
            if (s == "sparse_fixture")
                c.scenario = Scenario::sparse_fixture;
            else if (s == "stochastic")
                c.scenario = Scenario::stochastic;
            else
                throw ConfigError("unknown scenario '" + s + "'");
        }
        if (auto it = j.find("mode"); it != j.end())
        {
            const auto s = it->get<std::string>();
            if (s == "nonlinear")
                c.mode = SimMode::nonlinear;
            else if (s == "analytic")
                c.mode = SimMode::analytic;
            else
                throw ConfigError("unknown mode '" + s + "'");
        }
        read_opt(j, "schemes", c.schemes);
        if (auto it = j.find("recovery"); it != j.end() && !it->is_null())
        {
            const auto s = it->get<std::string>();
            if (s == "one_pll")
                c.recovery = Recovery::one_pll;
            else if (s == "arrayed")
                c.recovery = Recovery::arrayed;
            else if (s == "analytic_var")
                c.recovery = Recovery::analytic_var;
            else
                throw ConfigError("unknown recovery '" + s + "'");
            if (!j.contains("schemes"))
                apply_recovery(c);
        }
        read_opt(j, "snr_db", c.snr_db);
        read_opt(j, "L", c.l_grid);
        read_opt(j, "trials", c.trials);
        read_opt(j, "draws", c.draws);
        read_opt(j, "seed", c.seed);
        read_opt(j, "threads", c.threads);
        read_opt(j, "mobility_distance", c.mobility_distance);
        if (auto it = j.find("power_allocation"); it != j.end())
        {
            const auto s = it->get<std::string>();
            if (s != "flat" && s != "waterfill")
                throw ConfigError("power_allocation must be 'flat' or 'waterfill'");
            c.waterfill = s == "waterfill";
        }
        if (auto it = j.find("trace_snr_db"); it != j.end() && !it->is_null())
            c.trace_snr_db = it->get<double>();
        read_opt(j, "n_beams", c.n_beams);
        read_opt(j, "t_acsi", c.t_acsi);
        read_opt(j, "pace_pilots", c.pace_pilots);
        read_opt(j, "sparse_ruler_pilots", c.sparse_ruler_pilots);
        read_opt(j, "exhaustive_pilots", c.exhaustive_pilots);
        return c;
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("config: ") + e.what());
    }
    catch (const ConfigError &)
    {
        throw;
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }
}

json config_to_json(const ExperimentConfig &c)
{
    json j;
    j["experiment"] = to_string(c.experiment);
    j["scenario"] = to_string(c.scenario);
    j["recovery"] = c.recovery ? json(to_string(*c.recovery)) : json(nullptr);
    j["schemes"] = c.schemes;
    j["snr_db"] = c.snr_db;
    j["L"] = c.l_grid;
    j["trials"] = c.trials;
    j["draws"] = c.draws;
    j["seed"] = c.seed;
    j["mode"] = to_string(c.mode);
    j["threads"] = c.threads;
    j["system"] = c.system;
    j["pll"] = pll_json(c.pll);
    j["arraying"] = arraying_json(c.arraying);
    j["clusters"] = clusters_json(c.clusters);
    j["mobility_distance"] = c.mobility_distance;
    j["power_allocation"] = c.waterfill ? "waterfill" : "flat";
    j["trace_snr_db"] = c.trace_snr_db ? json(*c.trace_snr_db) : json(nullptr);
    j["n_beams"] = c.n_beams;
    j["t_acsi"] = c.t_acsi;
    j["pace_pilots"] = c.pace_pilots;
    j["sparse_ruler_pilots"] = c.sparse_ruler_pilots;
    j["exhaustive_pilots"] = c.exhaustive_pilots;
    return j;
}

} // namespace pace
