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
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pace/carrier_arraying.hpp"
#include "pace/pll_core.hpp"
#include "pace/stochastic_channel.hpp"
#include "pace/system_model.hpp"

namespace pace
{

enum class ExperimentId
{
    fig3,
    ise_vs_snr,
    ise_vs_l,
    pll_trace,
    overhead
};

enum class Scenario
{
    sparse_fixture,
    stochastic
};

enum class Recovery
{
    one_pll,
    arrayed,
    analytic_var
};

enum class SimMode
{
    nonlinear,
    analytic
};

// Raised for malformed or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig
{
    ExperimentId experiment = ExperimentId::fig3;
    Scenario scenario = Scenario::sparse_fixture;
    std::optional<Recovery> recovery;
    std::vector<std::string> schemes;
    std::vector<double> snr_db;
    std::vector<int> l_grid;
    int trials = 1;
    int draws = 1; // noise draws per channel for the multipath sweep
    std::uint64_t seed = 1;
    SimMode mode = SimMode::nonlinear;
    int threads = 0; // 0 = hardware concurrency

    SystemParams system;
    PllConfig pll;
    ArrayingConfig arraying;
    ClusterParams clusters;
    double mobility_distance = 0.02;
    bool waterfill = false;

    std::optional<double> trace_snr_db; // noiseless when absent

    std::vector<int> n_beams;
    std::vector<double> t_acsi;
    int pace_pilots = 6;
    int sparse_ruler_pilots = 21;
    int exhaustive_pilots = 64;

    void validate() const;
};

std::string to_string(ExperimentId id);
ExperimentId experiment_from_string(const std::string &s); // accepts ids and CLI spellings

// Defaults for one experiment, with loop constants tied to the default OFDM grid.
ExperimentConfig default_config(ExperimentId id);

// Overlay a JSON document on the defaults of its experiment. Unknown keys are rejected.
ExperimentConfig config_from_json(const nlohmann::json &j, ExperimentId id);

// Fully materialized configuration.
nlohmann::json config_to_json(const ExperimentConfig &c);

} // namespace pace
