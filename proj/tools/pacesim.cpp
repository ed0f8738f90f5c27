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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pace/experiments.hpp"

namespace
{

struct Options
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> threads;
    std::string mode;
    std::string out_dir = "results";
};

pace::ExperimentConfig resolve(pace::ExperimentId id, const Options &o)
{
    nlohmann::json j = nlohmann::json::object();
    if (!o.config_path.empty())
    {
        std::ifstream in(o.config_path);
        if (!in)
            throw pace::ConfigError("cannot open config file '" + o.config_path + "'");
        try
        {
            j = nlohmann::json::parse(in);
        }
        catch (const nlohmann::json::exception &e)
        {
            throw pace::ConfigError("config file '" + o.config_path + "': " + e.what());
        }
    }
    if (o.seed)
        j["seed"] = *o.seed;
    if (o.trials)
        j["trials"] = *o.trials;
    if (o.threads)
        j["threads"] = *o.threads;
    if (!o.mode.empty())
        j["mode"] = o.mode;
    auto c = pace::config_from_json(j, id);
    c.validate();
    return c;
}

std::ofstream open_out(const std::filesystem::path &p)
{
    std::ofstream os(p, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot write '" + p.string() + "'");
    return os;
}

void run(pace::ExperimentId id, const Options &o)
{
    const auto c = resolve(id, o);
    const std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    const std::string stem = pace::to_string(id);
    {
        auto os = open_out(dir / (stem + ".config.json"));
        os << pace::config_to_json(c).dump(2) << '\n';
    }
    auto os = open_out(dir / (stem + ".csv"));
    switch (id)
    {
    case pace::ExperimentId::fig3: pace::write_results_csv(os, pace::run_fig3(c)); break;
    case pace::ExperimentId::ise_vs_snr: pace::write_results_csv(os, pace::run_ise_vs_snr(c)); break;
    case pace::ExperimentId::ise_vs_l: pace::write_results_csv(os, pace::run_ise_vs_l(c)); break;
    case pace::ExperimentId::pll_trace: pace::write_trace_csv(os, pace::run_pll_trace(c)); break;
    case pace::ExperimentId::overhead: pace::write_overhead_csv(os, pace::run_overhead(c)); break;
    }
    std::cout << (dir / (stem + ".csv")).string() << '\n';
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Link-level simulator for periodic analog channel estimation"};
    app.require_subcommand(1);
    Options o;

    const std::pair<const char *, pace::ExperimentId> commands[] = {
        {"fig3", pace::ExperimentId::fig3},
        {"ise-vs-snr", pace::ExperimentId::ise_vs_snr},
        {"ise-vs-l", pace::ExperimentId::ise_vs_l},
        {"pll-trace", pace::ExperimentId::pll_trace},
        {"overhead", pace::ExperimentId::overhead},
    };
    const char *help[] = {"recovery accuracy versus loop SNR", "spectral efficiency versus SNR on the sparse fixture",
                          "spectral efficiency versus number of clusters", "single loop phase trace",
                          "channel-estimation overhead table"};
    std::optional<pace::ExperimentId> chosen;
    for (std::size_t i = 0; i < std::size(commands); ++i)
    {
        auto *sub = app.add_subcommand(commands[i].first, help[i]);
        sub->add_option("--config", o.config_path, "JSON configuration overlay")->check(CLI::ExistingFile);
        sub->add_option("--seed", o.seed, "master seed");
        sub->add_option("--out", o.out_dir, "output directory")->capture_default_str();
        sub->add_option("--trials", o.trials, "Monte-Carlo trials (channels for ise-vs-l)");
        sub->add_option("--threads", o.threads, "worker threads, 0 for all cores");
        sub->add_option("--mode", o.mode, "PACE evaluation mode")->check(CLI::IsMember({"nonlinear", "analytic"}));
        const auto id = commands[i].second;
        sub->callback([&chosen, id] { chosen = id; });
    }

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try
    {
        run(*chosen, o);
    }
    catch (const pace::SimulationDiagnostic &e)
    {
        std::cerr << "simulation diagnostic: " << e.what() << '\n';
        return 2;
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
