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
#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "pace/carrier_arraying.hpp"
#include "pace/pll_core.hpp"
#include "pace/rng.hpp"

using namespace pace;
using Catch::Approx;

namespace
{

ArrayingConfig table_config()
{
    return ArrayingConfig::defaults_for(SystemParams{}, 5e6);
}

std::vector<cd> sweep_amps()
{
    return accuracy_sweep_amplitudes();
}

double locked_phase(const ArrayingConfig &cfg, const std::vector<cd> &amps, const std::vector<long> &cycles)
{
    std::vector<double> mags;
    for (cd a : amps)
        mags.push_back(std::abs(a));
    return oracle::arrayed_rest_phase(cfg.mu, cfg.gp_rule, cfg.epsilon_p, cfg.f_offset_p, mags, cycles);
}

} // namespace

TEST_CASE("combined amplitude", "[carrier_arraying]")
{
    const std::vector<cd> one = {std::polar(1.0, 0.4)};
    CHECK(a_rss(one) == Approx(1.0).epsilon(1e-15));
    CHECK(a_rss(sweep_amps()) == Approx(std::sqrt(1.74)).epsilon(1e-12));
    std::vector<cd> twice = sweep_amps();
    for (auto &a : twice)
        a *= 2.0;
    CHECK(a_rss(twice) == Approx(2.0 * a_rss(sweep_amps())).epsilon(1e-15));
}

TEST_CASE("arrayed loop rests at zero without offset or noise", "[carrier_arraying]")
{
    auto cfg = table_config();
    cfg.f_offset_p = 0.0;
    const auto tr = simulate_arrayed_pll(cfg, sweep_amps(), {});
    double worst = 0.0;
    for (double v : tr.theta)
        worst = std::max(worst, std::abs(v));
    for (const auto &row : tr.phi)
        for (double v : row)
            worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-9);
    REQUIRE(tr.phi.size() == 3);
    for (std::size_t m = 0; m < 3; ++m)
        CHECK(std::abs(sweep_amps()[m] * std::polar(1.0, -tr.ref_phases[m]) - cd(0.0, -std::abs(sweep_amps()[m]))) <
              1e-12);
}

TEST_CASE("noiseless arrayed loop settles on a 5 MHz offset", "[carrier_arraying]")
{
    const auto cfg = table_config();
    const auto amps = sweep_amps();
    const auto tr = simulate_arrayed_pll(cfg, amps, {});
    const double tol = 0.01 * kTwoPi * cfg.f_offset_p;
    const std::size_t n = tr.theta.size();
    const auto from = static_cast<std::size_t>(4e-6 / cfg.dt);
    for (std::size_t i = from; i + 1 < n; ++i)
    {
        REQUIRE(std::abs(tr.theta[i + 1] - tr.theta[i]) / cfg.dt < tol);
        for (const auto &row : tr.phi)
            REQUIRE(std::abs(row[i + 1] - row[i]) / cfg.dt < tol);
    }
    std::vector<long> cycles;
    for (const auto &row : tr.phi)
    {
        const double x = row.back() + tr.theta.back();
        cycles.push_back(std::lround(x / kTwoPi));
        CHECK(std::abs(x - kTwoPi * double(cycles.back())) < 1e-3);
    }
    CHECK(tr.theta.back() == Approx(locked_phase(cfg, amps, cycles)).margin(1e-3));
}

TEST_CASE("arrayed closed form for the sweep amplitudes", "[carrier_arraying]")
{
    const auto cfg = table_config();
    const double a = a_rss(sweep_amps());
    const auto s = arrayed_linear_variance(cfg, a, 1.0);
    CHECK(s.variance == Approx(1.5504e6).epsilon(1e-4));
    CHECK(s.variance <= s.variance_bound);
    const double single = linear_variance(PllConfig::defaults_for(SystemParams{}, 5e6), 1.0, 1.0).variance;
    CHECK(single == Approx(4.927e6).epsilon(1e-3));
    CHECK(s.variance / single < 0.5);
    CHECK(single / s.variance == Approx(3.2).epsilon(0.02));
    CHECK(arrayed_linear_variance(cfg, a, 0.0).variance == 0.0);
}

TEST_CASE("arrayed closed form equals the integrated closed-loop spectrum", "[carrier_arraying]")
{
    const auto cfg = table_config();
    const double inf = std::numeric_limits<double>::infinity();
    for (double a : {0.5, std::sqrt(1.74), 3.0})
    {
        const double gp = cfg.primary_gain(a);
        const double n0 = 1e-8;
        auto psd = [&](double f) { return oracle::arrayed_psd(a, gp, cfg.mu, cfg.epsilon_p, n0, f); };
        const double full = oracle::integrate_psd(psd, -inf, inf, 5e6);
        CHECK(arrayed_linear_variance(cfg, a, n0).variance == Approx(full).epsilon(1e-6));

        const Band band = signal_band(SystemParams{});
        const double part = oracle::integrate_psd(psd, -band.below, band.above, 5e6);
        CHECK(arrayed_linear_variance(cfg, a, n0, band).band_variance == Approx(part).epsilon(0.005));

        const std::vector<double> grid = {0.0, 1e6, -3e7};
        const auto p = arrayed_linear_psd(cfg, a, n0, grid, {inf, inf});
        CHECK(p[0] == Approx(n0 / (2.0 * a * a)).epsilon(1e-12));
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(p[i] == Approx(psd(grid[i])).epsilon(1e-10));
        for (double v : arrayed_linear_psd(cfg, a, 0.0, grid, {inf, inf}))
            CHECK(v == 0.0);
    }
}

TEST_CASE("arrayed variance never exceeds its bound", "[carrier_arraying][property]")
{
    std::mt19937_64 gen(3);
    auto logu = [&](double lo, double hi) {
        return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(gen));
    };
    for (int i = 0; i < 10000; ++i)
    {
        ArrayingConfig cfg;
        cfg.mu = logu(1e4, 1e9);
        cfg.gp_rule = logu(1e4, 1e9);
        cfg.epsilon_p = logu(1e3, 1e9);
        const auto s = arrayed_linear_variance(cfg, logu(1e-3, 1e2), logu(1e-12, 1.0));
        REQUIRE(s.variance > 0.0);
        REQUIRE(s.variance <= s.variance_bound * (1.0 + 1e-12));
    }
}

TEST_CASE("a fade at the first antenna only stops the single loop", "[carrier_arraying]")
{
    const auto cfg = table_config();
    std::vector<cd> amps = sweep_amps();
    amps[0] = 0.0;
    const auto s = arrayed_linear_variance(cfg, a_rss(amps), 1e-8);
    CHECK(std::isfinite(s.variance));
    CHECK(s.variance > 0.0);
    CHECK_THROWS_AS(linear_variance(PllConfig::defaults_for(SystemParams{}, 5e6), std::abs(amps[0]), 1e-8),
                    std::invalid_argument);

    // the surviving pair still locks
    ArrayingConfig pair = cfg;
    pair.antennas = {4, 14};
    const std::vector<cd> rest = {amps[1], amps[2]};
    const auto tr = simulate_arrayed_pll(pair, rest, {});
    const std::size_t n = tr.theta.size();
    CHECK(std::abs(tr.theta[n - 1] - tr.theta[n - 2]) / cfg.dt < 0.01 * kTwoPi * cfg.f_offset_p);
}

TEST_CASE("simulated arrayed loop matches the closed-form variance at high SNR", "[carrier_arraying][montecarlo]")
{
    const auto cfg = table_config();
    const SystemParams params;
    const auto amps = sweep_amps();
    const double target = 0.01;
    const double n0 = target / arrayed_linear_variance(cfg, a_rss(amps), 1.0).variance;
    const std::size_t n = trace_length(cfg.duration, cfg.dt);
    const auto first = static_cast<std::size_t>(std::ceil(params.window_start() / cfg.dt));
    const int trials = 500;
    std::vector<double> sum(n - first, 0.0), sum2(n - first, 0.0);
    for (int t = 0; t < trials; ++t)
    {
        std::vector<std::vector<cd>> w;
        for (std::uint64_t m = 0; m < 3; ++m)
            w.push_back(synth_baseband_noise(n0, cfg.dt, n, derive_seed(41, {std::uint64_t(t), m})));
        const auto tr = simulate_arrayed_pll(cfg, amps, w);
        std::vector<long> cycles;
        for (const auto &row : tr.phi)
            cycles.push_back(std::lround((row.back() + tr.theta.back()) / kTwoPi));
        const double rest = locked_phase(cfg, amps, cycles);
        for (std::size_t i = first; i < n; ++i)
        {
            const double v = tr.theta[i] - rest;
            sum[i - first] += v;
            sum2[i - first] += v * v;
        }
    }
    double var = 0.0;
    for (std::size_t i = 0; i < sum.size(); ++i)
    {
        const double m = sum[i] / trials;
        var += (sum2[i] - trials * m * m) / (trials - 1);
    }
    var /= double(sum.size());
    INFO("simulated " << var);
    CHECK(var == Approx(target).epsilon(0.15));
}

TEST_CASE("arraying configuration is validated", "[carrier_arraying]")
{
    auto cfg = table_config();
    CHECK_NOTHROW(cfg.validate(64));
    auto dup = cfg;
    dup.antennas = {0, 0, 4};
    CHECK_THROWS_AS(dup.validate(), std::invalid_argument);
    auto outside = cfg;
    outside.antennas = {0, 4, 64};
    CHECK_THROWS_AS(outside.validate(64), std::invalid_argument);
    auto empty = cfg;
    empty.antennas.clear();
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
    auto coarse = cfg;
    coarse.dt = 1e-7;
    CHECK_THROWS_AS(coarse.validate(), std::invalid_argument);

    const std::vector<cd> two = {1.0, 0.5};
    CHECK_THROWS_AS(simulate_arrayed_pll(cfg, two, {}), std::invalid_argument);
    std::vector<cd> faded = sweep_amps();
    faded[1] = 0.0;
    CHECK_THROWS_AS(simulate_arrayed_pll(cfg, faded, {}), std::invalid_argument);
    const std::vector<std::vector<cd>> short_noise(3, std::vector<cd>(5));
    CHECK_THROWS_AS(simulate_arrayed_pll(cfg, sweep_amps(), short_noise), std::invalid_argument);
    CHECK_THROWS_AS(arrayed_linear_variance(cfg, 0.0, 1e-8), std::invalid_argument);
}
