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
#include "pace/pll_core.hpp"
#include "pace/rng.hpp"

using namespace pace;
using Catch::Approx;

namespace
{

PllConfig table_config()
{
    return PllConfig::defaults_for(SystemParams{}, 5e6);
}

// Variance across trials, pooled over every sample from t_start on. Each trial is first moved by
// whole cycles so that its segment mean sits within pi of zero.
double ensemble_variance(const PllConfig &cfg, cd a1, double n0, int trials, LoopModel model, double t_start,
                         std::uint64_t seed)
{
    const std::size_t n = trace_length(cfg.duration, cfg.dt);
    const auto first = static_cast<std::size_t>(std::ceil(t_start / cfg.dt));
    std::vector<double> sum(n - first, 0.0), sum2(n - first, 0.0);
    for (int t = 0; t < trials; ++t)
    {
        const auto w = synth_baseband_noise(n0, cfg.dt, n, derive_seed(seed, {std::uint64_t(t)}));
        const auto tr = simulate_pll(cfg, a1, w, model);
        double mean = 0.0;
        for (std::size_t i = first; i < n; ++i)
            mean += tr.theta[i];
        mean /= double(n - first);
        const double shift = kTwoPi * std::round(mean / kTwoPi);
        for (std::size_t i = first; i < n; ++i)
        {
            const double v = tr.theta[i] - shift;
            sum[i - first] += v;
            sum2[i - first] += v * v;
        }
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < sum.size(); ++i)
    {
        const double m = sum[i] / trials;
        acc += (sum2[i] - trials * m * m) / (trials - 1);
    }
    return acc / double(sum.size());
}

} // namespace

TEST_CASE("baseband noise generator", "[pll_core]")
{
    const double dt = 1e-6 / 1024;
    const auto zero = synth_baseband_noise(0.0, dt, 1000, 3);
    for (cd w : zero)
        CHECK(w == cd(0.0));

    const double n0 = 2e-8;
    const auto w = synth_baseband_noise(n0, dt, 1000000, 5);
    double p = 0.0;
    cd mean = 0.0;
    for (cd x : w)
    {
        p += std::norm(x);
        mean += x;
    }
    p /= double(w.size());
    CHECK(p == Approx(n0 / dt).epsilon(0.01));
    CHECK(std::abs(mean) / double(w.size()) < 5.0 * std::sqrt(n0 / dt / double(w.size())));

    CHECK(synth_baseband_noise(n0, dt, 64, 9) == synth_baseband_noise(n0, dt, 64, 9));
    CHECK(synth_baseband_noise(n0, dt, 64, 9) != synth_baseband_noise(n0, dt, 64, 10));
}

TEST_CASE("zero offset and zero noise stay at equilibrium", "[pll_core]")
{
    PllConfig cfg = table_config();
    cfg.f_offset = 0.0;
    cfg.duration = 10000 * cfg.dt;
    for (cd a : {cd(1.0), std::polar(0.3, 2.0), cd(0.0, -4.0)})
    {
        const auto tr = simulate_pll(cfg, a, {});
        REQUIRE(tr.theta.size() == 10000);
        double worst = 0.0;
        for (double th : tr.theta)
            worst = std::max(worst, std::abs(th));
        CHECK(worst < 1e-9);
        // input rotation puts the equilibrium at zero: A exp(-j ref) = -j|A|
        CHECK(std::abs(a * std::polar(1.0, -tr.ref_phase) - cd(0.0, -std::abs(a))) < 1e-12);
    }
}

TEST_CASE("noiseless loop acquires a 5 MHz offset within 3 us", "[pll_core]")
{
    const auto cfg = table_config();
    const auto tr = simulate_pll(cfg, cd(1.0), {});
    const double tol = 0.01 * kTwoPi * cfg.f_offset;
    const auto i3 = static_cast<std::size_t>(3e-6 / cfg.dt);
    for (std::size_t i = i3; i + 1 < tr.theta.size(); ++i)
        REQUIRE(std::abs(tr.theta[i + 1] - tr.theta[i]) / cfg.dt < tol);
    const auto lock = detect_lock(tr, 0.25e-6, tol);
    REQUIRE(lock.has_value());
    CHECK(*lock <= 3e-6);
    // settles on a whole number of cycles
    const double end = tr.theta.back();
    CHECK(std::abs(end - kTwoPi * std::round(end / kTwoPi)) < 1e-3);
}

TEST_CASE("acquisition time estimate", "[pll_core]")
{
    auto cfg = table_config();
    CHECK(acquisition_time(cfg, 1.0) == Approx(1e-6).epsilon(1e-12));
    const double base = acquisition_time(cfg, 0.8);
    cfg.f_offset *= 2.0;
    CHECK(acquisition_time(cfg, 0.8) == Approx(4.0 * base).epsilon(1e-12));
    cfg.f_offset = 0.0;
    CHECK(acquisition_time(cfg, 1.0) == 0.0);
    CHECK_THROWS_AS(acquisition_time(cfg, 0.0), std::invalid_argument);
}

TEST_CASE("autocorrelation at zero lag equals the closed form in both pole regimes", "[pll_core][property]")
{
    std::mt19937_64 gen(17);
    auto logu = [&](double lo, double hi) {
        return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(gen));
    };
    int complex_regime = 0;
    for (int i = 0; i < 1000; ++i)
    {
        PllConfig cfg;
        cfg.loop_gain_product = logu(1e4, 1e9);
        cfg.epsilon = logu(1e3, 1e9);
        const double amp = logu(1e-3, 1e2);
        const double n0 = logu(1e-12, 1.0);
        complex_regime += cfg.loop_gain_product < 4.0 * cfg.epsilon;
        const double expect = n0 * (cfg.loop_gain_product + cfg.epsilon) / (4.0 * amp * amp);
        CHECK(linear_autocorr(cfg, amp, n0, 0.0) == Approx(expect).epsilon(1e-9));
    }
    CHECK(complex_regime > 100);
    CHECK(complex_regime < 900);

    // double pole exactly
    PllConfig cfg;
    cfg.loop_gain_product = 4e6;
    cfg.epsilon = 1e6;
    CHECK(linear_autocorr(cfg, 1.0, 1.0, 0.0) == Approx(5e6 / 4.0).epsilon(1e-9));
}

TEST_CASE("autocorrelation is even and decays", "[pll_core]")
{
    const auto cfg = table_config();
    const double r0 = linear_autocorr(cfg, 1.0, 1e-8, 0.0);
    for (double tau : {1e-9, 3e-8, 2e-7})
        CHECK(linear_autocorr(cfg, 1.0, 1e-8, tau) == Approx(linear_autocorr(cfg, 1.0, 1e-8, -tau)).epsilon(1e-12));
    const double far = 100.0 / cfg.loop_gain_product;
    CHECK(std::abs(linear_autocorr(cfg, 1.0, 1e-8, far)) < 1e-12 * r0);
}

TEST_CASE("autocorrelation matches the transform of the loop spectrum", "[pll_core]")
{
    const auto cfg = table_config();
    const double amp = 0.7, n0 = 1e-8;
    const double gain = cfg.loop_gain_product / amp;
    const double inf = std::numeric_limits<double>::infinity();
    for (double tau : {0.0, 5e-8, 2e-7})
    {
        const double r = oracle::integrate_psd(
            [&](double f) { return oracle::one_loop_psd(gain, amp, cfg.epsilon, n0, f) * std::cos(2 * kPi * f * tau); },
            tau == 0.0 ? -inf : -2e9, tau == 0.0 ? inf : 2e9, 5e6);
        CHECK(linear_autocorr(cfg, amp, n0, tau) == Approx(r).epsilon(1e-4).margin(1e-6 * r));
    }
}

TEST_CASE("loop spectrum values", "[pll_core]")
{
    const auto cfg = table_config();
    const double amp = 1.3, n0 = 4e-9;
    const double inf = std::numeric_limits<double>::infinity();
    const std::vector<double> grid = {0.0, 1e5, 2e6, -7e6, 3e8};
    const auto psd = linear_psd(cfg, amp, n0, grid, {inf, inf});
    CHECK(psd[0] == Approx(n0 / (2 * amp * amp)).epsilon(1e-12));
    const double gain = cfg.loop_gain_product / amp;
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(psd[i] == Approx(oracle::one_loop_psd(gain, amp, cfg.epsilon, n0, grid[i])).epsilon(1e-10));

    for (double v : linear_psd(cfg, amp, 0.0, grid, {inf, inf}))
        CHECK(v == 0.0);
    const auto banded = linear_psd(cfg, amp, n0, grid, {1e6, 1e6});
    CHECK(banded[2] == 0.0);
    CHECK(banded[1] > 0.0);
}

TEST_CASE("band-limited variance equals the integrated spectrum", "[pll_core]")
{
    const auto cfg = table_config();
    const SystemParams params;
    const double amp = 1.0, n0 = 1e-8;
    const Band band = signal_band(params);
    CHECK(band.below == Approx(512e6));
    CHECK(band.above == Approx(511e6));
    const auto stats = linear_variance(cfg, amp, n0, band);
    const double gain = cfg.loop_gain_product / amp;
    const double quad = oracle::integrate_psd(
        [&](double f) { return oracle::one_loop_psd(gain, amp, cfg.epsilon, n0, f); }, -band.below, band.above, 5e6);
    CHECK(stats.band_variance == Approx(quad).epsilon(0.005));
    CHECK(stats.band_variance <= stats.variance);
    // narrow band through the implementation's own spectrum
    const Band narrow{3e6, 8e6};
    std::vector<double> grid;
    for (int i = 0; i <= 20000; ++i)
        grid.push_back(-narrow.below + (narrow.above + narrow.below) * i / 20000.0);
    const auto s = linear_variance(cfg, amp, n0, narrow, grid);
    double trap = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        trap += 0.5 * (s.psd[i] + s.psd[i - 1]) * (grid[i] - grid[i - 1]);
    CHECK(s.band_variance == Approx(trap).epsilon(0.005));
}

TEST_CASE("locked-state variance closed form", "[pll_core]")
{
    const auto cfg = table_config();
    CHECK(linear_variance(cfg, 1.0, 0.0).variance == 0.0);
    const auto s = linear_variance(cfg, 1.0, 2.03e-8);
    CHECK(s.variance == Approx(0.10).epsilon(0.01));
    CHECK(s.variance == Approx(2.03e-8 * (kPi * 5e6 + 4e6) / 4.0).epsilon(1e-9));
    CHECK(s.variance <= s.variance_bound * (1 + 1e-12));
    CHECK(linear_variance(cfg, 1.0, 6.09e-8).variance == Approx(3.0 * s.variance).epsilon(1e-12));
    // complex-conjugate poles for these constants
    CHECK(std::abs(s.a.imag()) > 0.0);
    CHECK(std::abs(s.a + s.b - cd(cfg.loop_gain_product)) < 1e-6 * cfg.loop_gain_product);
    CHECK_THROWS_AS(linear_variance(cfg, 0.0, 1e-8), std::invalid_argument);
}

TEST_CASE("simulated linear loop matches the closed-form variance", "[pll_core][montecarlo]")
{
    const auto cfg = table_config();
    const SystemParams params;
    for (double target : {0.1, 0.02})
    {
        const double n0 = target / linear_variance(cfg, 1.0, 1.0).variance;
        const double v = ensemble_variance(cfg, cd(0.6, 0.8), n0, 500, LoopModel::linear, params.window_start(), 21);
        INFO("target " << target << " simulated " << v);
        CHECK(v == Approx(target).epsilon(0.05));
    }
}

TEST_CASE("nonlinear loop at high SNR matches the closed-form variance", "[pll_core][montecarlo]")
{
    const auto cfg = table_config();
    const SystemParams params;
    const double target = 0.01;
    const double n0 = target / linear_variance(cfg, 1.0, 1.0).variance;
    const double v = ensemble_variance(cfg, cd(1.0), n0, 500, LoopModel::nonlinear, params.window_start(), 33);
    INFO("simulated " << v);
    CHECK(v == Approx(target).epsilon(0.10));
}

TEST_CASE("lock detector", "[pll_core]")
{
    PllTrace flat;
    flat.dt = 1e-9;
    flat.theta.assign(2000, 0.0);
    auto lock = detect_lock(flat, 1e-7, 1e3);
    REQUIRE(lock.has_value());
    CHECK(*lock == 0.0);

    PllTrace ramp = flat;
    for (std::size_t i = 0; i < ramp.theta.size(); ++i)
        ramp.theta[i] = kTwoPi * 1e6 * ramp.time(i);
    CHECK_FALSE(detect_lock(ramp, 1e-7, 1e5).has_value());
    CHECK_THROWS_AS(detect_lock(flat, 1e-5, 1e3), std::invalid_argument);
}

TEST_CASE("identical inputs give identical traces", "[pll_core]")
{
    const auto cfg = table_config();
    const auto w = synth_baseband_noise(1e-7, cfg.dt, trace_length(cfg.duration, cfg.dt), 8);
    const auto a = simulate_pll(cfg, cd(0.2, 0.9), w);
    const auto b = simulate_pll(cfg, cd(0.2, 0.9), w);
    CHECK(a.theta == b.theta);
    CHECK(a.theta.size() == trace_length(6.5e-6, 1e-6 / 1024));
    CHECK(a.theta.size() == 6656);
}

TEST_CASE("invalid loop inputs are rejected", "[pll_core]")
{
    auto cfg = table_config();
    CHECK_THROWS_AS(simulate_pll(cfg, cd(0.0), {}), std::invalid_argument);
    const std::vector<cd> short_noise(10);
    CHECK_THROWS_AS(simulate_pll(cfg, cd(1.0), short_noise), std::invalid_argument);
    auto coarse = cfg;
    coarse.dt = 1e-7;
    CHECK_THROWS_AS(simulate_pll(coarse, cd(1.0), {}), std::invalid_argument);
    auto runaway = cfg;
    runaway.f_offset = 1e11;
    runaway.loop_gain_product = 1e6;
    CHECK_THROWS_AS(simulate_pll(runaway, cd(1.0), {}), SimulationDiagnostic);
}
