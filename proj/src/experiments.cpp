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

#include "pace/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "pace/carrier_arraying.hpp"
#include "pace/link_eval.hpp"
#include "pace/pace_estimation.hpp"
#include "pace/pll_core.hpp"
#include "pace/rng.hpp"
#include "pace/stochastic_channel.hpp"

namespace pace
{

namespace
{

const std::uint64_t kAggregateStream = hash_tag("aggregate");
const std::uint64_t kMotionStream = hash_tag("motion");
const std::uint64_t kChannelStream = hash_tag("channel");

double from_db(double db)
{
    return std::pow(10.0, db / 10.0);
}

struct Moments
{
    double mean = 0.0;
    double std = 0.0;
};

Moments moments(const std::vector<double> &v)
{
    Moments m;
    if (v.empty())
        return m;
    m.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1)
    {
        double s = 0.0;
        for (double x : v)
            s += (x - m.mean) * (x - m.mean);
        m.std = std::sqrt(s / static_cast<double>(v.size() - 1));
    }
    return m;
}

double mean_of(const std::vector<double> &v)
{
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Effective SNRs with E_d applied, either as configured or water-filled on the unit-energy SNRs.
std::vector<double> allocate(std::vector<double> unit_gamma, const SystemParams &params, bool waterfill_on)
{
    if (!waterfill_on)
    {
        for (std::size_t i = 0; i < unit_gamma.size(); ++i)
            unit_gamma[i] *= params.data_energy[i];
        return unit_gamma;
    }
    if (std::all_of(unit_gamma.begin(), unit_gamma.end(), [](double g) { return g == 0.0; }))
        return unit_gamma;
    const auto pa = waterfill(unit_gamma, params.symbol_energy);
    for (std::size_t i = 0; i < unit_gamma.size(); ++i)
        unit_gamma[i] *= pa.e_d[i];
    return unit_gamma;
}

SystemParams unit_energy(SystemParams p)
{
    p.data_energy.assign(p.data_energy.size(), 1.0);
    return p;
}

bool is_arrayed(const std::string &scheme)
{
    return scheme == "pace_arrayed";
}

ChannelSnapshot scenario_snapshot(const ExperimentConfig &c)
{
    if (c.scenario == Scenario::sparse_fixture)
        return sparse_fixture(c.system);
    const auto base = derive_seed(c.seed, {hash_tag(to_string(c.experiment)), kChannelStream});
    const int l = c.l_grid.empty() ? 3 : c.l_grid.front();
    auto snap = stochastic_channel(l, base, c.clusters);
    Rng motion(derive_seed(base, {kMotionStream}));
    return apply_mobility(snap, c.mobility_distance, motion.uniform(-kPi, kPi));
}

struct SchemeSamples
{
    std::vector<double> ise;
    std::vector<double> gamma_mean;
    std::vector<double> factor;
};

ResultRow make_row(const ExperimentConfig &c, const std::string &scheme, double x)
{
    ResultRow r;
    r.experiment = to_string(c.experiment);
    r.scheme = scheme;
    r.x = x;
    r.seed = c.seed;
    return r;
}

} // namespace

double pll_snr_to_n0(double snr_db, double a1_mag, const SystemParams &params)
{
    return a1_mag * a1_mag * params.symbol_time / from_db(snr_db);
}

double channel_snr_to_n0(double snr_db, double beta00, const SystemParams &params)
{
    return beta00 * params.symbol_energy / (params.num_subcarriers * from_db(snr_db));
}

double closed_form_variance(const CVec &ref_amplitudes, const SystemParams &params, const PllConfig &pll,
                            const ArrayingConfig &arraying, bool arrayed)
{
    arraying.validate(static_cast<int>(ref_amplitudes.size()));
    if (!arrayed)
        return linear_variance(pll, std::abs(ref_amplitudes[arraying.antennas.front()]), params.noise_psd).variance;
    std::vector<cd> sel;
    for (int m : arraying.antennas)
        sel.push_back(ref_amplitudes[m]);
    return arrayed_linear_variance(arraying, a_rss(sel), params.noise_psd).variance;
}

PaceTrial pace_trial_nonlinear(const CVec &ref_amplitudes, const SystemParams &params, const PllConfig &pll,
                               const ArrayingConfig &arraying, bool arrayed, std::uint64_t trial_seed)
{
    arraying.validate(static_cast<int>(ref_amplitudes.size()));
    Rng aggregate(derive_seed(trial_seed, {kAggregateStream}));
    PaceTrial out;
    if (!arrayed)
    {
        const int m0 = arraying.antennas.front();
        const std::size_t n = trace_length(pll.duration, pll.dt);
        std::vector<std::vector<cd>> noise{
            synth_baseband_noise(params.noise_psd, pll.dt, n, derive_seed(trial_seed, {static_cast<std::uint64_t>(m0)}))};
        const auto trace = simulate_pll(pll, ref_amplitudes[m0], noise.front());
        const auto track = track_of(trace);
        const int listed[1] = {m0};
        out.i_pace = simulate_integrator(ref_amplitudes, params, track, listed, noise, aggregate).i_pace;
        out.mean_factor = integrator_mean_factor(track, params);
        return out;
    }
    const std::size_t n = trace_length(arraying.duration, arraying.dt);
    std::vector<std::vector<cd>> noises;
    std::vector<cd> amps;
    for (int m : arraying.antennas)
    {
        noises.push_back(synth_baseband_noise(params.noise_psd, arraying.dt, n, derive_seed(trial_seed, {static_cast<std::uint64_t>(m)})));
        amps.push_back(ref_amplitudes[m]);
    }
    const auto trace = simulate_arrayed_pll(arraying, amps, noises);
    const auto track = track_of(trace);
    out.i_pace = simulate_integrator(ref_amplitudes, params, track, arraying.antennas, noises, aggregate).i_pace;
    out.mean_factor = integrator_mean_factor(track, params);
    return out;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn)
{
    unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    if (workers <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = n;
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

std::vector<ResultRow> run_fig3(const ExperimentConfig &c)
{
    c.validate();
    const auto amps = accuracy_sweep_amplitudes();
    if (c.arraying.antennas.size() != amps.size())
        throw ConfigError("fig3: the arraying set must list one antenna per reference amplitude");
    // Amplitudes live on a 16-antenna array at the arraying-set positions.
    const int num_rx = std::max(16, *std::max_element(c.arraying.antennas.begin(), c.arraying.antennas.end()) + 1);
    CVec ref = CVec::Zero(num_rx);
    for (std::size_t i = 0; i < amps.size(); ++i)
        ref[c.arraying.antennas[i]] = amps[i];
    const double a1 = std::abs(amps.front());
    const std::uint64_t tag = hash_tag(to_string(c.experiment));

    std::vector<ResultRow> rows;
    for (std::size_t xi = 0; xi < c.snr_db.size(); ++xi)
    {
        SystemParams params = c.system;
        params.noise_psd = pll_snr_to_n0(c.snr_db[xi], a1, params);
        for (const auto &scheme : c.schemes)
        {
            const bool arrayed = is_arrayed(scheme);
            std::vector<double> factor(static_cast<std::size_t>(c.trials));
            parallel_for(factor.size(), c.threads, [&](std::size_t t) {
                const auto seed = derive_seed(c.seed, {tag, xi, t});
                const int m0 = c.arraying.antennas.front();
                if (!arrayed)
                {
                    const std::size_t n = trace_length(c.pll.duration, c.pll.dt);
                    const auto noise = synth_baseband_noise(params.noise_psd, c.pll.dt, n, derive_seed(seed, {static_cast<std::uint64_t>(m0)}));
                    factor[t] = integrator_mean_factor(track_of(simulate_pll(c.pll, ref[m0], noise)), params);
                    return;
                }
                const std::size_t n = trace_length(c.arraying.duration, c.arraying.dt);
                std::vector<std::vector<cd>> noises;
                for (int m : c.arraying.antennas)
                    noises.push_back(synth_baseband_noise(params.noise_psd, c.arraying.dt, n, derive_seed(seed, {static_cast<std::uint64_t>(m)})));
                factor[t] = integrator_mean_factor(track_of(simulate_arrayed_pll(c.arraying, amps, noises)), params);
            });
            ResultRow r = make_row(c, scheme, c.snr_db[xi]);
            r.var_theta = closed_form_variance(ref, params, c.pll, c.arraying, arrayed);
            r.analytic = std::exp(-0.5 * r.var_theta);
            r.mean_factor = mean_of(factor);
            double dev = 0.0;
            for (double f : factor)
                dev += (f - r.analytic) * (f - r.analytic);
            r.deviation_var = dev / static_cast<double>(factor.size());
            r.trials = c.trials;
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<ResultRow> run_ise_vs_snr(const ExperimentConfig &c)
{
    c.validate();
    const auto snap = scenario_snapshot(c);
    snap.validate(c.system);
    const double b00 = beta(snap, 0.0, 0.0).real();
    const DataChannel channel(snap, c.system);
    const std::uint64_t tag = hash_tag(to_string(c.experiment));

    std::optional<CVec> stat_beam;
    std::vector<ResultRow> rows;
    for (std::size_t xi = 0; xi < c.snr_db.size(); ++xi)
    {
        SystemParams params = c.system;
        params.noise_psd = channel_snr_to_n0(c.snr_db[xi], b00, params);
        const SystemParams unit = unit_energy(params);
        const CVec ref = ref_tone_amplitudes(snap, params);
        for (const auto &scheme : c.schemes)
        {
            ResultRow r = make_row(c, scheme, c.snr_db[xi]);
            if (scheme == "statistical" || scheme == "perfect_mrc")
            {
                std::vector<double> g;
                if (scheme == "statistical")
                {
                    if (!stat_beam)
                        stat_beam = statistical_beamformer(snap, params).vector;
                    g = allocate(effective_snr(*stat_beam, channel, unit), params, c.waterfill);
                }
                else
                    g = allocate(perfect_mrc_snr(channel, unit), params, c.waterfill);
                r.ise_mean = ise(g);
                r.ise_std = 0.0;
                r.gamma_mean = mean_of(g);
                r.trials = 1;
                rows.push_back(r);
                continue;
            }
            const bool arrayed = is_arrayed(scheme);
            const double var = closed_form_variance(ref, params, c.pll, c.arraying, arrayed);
            SchemeSamples s;
            s.ise.resize(static_cast<std::size_t>(c.trials));
            s.gamma_mean.resize(s.ise.size());
            s.factor.resize(s.ise.size());
            parallel_for(s.ise.size(), c.threads, [&](std::size_t t) {
                const auto seed = derive_seed(c.seed, {tag, xi, t});
                CVec i_pace;
                if (c.mode == SimMode::nonlinear)
                {
                    auto trial = pace_trial_nonlinear(ref, params, c.pll, c.arraying, arrayed, seed);
                    i_pace = std::move(trial.i_pace);
                    s.factor[t] = trial.mean_factor;
                }
                else
                {
                    Rng rng(derive_seed(seed, {kAggregateStream}));
                    i_pace = analytic_pace(ref, params, var, rng).i_pace;
                    s.factor[t] = std::exp(-0.5 * var);
                }
                const auto g = allocate(effective_snr(i_pace, channel, unit), params, c.waterfill);
                s.ise[t] = ise(g);
                s.gamma_mean[t] = mean_of(g);
            });
            const auto m = moments(s.ise);
            r.ise_mean = m.mean;
            r.ise_std = m.std;
            r.gamma_mean = mean_of(s.gamma_mean);
            r.var_theta = var;
            r.analytic = std::exp(-0.5 * var);
            r.mean_factor = mean_of(s.factor);
            double dev = 0.0;
            for (double f : s.factor)
                dev += (f - r.analytic) * (f - r.analytic);
            r.deviation_var = dev / static_cast<double>(s.factor.size());
            r.trials = c.trials;
            rows.push_back(r);
        }
    }
    return rows;
}

std::vector<ResultRow> run_ise_vs_l(const ExperimentConfig &c)
{
    c.validate();
    if (c.snr_db.size() != 1)
        throw ConfigError("ise_vs_L: exactly one SNR value expected");
    const std::uint64_t tag = hash_tag(to_string(c.experiment));
    const std::size_t ns = c.schemes.size();

    std::vector<ResultRow> rows;
    for (int L : c.l_grid)
    {
        const auto channels = static_cast<std::size_t>(c.trials);
        // per (channel, scheme): mean iSE over draws, mean gamma, variance, mean factor
        std::vector<double> ise_ch(channels * ns), gamma_ch(channels * ns), var_ch(channels * ns), fac_ch(channels * ns);
        parallel_for(channels, c.threads, [&](std::size_t ch) {
            const auto base = derive_seed(c.seed, {tag, static_cast<std::uint64_t>(L), ch});
            auto snap = stochastic_channel(L, derive_seed(base, {kChannelStream}), c.clusters);
            Rng motion(derive_seed(base, {kMotionStream}));
            snap = apply_mobility(snap, c.mobility_distance, motion.uniform(-kPi, kPi));
            SystemParams params = c.system;
            params.noise_psd = channel_snr_to_n0(c.snr_db.front(), beta(snap, 0.0, 0.0).real(), params);
            const SystemParams unit = unit_energy(params);
            const CVec ref = ref_tone_amplitudes(snap, params);
            const DataChannel channel(snap, params);
            for (std::size_t si = 0; si < ns; ++si)
            {
                const auto &scheme = c.schemes[si];
                const std::size_t slot = ch * ns + si;
                var_ch[slot] = kNaN;
                fac_ch[slot] = kNaN;
                if (scheme == "statistical" || scheme == "perfect_mrc")
                {
                    const auto g = scheme == "statistical"
                                       ? allocate(effective_snr(statistical_beamformer(snap, params).vector, channel, unit), params, c.waterfill)
                                       : allocate(perfect_mrc_snr(channel, unit), params, c.waterfill);
                    ise_ch[slot] = ise(g);
                    gamma_ch[slot] = mean_of(g);
                    continue;
                }
                const bool arrayed = is_arrayed(scheme);
                const double var = closed_form_variance(ref, params, c.pll, c.arraying, arrayed);
                double acc_ise = 0.0, acc_gamma = 0.0, acc_fac = 0.0;
                for (int d = 0; d < c.draws; ++d)
                {
                    const auto seed = derive_seed(base, {hash_tag(scheme), static_cast<std::uint64_t>(d)});
                    CVec i_pace;
                    if (c.mode == SimMode::nonlinear)
                    {
                        auto trial = pace_trial_nonlinear(ref, params, c.pll, c.arraying, arrayed, seed);
                        i_pace = std::move(trial.i_pace);
                        acc_fac += trial.mean_factor;
                    }
                    else
                    {
                        Rng rng(seed);
                        i_pace = analytic_pace(ref, params, var, rng).i_pace;
                        acc_fac += std::exp(-0.5 * var);
                    }
                    const auto g = allocate(effective_snr(i_pace, channel, unit), params, c.waterfill);
                    acc_ise += ise(g);
                    acc_gamma += mean_of(g);
                }
                ise_ch[slot] = acc_ise / c.draws;
                gamma_ch[slot] = acc_gamma / c.draws;
                fac_ch[slot] = acc_fac / c.draws;
                var_ch[slot] = var;
            }
        });
        for (std::size_t si = 0; si < ns; ++si)
        {
            std::vector<double> is, gs, vs, fs;
            for (std::size_t ch = 0; ch < channels; ++ch)
            {
                is.push_back(ise_ch[ch * ns + si]);
                gs.push_back(gamma_ch[ch * ns + si]);
                vs.push_back(var_ch[ch * ns + si]);
                fs.push_back(fac_ch[ch * ns + si]);
            }
            ResultRow r = make_row(c, c.schemes[si], L);
            const auto m = moments(is);
            r.ise_mean = m.mean;
            r.ise_std = m.std;
            r.gamma_mean = mean_of(gs);
            if (c.schemes[si].rfind("pace_", 0) == 0)
            {
                // median variance: deep fades at the loop antennas make the mean uninformative
                std::sort(vs.begin(), vs.end());
                r.var_theta = vs[vs.size() / 2];
                r.analytic = std::exp(-0.5 * r.var_theta);
                r.mean_factor = mean_of(fs);
            }
            r.trials = c.trials;
            rows.push_back(r);
        }
    }
    return rows;
}

TraceTable run_pll_trace(const ExperimentConfig &c)
{
    c.validate();
    const auto amps = accuracy_sweep_amplitudes();
    const bool arrayed = is_arrayed(c.schemes.front());
    const std::uint64_t seed = derive_seed(c.seed, {hash_tag(to_string(c.experiment)), 0, 0});
    SystemParams params = c.system;
    params.noise_psd = c.trace_snr_db ? pll_snr_to_n0(*c.trace_snr_db, std::abs(amps.front()), params) : 0.0;

    TraceTable table;
    table.columns = {"t_seconds", "theta_rad"};
    if (!arrayed)
    {
        std::vector<cd> noise;
        if (c.trace_snr_db)
            noise = synth_baseband_noise(params.noise_psd, c.pll.dt, trace_length(c.pll.duration, c.pll.dt),
                                         derive_seed(seed, {static_cast<std::uint64_t>(c.arraying.antennas.front())}));
        const auto tr = simulate_pll(c.pll, amps.front(), noise);
        std::vector<double> t(tr.theta.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            t[i] = tr.time(i);
        table.data = {t, tr.theta};
        return table;
    }
    if (c.arraying.antennas.size() != amps.size())
        throw ConfigError("pll_trace: the arraying set must list one antenna per reference amplitude");
    std::vector<std::vector<cd>> noises;
    if (c.trace_snr_db)
        for (int m : c.arraying.antennas)
            noises.push_back(synth_baseband_noise(params.noise_psd, c.arraying.dt, trace_length(c.arraying.duration, c.arraying.dt),
                                                  derive_seed(seed, {static_cast<std::uint64_t>(m)})));
    const auto tr = simulate_arrayed_pll(c.arraying, amps, noises);
    std::vector<double> t(tr.theta.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = static_cast<double>(i) * tr.dt;
    table.data = {t, tr.theta};
    for (std::size_t m = 0; m < tr.phi.size(); ++m)
    {
        table.columns.push_back("phi_" + std::to_string(c.arraying.antennas[m] + 1));
        table.data.push_back(tr.phi[m]);
    }
    return table;
}

std::vector<OverheadRow> run_overhead(const ExperimentConfig &c)
{
    c.validate();
    std::vector<OverheadRow> rows;
    for (int nb : c.n_beams)
        for (double ta : c.t_acsi)
            for (const auto &scheme : c.schemes)
            {
                const int pilots = scheme == "pace" ? c.pace_pilots : scheme == "sparse_ruler" ? c.sparse_ruler_pilots : c.exhaustive_pilots;
                rows.push_back({scheme, pilots, nb, ta, ce_overhead(pilots, nb, c.system.cs_time(), ta)});
            }
    return rows;
}

std::optional<double> threshold_snr(const std::vector<ResultRow> &rows, const std::string &scheme, double tol)
{
    std::vector<const ResultRow *> sel;
    for (const auto &r : rows)
        if (r.scheme == scheme)
            sel.push_back(&r);
    std::sort(sel.begin(), sel.end(), [](const ResultRow *a, const ResultRow *b) { return a->x > b->x; });
    std::optional<double> best;
    for (const auto *r : sel)
    {
        if (!(std::abs(r->mean_factor - r->analytic) <= tol))
            break;
        best = r->x;
    }
    return best;
}

double snr_gap_db(std::span<const double> gamma_ref, double target_ise)
{
    std::vector<double> g(gamma_ref.begin(), gamma_ref.end());
    auto ise_at = [&](double shift_db) {
        const double s = from_db(-shift_db);
        std::vector<double> scaled(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
            scaled[i] = g[i] * s;
        return ise(scaled);
    };
    double lo = -60.0, hi = 60.0;
    if (target_ise >= ise_at(lo))
        return lo;
    if (target_ise <= ise_at(hi))
        return hi;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        (ise_at(mid) > target_ise ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace pace
