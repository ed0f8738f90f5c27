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

// Reference computations for the test suites. Nothing here calls into the library code paths
// being checked; each routine rebuilds its quantity from first principles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle
{

using cd = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// Adaptive Gauss-Kronrod over [lo, hi]; the interval is cut at the listed interior points first.
inline double integrate(const std::function<double(double)> &f, double lo, double hi,
                        std::vector<double> cuts = {})
{
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    {
        if (cuts[i] < lo || cuts[i + 1] > hi || !(cuts[i + 1] > cuts[i]))
            continue;
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[i], cuts[i + 1], 20, 1e-12);
    }
    return total;
}

// Phase spectrum of the linearized single loop straight from its transfer function
// G (s + eps) / (s^2 + G|A| s + G|A| eps) driven by real noise of two-sided density N0 / 2.
inline double one_loop_psd(double gain, double amp, double eps, double n0, double f)
{
    const cd s(0.0, 2.0 * pi * f);
    const cd h = gain * (s + eps) / (s * s + gain * amp * (s + eps));
    return 0.5 * n0 * std::norm(h);
}

// Phase spectrum of the linearized arrayed loop written directly from its closed-loop response.
inline double arrayed_psd(double a_rss, double gp, double mu, double eps_p, double n0, double f)
{
    const cd s(0.0, 2.0 * pi * f);
    const double a2 = a_rss * a_rss;
    const cd h = (s + eps_p) / (s * mu * (std::sqrt(2.0) * s + mu) + (s + eps_p) * a2 * gp);
    return 0.5 * n0 * a2 * gp * gp * std::norm(h);
}

// Integral of a loop spectrum over [lo, hi] with extra resolution near the loop bandwidth.
inline double integrate_psd(const std::function<double(double)> &psd, double lo, double hi, double bandwidth)
{
    std::vector<double> cuts{0.0};
    for (double m : {0.1, 1.0, 10.0, 100.0})
    {
        cuts.push_back(m * bandwidth);
        cuts.push_back(-m * bandwidth);
    }
    return integrate(psd, lo, hi, cuts);
}

// Constant primary phase of a locked arrayed loop started from rest. The filter state minus
// sqrt(2) eps sum(phi_m / G_m^2) is conserved by the loop equations, so once secondary loop m sits
// cycles[m] turns away from the primary the resting phase follows from the gain rules alone.
inline double arrayed_rest_phase(double mu, double gp_rule, double eps_p, double f_offset_p,
                                 const std::vector<double> &amp_mags, const std::vector<long> &cycles)
{
    double a2 = 0.0;
    for (double a : amp_mags)
        a2 += a * a;
    const double gp = gp_rule * mu / a2;
    double w = 0.0, wk = 0.0;
    for (std::size_t m = 0; m < amp_mags.size(); ++m)
    {
        const double inv_g2 = amp_mags[m] * amp_mags[m] / (mu * mu);
        w += inv_g2;
        wk += inv_g2 * 2.0 * pi * double(cycles[m]);
    }
    return (wk - 2.0 * pi * f_offset_p / (gp * eps_p)) / w;
}

// Smallest water level L with sum max(0, L - 1/g) = budget, by bisection.
struct WaterfillResult
{
    std::vector<double> e;
    double level = 0.0;
};

inline WaterfillResult waterfill_bisection(const std::vector<double> &gains, double budget)
{
    double lo = 0.0;
    double hi = budget;
    for (double g : gains)
        if (g > 0.0)
            hi = std::max(hi, budget + 1.0 / g);
    auto used = [&](double level) {
        double s = 0.0;
        for (double g : gains)
            if (g > 0.0)
                s += std::max(0.0, level - 1.0 / g);
        return s;
    };
    for (int it = 0; it < 300; ++it)
    {
        const double mid = 0.5 * (lo + hi);
        (used(mid) < budget ? lo : hi) = mid;
    }
    WaterfillResult r;
    r.level = 0.5 * (lo + hi);
    for (double g : gains)
        r.e.push_back(g > 0.0 ? std::max(0.0, r.level - 1.0 / g) : 0.0);
    return r;
}

// One received path for the time-domain demodulator: complex weight seen after combining, and an
// integer delay in samples of T_s / K.
struct SampledPath
{
    cd weight;
    int delay_samples = 0;
};

// OFDM demodulation by direct DFT of the combined baseband samples of a data symbol, with
// subcarrier symbols x indexed by k + k_low. Delays shorter than the cyclic prefix act as circular
// shifts of the symbol body. Returns Y for every subcarrier in the same order.
inline std::vector<cd> dft_demodulate(const std::vector<SampledPath> &paths, const std::vector<cd> &x, int k_low,
                                      double carrier_freq, double symbol_time, double cs_time)
{
    const int K = static_cast<int>(x.size());
    std::vector<cd> twiddle(static_cast<std::size_t>(K));
    for (int n = 0; n < K; ++n)
        twiddle[static_cast<std::size_t>(n)] = std::polar(1.0, 2.0 * pi * n / K);
    auto wrap = [K](long v) { return static_cast<std::size_t>(((v % K) + K) % K); };

    // transmit body samples s[u] = (1/sqrt(T_cs)) sum_k x_k exp(j 2 pi k u / K)
    std::vector<cd> tx(static_cast<std::size_t>(K));
    for (int u = 0; u < K; ++u)
    {
        cd acc = 0.0;
        for (int i = 0; i < K; ++i)
            acc += x[static_cast<std::size_t>(i)] * twiddle[wrap(static_cast<long>(i - k_low) * u)];
        tx[static_cast<std::size_t>(u)] = acc / std::sqrt(cs_time);
    }
    std::vector<cd> rx(static_cast<std::size_t>(K), 0.0);
    for (const auto &p : paths)
    {
        const double tau = p.delay_samples * symbol_time / K;
        const cd carrier = std::polar(1.0, -2.0 * pi * carrier_freq * tau);
        for (int u = 0; u < K; ++u)
            rx[static_cast<std::size_t>(u)] += p.weight * carrier * tx[wrap(u - p.delay_samples)];
    }
    std::vector<cd> y(static_cast<std::size_t>(K));
    for (int i = 0; i < K; ++i)
    {
        cd acc = 0.0;
        for (int u = 0; u < K; ++u)
            acc += rx[static_cast<std::size_t>(u)] * std::conj(twiddle[wrap(static_cast<long>(i - k_low) * u)]);
        y[static_cast<std::size_t>(i)] = acc / static_cast<double>(K);
    }
    return y;
}

// Largest eigenpair of a Hermitian matrix by full decomposition.
struct EigenPair
{
    Eigen::VectorXcd vector;
    double value = 0.0;
};

inline EigenPair dense_principal(const Eigen::MatrixXcd &h)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    const auto n = h.rows();
    return {es.eigenvectors().col(n - 1), es.eigenvalues()[n - 1]};
}

// Sample mean and unbiased variance.
struct Moments
{
    double mean = 0.0;
    double var = 0.0;
    std::size_t n = 0;
    double sem() const { return std::sqrt(var / static_cast<double>(n)); }
};

template <class Range>
Moments moments(const Range &r)
{
    Moments m;
    for (double v : r)
    {
        m.mean += v;
        ++m.n;
    }
    m.mean /= static_cast<double>(m.n);
    for (double v : r)
        m.var += (v - m.mean) * (v - m.mean);
    m.var /= static_cast<double>(m.n > 1 ? m.n - 1 : 1);
    return m;
}

} // namespace oracle
