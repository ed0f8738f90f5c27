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

#include "pace/loop_spectrum.hpp"

#include <cmath>
#include <limits>

namespace pace::spectrum
{

PolePair poles(double sum, double prod)
{
    const cd disc = std::sqrt(cd(sum * sum - 4.0 * prod, 0.0));
    const cd a = 0.5 * (sum + disc);
    const cd b = (std::abs(a) > 0.0) ? cd(prod) / a : cd(0.0);
    return {a, b};
}

static bool near_double(const PolePair &p)
{
    return std::abs(p.a - p.b) <= 1e-6 * std::abs(p.a);
}

// Integral over f in [-F1, F2] of 1 / (w^2 + a^2).
static cd lorentz_integral(cd a, const Band &band)
{
    auto edge = [&](double F) {
        if (std::isinf(F))
            return cd(kPi / 2, 0.0);
        return std::atan(kTwoPi * F / a);
    };
    return (edge(band.above) + edge(band.below)) / (kTwoPi * a);
}

double shape_integral(double zero, const PolePair &p)
{
    const double inf = std::numeric_limits<double>::infinity();
    return shape_integral(zero, p, Band{inf, inf});
}

double shape_integral(double zero, const PolePair &p, const Band &band)
{
    const double z2 = zero * zero;
    if (near_double(p))
    {
        // Coincident poles: 1/(w^2+a^2) + (z^2-a^2)/(w^2+a^2)^2, the second term from d/da of the first.
        const cd a = 0.5 * (p.a + p.b);
        const cd h = 1e-4 * a;
        const cd I0 = lorentz_integral(a, band);
        const cd dI = (lorentz_integral(a + h, band) - lorentz_integral(a - h, band)) / (2.0 * h);
        // d/da of 1/(w^2+a^2) = -2a/(w^2+a^2)^2
        const cd I2 = -dI / (2.0 * a);
        return (I0 + (z2 - a * a) * I2).real();
    }
    const cd a2 = p.a * p.a;
    const cd b2 = p.b * p.b;
    const cd ca = (z2 - a2) / (b2 - a2);
    const cd cb = (z2 - b2) / (a2 - b2);
    return (ca * lorentz_integral(p.a, band) + cb * lorentz_integral(p.b, band)).real();
}

double shape(double zero, const PolePair &p, double f)
{
    const double w2 = kTwoPi * kTwoPi * f * f;
    const cd den = (w2 + p.a * p.a) * (w2 + p.b * p.b);
    return (w2 + zero * zero) / den.real();
}

double shape_autocorr(double zero, const PolePair &p, double tau)
{
    const double t = std::abs(tau);
    const double z2 = zero * zero;
    auto f = [&](cd x) { return (x - z2 / x) * std::exp(-x * t); };
    if (near_double(p))
    {
        const cd m = 0.5 * (p.a + p.b);
        const cd df = (1.0 + z2 / (m * m)) * std::exp(-m * t) - t * (m - z2 / m) * std::exp(-m * t);
        return (df / (2.0 * m)).real();
    }
    return ((f(p.a) - f(p.b)) / (p.a * p.a - p.b * p.b)).real();
}

} // namespace pace::spectrum
