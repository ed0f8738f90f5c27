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

#include "pace/types.hpp"

namespace pace
{

// Two-sided frequency band [-below, above] in Hz. Infinite edges mean the full line.
struct Band
{
    double below = 0.0;
    double above = 0.0;
};

namespace spectrum
{

// Roots a, b of x^2 - sum x + prod, returned so that a + b = sum and a b = prod.
// The larger-magnitude root is computed first and the other by division to avoid cancellation.
struct PolePair
{
    cd a;
    cd b;
};
PolePair poles(double sum, double prod);

// Integral over f of (w^2 + zero^2) / ((w^2 + a^2)(w^2 + b^2)), w = 2 pi f, on a band or the whole line.
// Requires Re a > 0 and Re b > 0.
double shape_integral(double zero, const PolePair &p);
double shape_integral(double zero, const PolePair &p, const Band &band);

// Same integrand, evaluated pointwise.
double shape(double zero, const PolePair &p, double f);

// Inverse transform of the shape above scaled to the two-sided spectrum: returns
// (f(a) - f(b)) / (a^2 - b^2) with f(x) = (x^2 - zero^2) exp(-x |tau|) / x, which equals
// 2 x the integral of shape(f) exp(j 2 pi f tau) df. Handles near-coincident poles.
double shape_autocorr(double zero, const PolePair &p, double tau);

} // namespace spectrum
} // namespace pace
