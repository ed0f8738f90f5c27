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
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace pace
{

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One CSV row per (x value, scheme). Columns that do not apply to an experiment hold nan.
struct ResultRow
{
    std::string experiment;
    std::string scheme;
    double x = kNaN;
    double ise_mean = kNaN;
    double ise_std = kNaN;
    double gamma_mean = kNaN;
    double var_theta = kNaN;     // closed-form locked-state phase variance
    double mean_factor = kNaN;   // trial mean of the integrator factor
    double analytic = kNaN;      // exp(-var_theta / 2)
    double deviation_var = kNaN; // trial mean of (factor - analytic)^2
    long trials = 0;
    std::uint64_t seed = 0;
};

struct OverheadRow
{
    std::string scheme;
    int pilots_per_beam = 0;
    int n_beams = 0;
    double t_acsi = 0.0;
    double overhead = 0.0;
};

struct TraceTable
{
    std::vector<std::string> columns; // first column is time
    std::vector<std::vector<double>> data; // one vector per column
};

extern const char *const kResultHeader;
extern const char *const kOverheadHeader;

// Shortest round-trip decimal form; nan and inf spelled out.
std::string format_number(double v);

void write_results_csv(std::ostream &os, const std::vector<ResultRow> &rows);
void write_overhead_csv(std::ostream &os, const std::vector<OverheadRow> &rows);
void write_trace_csv(std::ostream &os, const TraceTable &t);

std::vector<ResultRow> read_results_csv(std::istream &is);

} // namespace pace
