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

#include "pace/result_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace pace
{

const char *const kResultHeader =
    "experiment,scheme,x,ise_mean,ise_std,gamma_mean,var_theta,mean_factor,analytic,deviation_var,trials,seed";
const char *const kOverheadHeader = "scheme,pilots_per_beam,n_beams,t_acsi,overhead";

std::string format_number(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void write_results_csv(std::ostream &os, const std::vector<ResultRow> &rows)
{
    os << kResultHeader << '\n';
    for (const auto &r : rows)
    {
        os << r.experiment << ',' << r.scheme << ',' << format_number(r.x) << ',' << format_number(r.ise_mean) << ','
           << format_number(r.ise_std) << ',' << format_number(r.gamma_mean) << ',' << format_number(r.var_theta) << ','
           << format_number(r.mean_factor) << ',' << format_number(r.analytic) << ',' << format_number(r.deviation_var)
           << ',' << r.trials << ',' << r.seed << '\n';
    }
}

void write_overhead_csv(std::ostream &os, const std::vector<OverheadRow> &rows)
{
    os << kOverheadHeader << '\n';
    for (const auto &r : rows)
        os << r.scheme << ',' << r.pilots_per_beam << ',' << r.n_beams << ',' << format_number(r.t_acsi) << ','
           << format_number(r.overhead) << '\n';
}

void write_trace_csv(std::ostream &os, const TraceTable &t)
{
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? "," : "") << t.columns[c];
    os << '\n';
    const std::size_t n = t.data.empty() ? 0 : t.data.front().size();
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t c = 0; c < t.data.size(); ++c)
            os << (c ? "," : "") << format_number(t.data[c][i]);
        os << '\n';
    }
}

static double parse_number(const std::string &s)
{
    if (s == "nan")
        return kNaN;
    if (s == "inf")
        return std::numeric_limits<double>::infinity();
    if (s == "-inf")
        return -std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size())
        throw std::invalid_argument("malformed number '" + s + "'");
    return v;
}

std::vector<ResultRow> read_results_csv(std::istream &is)
{
    std::string line;
    if (!std::getline(is, line) || line != kResultHeader)
        throw std::invalid_argument("read_results_csv: unexpected header");
    std::vector<ResultRow> rows;
    while (std::getline(is, line))
    {
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            f.push_back(cell);
        if (f.size() != 12)
            throw std::invalid_argument("read_results_csv: expected 12 fields");
        ResultRow r;
        r.experiment = f[0];
        r.scheme = f[1];
        r.x = parse_number(f[2]);
        r.ise_mean = parse_number(f[3]);
        r.ise_std = parse_number(f[4]);
        r.gamma_mean = parse_number(f[5]);
        r.var_theta = parse_number(f[6]);
        r.mean_factor = parse_number(f[7]);
        r.analytic = parse_number(f[8]);
        r.deviation_var = parse_number(f[9]);
        r.trials = std::stol(f[10]);
        r.seed = std::stoull(f[11]);
        rows.push_back(r);
    }
    return rows;
}

} // namespace pace
