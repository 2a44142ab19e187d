// SPDX-License-Identifier: Apache-2.0
//
// fasmrc - outage analysis of fluid antenna systems with multi-port MRC
// Copyright (C) 2026 The fasmrc authors
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

#ifndef FASMRC_EXPERIMENT_HPP
#define FASMRC_EXPERIMENT_HPP

#include "fasmrc/analytic.hpp"
#include "fasmrc/montecarlo.hpp"
#include "fasmrc/outage_estimate.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace fasmrc::experiment
{

enum class SweepVar
{
    phi_db,
    K,
    M,
    W,
};

enum class OutputFormat
{
    csv,
    json,
};

std::string_view to_string(SweepVar v);
std::optional<SweepVar> parse_sweep_var(std::string_view name);

// A sweep over one scenario field. Every scenario field is a list; rows are the
// cartesian product, with the sweep variable varying fastest and the methods
// innermost. phi is given in dB, phi_linear = 10^(phi_db / 10).
struct ExperimentSpec
{
    std::vector<int> M{4};
    std::vector<int> K{2};
    std::vector<double> W{5.0};
    std::vector<double> R{5.0};
    std::vector<double> phi_db{10.0};
    SweepVar sweep = SweepVar::phi_db;
    std::vector<Method> methods;

    mc::McConfig mc;
    analytic::SeriesTruncation trunc;
    analytic::QuadratureConfig quad;

    std::string output_path; // empty: standard output
    OutputFormat format = OutputFormat::csv;
};

struct Violation
{
    std::string code; // e.g. ANALYTIC_REQUIRES_K_LT_M, NONPOSITIVE_APERTURE
    std::string message;
};

// Every violation found; an empty list means the experiment is runnable. Never throws.
std::vector<Violation> validate_spec(const ExperimentSpec &spec);

struct ResultRow
{
    std::string sweep_var;
    double sweep_value = 0.0;
    int M = 0;
    int K = 0;
    double W = 0.0;
    double R = 0.0;
    double phi_db = 0.0;
    std::string method;
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double diag_tail = 0.0;  // gc: series tail bound, lb: cancellation ratio, asy: log10 value
    double diag_nodes = 0.0; // gc: quadrature nodes, lb: closed-form terms
    std::uint64_t samples = 0;
    std::string status = "ok";
    double wall_ms = 0.0;

    bool operator==(const ResultRow &) const = default;
};

struct RunOptions
{
    unsigned jobs = 1;
    bool record_wall_time = true; // false makes the output reproducible byte for byte
};

// Runs every (point, method) pair. Per-point failures are recorded in the row
// status and never abort the sweep. Rows come back in experiment order regardless of
// jobs. Monte-Carlo points that differ only in K share their channel draws.
// Throws std::invalid_argument if validate_spec reports violations.
std::vector<ResultRow> run_experiment(const ExperimentSpec &spec, const RunOptions &options = {});

// Declarative config (JSON). Scalars are accepted wherever a list is expected.
// Throws std::invalid_argument on malformed input.
ExperimentSpec spec_from_json(const nlohmann::json &config);
nlohmann::json spec_to_json(const ExperimentSpec &spec);
ExperimentSpec load_spec(const std::filesystem::path &path);

// Config shipped under <preset_dir>/<name>.json.
ExperimentSpec load_preset(std::string_view name, const std::filesystem::path &preset_dir);
std::filesystem::path default_preset_dir();

inline constexpr const char *csv_header =
    "sweep_var,sweep_value,M,K,W,R,phi_db,method,value,ci_low,ci_high,diag_tail,diag_nodes,samples,status,wall_ms";

// Reals use 17 significant digits. A "# generated <timestamp>" line precedes the
// header when a timestamp is given.
void write_csv(std::ostream &out, const std::vector<ResultRow> &rows, const std::optional<std::string> &timestamp);
void write_json(std::ostream &out, const std::vector<ResultRow> &rows, const std::optional<std::string> &timestamp);
std::vector<ResultRow> read_csv(std::istream &in);

// UTC, ISO 8601
std::string utc_timestamp();

} // namespace fasmrc::experiment

#endif
