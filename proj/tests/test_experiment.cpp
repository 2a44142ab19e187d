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

#include <catch_amalgamated.hpp>

#include "fasmrc/experiment.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

// Covered tests:
// - Validation codes, one per broken field
// - Row order: scenario product with the sweep field fastest, methods innermost
// - Per-point failures recorded in the status column
// - CSV round trip and header, JSON output
// - Config parsing: scalars or lists, defaults, malformed input, JSON round trip
// - Shipped presets load and validate
// - Output independent of the worker count

using namespace fasmrc;
using namespace fasmrc::experiment;
using Catch::Matchers::WithinRel;

namespace
{
std::set<std::string> codes(const ExperimentSpec &spec)
{
    std::set<std::string> out;
    for (const auto &v : validate_spec(spec))
        out.insert(v.code);
    return out;
}

ExperimentSpec small_spec()
{
    ExperimentSpec s;
    s.M = {3, 4};
    s.K = {1, 2};
    s.phi_db = {5.0, 10.0};
    s.sweep = SweepVar::phi_db;
    s.methods = {Method::mc, Method::lb, Method::asy};
    s.mc.samples = 20'000;
    s.mc.chunk_size = 4096;
    return s;
}

std::string to_csv(const std::vector<ResultRow> &rows)
{
    std::ostringstream out;
    write_csv(out, rows, std::nullopt);
    return out.str();
}
} // namespace

TEST_CASE("validate_spec")
{
    ExperimentSpec ok = small_spec();
    CHECK(validate_spec(ok).empty());

    auto broken = [&](auto mutate) {
        ExperimentSpec s = small_spec();
        mutate(s);
        return codes(s);
    };
    CHECK(broken([](ExperimentSpec &s) { s.methods.clear(); }).count("EMPTY_METHODS"));
    CHECK(broken([](ExperimentSpec &s) { s.phi_db.clear(); }).count("EMPTY_SWEEP"));
    CHECK(broken([](ExperimentSpec &s) { s.R.clear(); }).count("EMPTY_FIELD"));
    CHECK(broken([](ExperimentSpec &s) { s.phi_db = {10.0, 5.0}; }).count("SWEEP_NOT_INCREASING"));
    CHECK(broken([](ExperimentSpec &s) { s.M = {0}; }).count("NONPOSITIVE_PORTS"));
    CHECK(broken([](ExperimentSpec &s) { s.K = {0}; }).count("NONPOSITIVE_ACTIVE_PORTS"));
    CHECK(broken([](ExperimentSpec &s) { s.K = {5}; }).count("K_EXCEEDS_M"));
    CHECK(broken([](ExperimentSpec &s) { s.K = {3}; }).count("ANALYTIC_REQUIRES_K_LT_M"));
    CHECK(broken([](ExperimentSpec &s) { s.W = {0.0}; }).count("NONPOSITIVE_APERTURE"));
    CHECK(broken([](ExperimentSpec &s) { s.R = {-1.0}; }).count("NONPOSITIVE_RATE"));
    CHECK(broken([](ExperimentSpec &s) { s.R = {1100.0}; }).count("RATE_TOO_LARGE"));
    CHECK(broken([](ExperimentSpec &s) { s.phi_db = {NAN}; }).count("NONFINITE_SNR"));
    CHECK(broken([](ExperimentSpec &s) { s.phi_db = {4000.0}; }).count("NONFINITE_SNR"));
    CHECK(broken([](ExperimentSpec &s) { s.mc.samples = 0; }).count("NONPOSITIVE_SAMPLES"));
    CHECK(broken([](ExperimentSpec &s) { s.quad.U_p = 0; }).count("INVALID_QUADRATURE"));
    CHECK(broken([](ExperimentSpec &s) { s.trunc.tail_tol = 0.0; }).count("INVALID_TRUNCATION"));

    // K = M is fine for Monte Carlo alone
    ExperimentSpec mc_only = small_spec();
    mc_only.K = {3};
    mc_only.methods = {Method::mc};
    CHECK(validate_spec(mc_only).empty());

    ExperimentSpec bad = small_spec();
    bad.methods.clear();
    CHECK_THROWS_AS(run_experiment(bad), std::invalid_argument);
}

TEST_CASE("run_experiment - row order")
{
    ExperimentSpec s = small_spec();
    s.sweep = SweepVar::M;
    const auto rows = run_experiment(s, {1, false});
    REQUIRE(rows.size() == 2 * 2 * 2 * 3);
    std::size_t i = 0;
    for (int K : s.K)
        for (double phi_db : s.phi_db)
            for (int M : s.M)
                for (Method m : s.methods)
                {
                    const auto &r = rows[i++];
                    CHECK(r.M == M);
                    CHECK(r.K == K);
                    CHECK(r.phi_db == phi_db);
                    CHECK(r.method == to_string(m));
                    CHECK(r.sweep_var == "M");
                    CHECK(r.sweep_value == M);
                    CHECK(r.status == "ok");
                    CHECK(r.wall_ms == 0.0);
                }
}

TEST_CASE("run_experiment - columns")
{
    ExperimentSpec s;
    s.phi_db = {10.0};
    s.methods = {Method::mc, Method::gc, Method::lb, Method::asy};
    s.mc.samples = 50'000;
    s.quad.U_p = s.quad.U_l = 200;
    const auto rows = run_experiment(s);
    REQUIRE(rows.size() == 4);
    const auto &mc = rows[0], &gc = rows[1], &lb = rows[2], &asy = rows[3];
    CHECK(mc.samples == 50'000);
    CHECK(mc.ci_low <= mc.value);
    CHECK(mc.value <= mc.ci_high);
    CHECK(gc.diag_nodes == 200.0 * 200.0);
    CHECK(gc.diag_tail <= s.trunc.tail_tol);
    CHECK(std::abs(gc.value - mc.value) < 0.02);
    CHECK(lb.value <= gc.value);
    CHECK(lb.diag_tail >= 1.0);
    CHECK_THAT(asy.diag_tail, WithinRel(std::log10(asy.value), 1e-12));
    for (const auto &r : rows)
        CHECK(r.wall_ms >= 0.0);
}

TEST_CASE("run_experiment - failures stay in their rows")
{
    ExperimentSpec s;
    s.M = {3};
    s.K = {1};
    s.phi_db = {0.0, 10.0};
    s.methods = {Method::lb, Method::gc};
    // The outer cutoff pushes the series order past its hard cap
    s.quad.U_p = s.quad.U_l = 10;
    s.quad.H = 1e7;
    const auto rows = run_experiment(s, {1, false});
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].status == "ok");
    CHECK(rows[1].status == "TRUNCATION_FAILURE");
    CHECK(rows[1].value == 0.0);
    CHECK(rows[1].phi_db == 0.0);
    CHECK(rows[2].status == "ok");
}

TEST_CASE("CSV round trip")
{
    ExperimentSpec s = small_spec();
    s.methods.push_back(Method::gc);
    s.quad.U_p = s.quad.U_l = 100;
    const auto rows = run_experiment(s);

    std::ostringstream out;
    write_csv(out, rows, "2026-01-01T00:00:00Z");
    const std::string text = out.str();
    CHECK(text.rfind("# generated 2026-01-01T00:00:00Z\n", 0) == 0);
    CHECK(text.find(std::string(csv_header) + "\n") != std::string::npos);

    std::istringstream in(text);
    const auto back = read_csv(in);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        CHECK(back[i] == rows[i]);

    std::istringstream bad("a,b,c\n");
    CHECK_THROWS_AS(read_csv(bad), std::invalid_argument);
}

TEST_CASE("JSON output")
{
    ExperimentSpec s = small_spec();
    const auto rows = run_experiment(s, {1, false});
    std::ostringstream out;
    write_json(out, rows, "2026-01-01T00:00:00Z");
    const auto doc = nlohmann::json::parse(out.str());
    CHECK(doc.at("generated") == "2026-01-01T00:00:00Z");
    REQUIRE(doc.at("rows").size() == rows.size());
    CHECK(doc["rows"][0].at("method") == rows[0].method);
    CHECK(doc["rows"][0].at("value").get<double>() == rows[0].value);

    std::ostringstream bare;
    write_json(bare, rows, std::nullopt);
    CHECK_FALSE(nlohmann::json::parse(bare.str()).contains("generated"));
}

TEST_CASE("spec_from_json")
{
    const auto j = nlohmann::json::parse(R"({
        "description": "ignored",
        "scenario": {"M": 6, "K": [1, 2, 3], "W": 0.5, "R": [2, 5], "phi_db": 15},
        "sweep": "K",
        "methods": ["mc", "lb"],
        "mc": {"samples": 1000, "seed": 7, "chunk_size": 100},
        "truncation": {"n_max": 20, "tail_tol": 1e-10},
        "quadrature": {"H": 50.0, "U_p": 300, "U_l": 200},
        "output": {"path": "out.json", "format": "json"}
    })");
    const ExperimentSpec s = spec_from_json(j);
    CHECK(s.M == std::vector<int>{6});
    CHECK(s.K == std::vector<int>{1, 2, 3});
    CHECK(s.W == std::vector<double>{0.5});
    CHECK(s.R == std::vector<double>{2.0, 5.0});
    CHECK(s.phi_db == std::vector<double>{15.0});
    CHECK(s.sweep == SweepVar::K);
    CHECK(s.methods == std::vector<Method>{Method::mc, Method::lb});
    CHECK(s.mc.samples == 1000);
    CHECK(s.mc.seed == 7);
    CHECK(s.mc.chunk_size == 100);
    CHECK(s.trunc.n_max == 20);
    CHECK(s.trunc.tail_tol == 1e-10);
    CHECK(s.quad.H == 50.0);
    CHECK(s.quad.U_p == 300);
    CHECK(s.quad.U_l == 200);
    CHECK(s.output_path == "out.json");
    CHECK(s.format == OutputFormat::json);

    const ExperimentSpec again = spec_from_json(spec_to_json(s));
    CHECK(again.K == s.K);
    CHECK(again.R == s.R);
    CHECK(again.methods == s.methods);
    CHECK(again.quad.H == s.quad.H);
    CHECK(again.mc.seed == s.mc.seed);

    const ExperimentSpec defaults = spec_from_json(nlohmann::json::parse(R"({"methods": "gc"})"));
    CHECK(defaults.M == std::vector<int>{4});
    CHECK(defaults.methods == std::vector<Method>{Method::gc});
    CHECK_FALSE(defaults.quad.H.has_value());

    CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"methods": ["bogus"]})")), std::invalid_argument);
    CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"sweep": "R", "methods": ["mc"]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"scenario": {"M": "four"}, "methods": ["mc"]})")),
                    std::invalid_argument);
}

TEST_CASE("sweep variable names")
{
    for (SweepVar v : {SweepVar::phi_db, SweepVar::K, SweepVar::M, SweepVar::W})
        CHECK(parse_sweep_var(to_string(v)) == v);
    CHECK_FALSE(parse_sweep_var("R").has_value());
}

TEST_CASE("presets")
{
    for (const char *name : {"fig1-small", "fig2"})
    {
        const ExperimentSpec s = load_preset(name, default_preset_dir());
        CHECK(validate_spec(s).empty());
        CHECK_FALSE(s.methods.empty());
    }
    const ExperimentSpec fig2 = load_preset("fig2", default_preset_dir());
    CHECK(fig2.M == std::vector<int>{10, 20});
    CHECK(fig2.K == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(fig2.phi_db == std::vector<double>{10.0});
    CHECK(fig2.mc.samples == 10'000'000);
    CHECK_THROWS(load_preset("no-such-preset", default_preset_dir()));
}

TEST_CASE("output does not depend on the worker count")
{
    ExperimentSpec s = small_spec();
    s.methods = {Method::mc, Method::lb};
    const std::string one = to_csv(run_experiment(s, {1, false}));
    CHECK(to_csv(run_experiment(s, {3, false})) == one);
    CHECK(to_csv(run_experiment(s, {8, false})) == one);
}

TEST_CASE("utc_timestamp")
{
    const std::string ts = utc_timestamp();
    REQUIRE(ts.size() == 20);
    CHECK(ts[4] == '-');
    CHECK(ts[10] == 'T');
    CHECK(ts.back() == 'Z');
}
