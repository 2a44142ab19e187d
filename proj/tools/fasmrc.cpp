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

// Command line front end: runs experiment configs and shipped presets.

#include "fasmrc/channel.hpp"
#include "fasmrc/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
namespace ex = fasmrc::experiment;

namespace
{

struct Overrides
{
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<std::string> format;
    std::optional<std::string> output;
    std::optional<std::string> sweep;
    std::vector<int> M;
    std::vector<int> K;
    std::vector<double> W;
    std::vector<double> R;
    std::vector<double> phi_db;
    std::vector<std::string> methods;
    std::optional<unsigned> U_p;
    std::optional<unsigned> U_l;
    unsigned jobs = 1;
    bool no_timestamp = false;
};

void add_run_flags(CLI::App *cmd, Overrides &o)
{
    cmd->add_option("--seed", o.seed, "Monte-Carlo seed");
    cmd->add_option("--samples", o.samples, "Monte-Carlo sample count");
    cmd->add_option("--jobs,-j", o.jobs, "Concurrent sweep points")->check(CLI::PositiveNumber);
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--output,-o", o.output, "Output file (default: config value, else standard output)");
    cmd->add_flag("--no-timestamp", o.no_timestamp, "Omit the timestamp line and wall times");
    cmd->add_option("--sweep", o.sweep, "Sweep variable")->check(CLI::IsMember({"phi_db", "K", "M", "W"}));
    cmd->add_option("--M", o.M, "Port counts");
    cmd->add_option("--K", o.K, "Active port counts");
    cmd->add_option("--W", o.W, "Apertures in wavelengths");
    cmd->add_option("--R", o.R, "Rates in bit/s/Hz");
    cmd->add_option("--phi-db", o.phi_db, "Average SNRs in dB");
    cmd->add_option("--methods", o.methods, "Subset of mc, gc, lb, asy");
    cmd->add_option("--U-p", o.U_p, "Outer quadrature nodes");
    cmd->add_option("--U-l", o.U_l, "Inner quadrature nodes");
}

void apply(const Overrides &o, ex::ExperimentSpec &spec)
{
    if (o.seed)
        spec.mc.seed = *o.seed;
    if (o.samples)
        spec.mc.samples = *o.samples;
    if (o.format)
        spec.format = *o.format == "json" ? ex::OutputFormat::json : ex::OutputFormat::csv;
    if (o.output)
        spec.output_path = *o.output;
    if (o.sweep)
        spec.sweep = *ex::parse_sweep_var(*o.sweep);
    if (!o.M.empty())
        spec.M = o.M;
    if (!o.K.empty())
        spec.K = o.K;
    if (!o.W.empty())
        spec.W = o.W;
    if (!o.R.empty())
        spec.R = o.R;
    if (!o.phi_db.empty())
        spec.phi_db = o.phi_db;
    if (!o.methods.empty())
    {
        spec.methods.clear();
        for (const auto &name : o.methods)
        {
            const auto m = fasmrc::parse_method(name);
            if (!m)
                throw std::invalid_argument("unknown method '" + name + "'");
            spec.methods.push_back(*m);
        }
    }
    if (o.U_p)
        spec.quad.U_p = *o.U_p;
    if (o.U_l)
        spec.quad.U_l = *o.U_l;
}

int report_violations(const std::vector<ex::Violation> &violations)
{
    for (const auto &v : violations)
        std::cerr << v.code << ": " << v.message << '\n';
    return violations.empty() ? 0 : 1;
}

// Relative output paths and the default file land in FASMRC_OUTPUT_DIR when it is set.
std::optional<fs::path> resolve_output(const ex::ExperimentSpec &spec, const std::string &stem)
{
    const char *dir = std::getenv("FASMRC_OUTPUT_DIR");
    const char *ext = spec.format == ex::OutputFormat::json ? ".json" : ".csv";
    if (spec.output_path.empty())
    {
        if (!dir || !*dir)
            return std::nullopt;
        return fs::path(dir) / (stem + ext);
    }
    fs::path p(spec.output_path);
    if (p.is_relative() && dir && *dir)
        p = fs::path(dir) / p;
    return p;
}

int execute(ex::ExperimentSpec spec, const Overrides &o, const std::string &stem)
{
    apply(o, spec);
    if (report_violations(ex::validate_spec(spec)) != 0)
        return 1;

    const auto rows = ex::run_experiment(spec, {o.jobs, !o.no_timestamp});
    const std::optional<std::string> stamp = o.no_timestamp ? std::nullopt : std::optional(ex::utc_timestamp());

    auto emit = [&](std::ostream &out) {
        if (spec.format == ex::OutputFormat::json)
            ex::write_json(out, rows, stamp);
        else
            ex::write_csv(out, rows, stamp);
    };
    if (const auto path = resolve_output(spec, stem))
    {
        if (path->has_parent_path())
            fs::create_directories(path->parent_path());
        std::ofstream out(*path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + path->string());
        emit(out);
        std::cerr << "wrote " << rows.size() << " rows to " << path->string() << '\n';
    }
    else
        emit(std::cout);

    std::size_t failed = 0;
    for (const auto &r : rows)
        if (r.status != "ok")
            ++failed;
    if (failed)
        std::cerr << failed << " of " << rows.size() << " rows failed\n";
    return failed ? 2 : 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Outage probability of fluid antenna systems with K-port MRC"};
    app.require_subcommand(1);

    Overrides run_o, preset_o;
    std::string run_config, validate_config, preset_name;
    std::string preset_dir = ex::default_preset_dir().string();
    double aperture = 0.0;

    auto *run = app.add_subcommand("run", "Run an experiment config");
    run->add_option("config", run_config, "JSON config file")->required()->check(CLI::ExistingFile);
    add_run_flags(run, run_o);

    auto *preset = app.add_subcommand("preset", "Run a shipped preset (fig1-small, fig2)");
    preset->add_option("name", preset_name, "Preset name")->required();
    preset->add_option("--preset-dir", preset_dir, "Directory holding preset configs");
    add_run_flags(preset, preset_o);

    auto *validate = app.add_subcommand("validate", "Check a config without running it");
    validate->add_option("config", validate_config, "JSON config file")->required()->check(CLI::ExistingFile);

    auto *mu = app.add_subcommand("mu", "Print the correlation factor for an aperture");
    mu->add_option("--aperture,-W", aperture, "Aperture in wavelengths")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        // --help and --version are successes; every usage error exits with 1
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try
    {
        if (*run)
            return execute(ex::load_spec(run_config), run_o, fs::path(run_config).stem().string());
        if (*preset)
            return execute(ex::load_preset(preset_name, preset_dir), preset_o, preset_name);
        if (*validate)
        {
            const int rc = report_violations(ex::validate_spec(ex::load_spec(validate_config)));
            if (rc == 0)
                std::cout << "ok\n";
            return rc;
        }
        if (*mu)
        {
            std::printf("%.17g\n", fasmrc::correlation_mu(aperture));
            return 0;
        }
    }
    catch (const std::invalid_argument &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
