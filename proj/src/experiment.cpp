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

#include "fasmrc/experiment.hpp"

#include "fasmrc/bounds.hpp"
#include "fasmrc/errors.hpp"

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace fasmrc::experiment
{

using nlohmann::json;

std::string_view to_string(SweepVar v)
{
    switch (v)
    {
    case SweepVar::phi_db: return "phi_db";
    case SweepVar::K: return "K";
    case SweepVar::M: return "M";
    case SweepVar::W: return "W";
    }
    return "?";
}

std::optional<SweepVar> parse_sweep_var(std::string_view name)
{
    for (SweepVar v : {SweepVar::phi_db, SweepVar::K, SweepVar::M, SweepVar::W})
        if (to_string(v) == name)
            return v;
    return std::nullopt;
}

// ---- validation --------------------------------------------------------------------

namespace
{
bool is_analytic(Method m) { return m != Method::mc; }

template <typename T>
bool strictly_increasing(const std::vector<T> &v)
{
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i - 1] < v[i]))
            return false;
    return true;
}

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
} // namespace

std::vector<Violation> validate_spec(const ExperimentSpec &spec)
{
    std::vector<Violation> out;
    auto add = [&](std::string code, std::string message) { out.push_back({std::move(code), std::move(message)}); };

    if (spec.methods.empty())
        add("EMPTY_METHODS", "at least one method is required");

    const std::array<std::pair<SweepVar, std::size_t>, 4> sweepable{
        {{SweepVar::phi_db, spec.phi_db.size()}, {SweepVar::K, spec.K.size()}, {SweepVar::M, spec.M.size()},
         {SweepVar::W, spec.W.size()}}};
    for (auto [var, size] : sweepable)
        if (size == 0)
            add(var == spec.sweep ? "EMPTY_SWEEP" : "EMPTY_FIELD", std::string(to_string(var)) + " list is empty");
    if (spec.R.empty())
        add("EMPTY_FIELD", "R list is empty");

    bool increasing = true;
    switch (spec.sweep)
    {
    case SweepVar::phi_db: increasing = strictly_increasing(spec.phi_db); break;
    case SweepVar::K: increasing = strictly_increasing(spec.K); break;
    case SweepVar::M: increasing = strictly_increasing(spec.M); break;
    case SweepVar::W: increasing = strictly_increasing(spec.W); break;
    }
    if (!increasing)
        add("SWEEP_NOT_INCREASING", std::string(to_string(spec.sweep)) + " values must be strictly increasing");

    for (int m : spec.M)
        if (m < 1)
            add("NONPOSITIVE_PORTS", "M = " + std::to_string(m));
    for (int k : spec.K)
        if (k < 1)
            add("NONPOSITIVE_ACTIVE_PORTS", "K = " + std::to_string(k));
    const bool analytic = std::any_of(spec.methods.begin(), spec.methods.end(), is_analytic);
    for (int m : spec.M)
    {
        for (int k : spec.K)
        {
            if (m < 1 || k < 1)
                continue;
            if (k > m)
                add("K_EXCEEDS_M", "K = " + std::to_string(k) + " > M = " + std::to_string(m));
            else if (k == m && analytic)
                add("ANALYTIC_REQUIRES_K_LT_M",
                    "methods gc, lb and asy need K <= M - 1 (M = K = " + std::to_string(m) + ")");
        }
    }
    for (double w : spec.W)
        if (!(w > 0.0) || !std::isfinite(w))
            add("NONPOSITIVE_APERTURE", "W = " + num(w));
    for (double r : spec.R)
        if (!(r > 0.0) || !std::isfinite(r))
            add("NONPOSITIVE_RATE", "R = " + num(r));
        else if (!std::isfinite(std::exp2(r)))
            add("RATE_TOO_LARGE", "R = " + num(r) + " overflows the threshold 2^R - 1");
    for (double d : spec.phi_db)
    {
        const double linear = std::pow(10.0, d / 10.0);
        if (!std::isfinite(linear) || !(linear > 0.0))
            add("NONFINITE_SNR", "phi_db = " + num(d));
    }

    const bool uses_mc = std::find(spec.methods.begin(), spec.methods.end(), Method::mc) != spec.methods.end();
    if (uses_mc && (spec.mc.samples == 0 || spec.mc.chunk_size == 0))
        add("NONPOSITIVE_SAMPLES", "Monte-Carlo samples and chunk size must be positive");
    if (spec.quad.U_p == 0 || spec.quad.U_l == 0 || (spec.quad.H && !(*spec.quad.H > 0.0)))
        add("INVALID_QUADRATURE", "U_p, U_l must be >= 1 and H > 0");
    if (spec.trunc.n_max < 1 || !(spec.trunc.tail_tol > 0.0))
        add("INVALID_TRUNCATION", "n_max must be >= 1 and tail_tol > 0");
    return out;
}

// ---- running ---------------------------------------------------------------------------

namespace
{
struct Point
{
    int M;
    int K;
    double W;
    double R;
    double phi_db;
};

double sweep_value(const Point &p, SweepVar v)
{
    switch (v)
    {
    case SweepVar::phi_db: return p.phi_db;
    case SweepVar::K: return p.K;
    case SweepVar::M: return p.M;
    case SweepVar::W: return p.W;
    }
    return 0.0;
}

// Cartesian product in field order M, K, W, R, phi_db with the sweep field moved innermost.
std::vector<Point> enumerate_points(const ExperimentSpec &spec)
{
    enum Field { f_M, f_K, f_W, f_R, f_phi };
    std::vector<Field> order{f_M, f_K, f_W, f_R, f_phi};
    const Field swept = spec.sweep == SweepVar::M ? f_M
                        : spec.sweep == SweepVar::K ? f_K
                        : spec.sweep == SweepVar::W ? f_W
                                                    : f_phi;
    std::erase(order, swept);
    order.push_back(swept);

    const std::array<std::size_t, 5> sizes{spec.M.size(), spec.K.size(), spec.W.size(), spec.R.size(),
                                           spec.phi_db.size()};
    std::array<std::size_t, 5> idx{};
    std::vector<Point> points;
    for (std::size_t s : sizes)
        if (s == 0)
            return points;
    while (true)
    {
        points.push_back({spec.M[idx[f_M]], spec.K[idx[f_K]], spec.W[idx[f_W]], spec.R[idx[f_R]],
                          spec.phi_db[idx[f_phi]]});
        int level = static_cast<int>(order.size()) - 1;
        while (level >= 0)
        {
            const Field f = order[static_cast<std::size_t>(level)];
            if (++idx[f] < sizes[f])
                break;
            idx[f] = 0;
            --level;
        }
        if (level < 0)
            return points;
    }
}

SystemConfig to_config(const Point &p)
{
    return {p.M, p.K, p.W, p.R, std::pow(10.0, p.phi_db / 10.0)};
}

void fill_estimate(ResultRow &row, const OutageEstimate &e)
{
    row.value = e.value;
    row.ci_low = e.ci_low;
    row.ci_high = e.ci_high;
    auto diag = [&](const char *key) {
        auto it = e.diagnostics.find(key);
        return it == e.diagnostics.end() ? 0.0 : it->second;
    };
    switch (e.method)
    {
    case Method::mc:
        row.samples = e.samples_or_nodes;
        break;
    case Method::gc:
        row.diag_tail = diag("max_tail");
        row.diag_nodes = static_cast<double>(e.samples_or_nodes);
        break;
    case Method::lb:
        row.diag_tail = diag("cancellation");
        row.diag_nodes = static_cast<double>(e.samples_or_nodes);
        break;
    case Method::asy:
        row.diag_tail = diag("log10_value");
        break;
    }
}

// Runs fn; on failure clears the numbers and records the error code as status.
void guarded(std::vector<ResultRow *> rows, const std::function<void()> &fn)
{
    std::string status;
    try
    {
        fn();
        return;
    }
    catch (const fasmrc_error &e)
    {
        status = e.code();
    }
    catch (const std::invalid_argument &)
    {
        status = "INVALID_ARGUMENT";
    }
    catch (const std::exception &)
    {
        status = "ERROR";
    }
    for (ResultRow *r : rows)
    {
        r->value = r->ci_low = r->ci_high = r->diag_tail = r->diag_nodes = 0.0;
        r->samples = 0;
        r->status = status;
    }
}
} // namespace

std::vector<ResultRow> run_experiment(const ExperimentSpec &spec, const RunOptions &options)
{
    if (const auto violations = validate_spec(spec); !violations.empty())
        throw std::invalid_argument("run_experiment: invalid experiment (" + violations.front().code + ")");

    const std::vector<Point> points = enumerate_points(spec);
    const std::size_t n_methods = spec.methods.size();
    std::vector<ResultRow> rows(points.size() * n_methods);
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        for (std::size_t j = 0; j < n_methods; ++j)
        {
            ResultRow &r = rows[i * n_methods + j];
            const Point &p = points[i];
            r.sweep_var = std::string(to_string(spec.sweep));
            r.sweep_value = sweep_value(p, spec.sweep);
            r.M = p.M;
            r.K = p.K;
            r.W = p.W;
            r.R = p.R;
            r.phi_db = p.phi_db;
            r.method = std::string(to_string(spec.methods[j]));
        }
    }

    using clock = std::chrono::steady_clock;
    auto elapsed_ms = [&](clock::time_point t0) {
        return options.record_wall_time ? std::chrono::duration<double, std::milli>(clock::now() - t0).count() : 0.0;
    };

    std::vector<std::function<void(unsigned)>> tasks;

    // Monte-Carlo rows sharing (M, W, R, phi_db) reuse one set of channel draws.
    std::map<std::tuple<int, double, double, double>, std::vector<std::size_t>> mc_groups;
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        for (std::size_t j = 0; j < n_methods; ++j)
        {
            const std::size_t row = i * n_methods + j;
            const Point &p = points[i];
            if (spec.methods[j] == Method::mc)
            {
                mc_groups[{p.M, p.W, p.R, p.phi_db}].push_back(row);
                continue;
            }
            tasks.push_back([&, row, p, method = spec.methods[j]](unsigned) {
                ResultRow &r = rows[row];
                const auto t0 = clock::now();
                guarded({&r}, [&] {
                    const SystemConfig cfg = to_config(p);
                    switch (method)
                    {
                    case Method::gc: fill_estimate(r, analytic::outage_gc(cfg, spec.trunc, spec.quad)); break;
                    case Method::lb: fill_estimate(r, bounds::outage_lower_bound(cfg)); break;
                    case Method::asy: fill_estimate(r, bounds::outage_asymptotic(cfg)); break;
                    case Method::mc: break;
                    }
                });
                r.wall_ms = elapsed_ms(t0);
            });
        }
    }
    for (auto &[key, row_ids] : mc_groups)
    {
        tasks.push_back([&, ids = row_ids](unsigned threads) {
            std::vector<ResultRow *> group;
            std::vector<int> ks;
            for (std::size_t id : ids)
            {
                group.push_back(&rows[id]);
                ks.push_back(rows[id].K);
            }
            const ResultRow &first = rows[ids.front()];
            const Point p{first.M, first.K, first.W, first.R, first.phi_db};
            const auto t0 = clock::now();
            guarded(group, [&] {
                const auto estimates = mc::estimate_outage_curve(to_config(p), ks, spec.mc, threads);
                for (std::size_t i = 0; i < group.size(); ++i)
                    fill_estimate(*group[i], estimates[i]);
            });
            const double ms = elapsed_ms(t0);
            for (ResultRow *r : group)
                r->wall_ms = ms;
        });
    }

    const unsigned jobs = std::max(1u, options.jobs);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(jobs, tasks.size()));
    const unsigned inner_threads = std::max(1u, jobs / std::max(1u, workers));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < tasks.size(); t = next++)
            tasks[t](inner_threads);
    };
    if (workers <= 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }
    return rows;
}

// ---- config files ------------------------------------------------------------------------

namespace
{
template <typename T>
std::vector<T> list_or_scalar(const json &j, const char *key, std::vector<T> fallback)
{
    if (!j.contains(key))
        return fallback;
    const json &v = j.at(key);
    try
    {
        if (v.is_array())
            return v.get<std::vector<T>>();
        return {v.get<T>()};
    }
    catch (const json::exception &e)
    {
        throw std::invalid_argument(std::string("config field '") + key + "': " + e.what());
    }
}

template <typename T>
T value_or(const json &j, const char *key, T fallback)
{
    if (!j.contains(key) || j.at(key).is_null())
        return fallback;
    try
    {
        return j.at(key).get<T>();
    }
    catch (const json::exception &e)
    {
        throw std::invalid_argument(std::string("config field '") + key + "': " + e.what());
    }
}
} // namespace

ExperimentSpec spec_from_json(const json &config)
{
    if (!config.is_object())
        throw std::invalid_argument("config must be a JSON object");
    ExperimentSpec spec;
    const json scenario = config.value("scenario", json::object());
    spec.M = list_or_scalar<int>(scenario, "M", spec.M);
    spec.K = list_or_scalar<int>(scenario, "K", spec.K);
    spec.W = list_or_scalar<double>(scenario, "W", spec.W);
    spec.R = list_or_scalar<double>(scenario, "R", spec.R);
    spec.phi_db = list_or_scalar<double>(scenario, "phi_db", spec.phi_db);

    const std::string sweep = value_or<std::string>(config, "sweep", "phi_db");
    const auto sv = parse_sweep_var(sweep);
    if (!sv)
        throw std::invalid_argument("unknown sweep variable '" + sweep + "'");
    spec.sweep = *sv;

    for (const std::string &name : list_or_scalar<std::string>(config, "methods", {}))
    {
        const auto m = parse_method(name);
        if (!m)
            throw std::invalid_argument("unknown method '" + name + "'");
        spec.methods.push_back(*m);
    }

    const json mc = config.value("mc", json::object());
    spec.mc.samples = value_or<std::uint64_t>(mc, "samples", spec.mc.samples);
    spec.mc.seed = value_or<std::uint64_t>(mc, "seed", spec.mc.seed);
    spec.mc.chunk_size = value_or<std::uint64_t>(mc, "chunk_size", spec.mc.chunk_size);

    const json trunc = config.value("truncation", json::object());
    spec.trunc.n_max = value_or<int>(trunc, "n_max", spec.trunc.n_max);
    spec.trunc.tail_tol = value_or<double>(trunc, "tail_tol", spec.trunc.tail_tol);

    const json quad = config.value("quadrature", json::object());
    if (quad.contains("H") && !quad.at("H").is_null())
        spec.quad.H = value_or<double>(quad, "H", 0.0);
    spec.quad.U_p = value_or<unsigned>(quad, "U_p", spec.quad.U_p);
    spec.quad.U_l = value_or<unsigned>(quad, "U_l", spec.quad.U_l);

    const json output = config.value("output", json::object());
    spec.output_path = value_or<std::string>(output, "path", "");
    const std::string format = value_or<std::string>(output, "format", "csv");
    if (format == "csv")
        spec.format = OutputFormat::csv;
    else if (format == "json")
        spec.format = OutputFormat::json;
    else
        throw std::invalid_argument("unknown output format '" + format + "'");
    return spec;
}

json spec_to_json(const ExperimentSpec &spec)
{
    json methods = json::array();
    for (Method m : spec.methods)
        methods.push_back(std::string(to_string(m)));
    json quad{{"U_p", spec.quad.U_p}, {"U_l", spec.quad.U_l}};
    quad["H"] = spec.quad.H ? json(*spec.quad.H) : json(nullptr);
    return {
        {"scenario", {{"M", spec.M}, {"K", spec.K}, {"W", spec.W}, {"R", spec.R}, {"phi_db", spec.phi_db}}},
        {"sweep", std::string(to_string(spec.sweep))},
        {"methods", methods},
        {"mc", {{"samples", spec.mc.samples}, {"seed", spec.mc.seed}, {"chunk_size", spec.mc.chunk_size}}},
        {"truncation", {{"n_max", spec.trunc.n_max}, {"tail_tol", spec.trunc.tail_tol}}},
        {"quadrature", quad},
        {"output", {{"path", spec.output_path}, {"format", spec.format == OutputFormat::csv ? "csv" : "json"}}},
    };
}

ExperimentSpec load_spec(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config " + path.string());
    json config;
    try
    {
        config = json::parse(in, nullptr, true, true);
    }
    catch (const json::parse_error &e)
    {
        throw std::invalid_argument("config " + path.string() + ": " + e.what());
    }
    return spec_from_json(config);
}

std::filesystem::path default_preset_dir()
{
    if (const char *env = std::getenv("FASMRC_PRESET_DIR"))
        return env;
#ifdef FASMRC_PRESET_DIR
    return FASMRC_PRESET_DIR;
#else
    return "presets";
#endif
}

ExperimentSpec load_preset(std::string_view name, const std::filesystem::path &preset_dir)
{
    const auto path = preset_dir / (std::string(name) + ".json");
    if (!std::filesystem::exists(path))
        throw std::invalid_argument("unknown preset '" + std::string(name) + "' (looked in " + preset_dir.string() + ")");
    return load_spec(path);
}

// ---- output ---------------------------------------------------------------------------------

void write_csv(std::ostream &out, const std::vector<ResultRow> &rows, const std::optional<std::string> &timestamp)
{
    if (timestamp)
        out << "# generated " << *timestamp << '\n';
    out << csv_header << '\n';
    for (const ResultRow &r : rows)
    {
        out << r.sweep_var << ',' << num(r.sweep_value) << ',' << r.M << ',' << r.K << ',' << num(r.W) << ','
            << num(r.R) << ',' << num(r.phi_db) << ',' << r.method << ',' << num(r.value) << ',' << num(r.ci_low)
            << ',' << num(r.ci_high) << ',' << num(r.diag_tail) << ',' << num(r.diag_nodes) << ',' << r.samples
            << ',' << r.status << ',' << num(r.wall_ms) << '\n';
    }
}

void write_json(std::ostream &out, const std::vector<ResultRow> &rows, const std::optional<std::string> &timestamp)
{
    json doc = json::object();
    if (timestamp)
        doc["generated"] = *timestamp;
    json arr = json::array();
    for (const ResultRow &r : rows)
    {
        arr.push_back({{"sweep_var", r.sweep_var}, {"sweep_value", r.sweep_value}, {"M", r.M}, {"K", r.K},
                       {"W", r.W}, {"R", r.R}, {"phi_db", r.phi_db}, {"method", r.method}, {"value", r.value},
                       {"ci_low", r.ci_low}, {"ci_high", r.ci_high}, {"diag_tail", r.diag_tail},
                       {"diag_nodes", r.diag_nodes}, {"samples", r.samples}, {"status", r.status},
                       {"wall_ms", r.wall_ms}});
    }
    doc["rows"] = std::move(arr);
    out << doc.dump(2) << '\n';
}

std::vector<ResultRow> read_csv(std::istream &in)
{
    std::vector<ResultRow> rows;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line))
    {
        if (line.empty() || line.front() == '#')
            continue;
        if (!header_seen)
        {
            if (line != csv_header)
                throw std::invalid_argument("read_csv: unexpected header '" + line + "'");
            header_seen = true;
            continue;
        }
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');)
            f.push_back(cell);
        if (f.size() != 16)
            throw std::invalid_argument("read_csv: expected 16 fields, got " + std::to_string(f.size()));
        auto real = [](const std::string &s) { return std::strtod(s.c_str(), nullptr); };
        ResultRow r;
        r.sweep_var = f[0];
        r.sweep_value = real(f[1]);
        r.M = std::stoi(f[2]);
        r.K = std::stoi(f[3]);
        r.W = real(f[4]);
        r.R = real(f[5]);
        r.phi_db = real(f[6]);
        r.method = f[7];
        r.value = real(f[8]);
        r.ci_low = real(f[9]);
        r.ci_high = real(f[10]);
        r.diag_tail = real(f[11]);
        r.diag_nodes = real(f[12]);
        r.samples = std::stoull(f[13]);
        r.status = f[14];
        r.wall_ms = real(f[15]);
        rows.push_back(std::move(r));
    }
    if (!header_seen)
        throw std::invalid_argument("read_csv: missing header");
    return rows;
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace fasmrc::experiment
