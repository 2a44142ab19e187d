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

#include "fasmrc/montecarlo.hpp"

#include "fasmrc/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <boost/random/normal_distribution.hpp>

namespace fasmrc::mc
{

Rng chunk_stream(std::uint64_t seed, std::uint64_t chunk)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
    return Rng(seq);
}

namespace
{
// Boost's normal distribution is a ziggurat sampler with no cached state,
// so a fresh object per call is free.
using normal_dist = boost::random::normal_distribution<double>;

const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

std::complex<double> draw_complex(Rng &rng, normal_dist &nd)
{
    const double re = nd(rng);
    const double im = nd(rng);
    return {re * inv_sqrt2, im * inv_sqrt2};
}

std::uint64_t chunk_count(const McConfig &mc)
{
    if (mc.samples == 0 || mc.chunk_size == 0)
        throw std::invalid_argument("McConfig: samples and chunk_size must be positive");
    return (mc.samples + mc.chunk_size - 1) / mc.chunk_size;
}

std::uint64_t chunk_length(const McConfig &mc, std::uint64_t c)
{
    return std::min(mc.chunk_size, mc.samples - c * mc.chunk_size);
}

// Runs body(c) for every chunk index on up to `threads` workers.
void for_each_chunk(std::uint64_t chunks, unsigned threads, const std::function<void(std::uint64_t)> &body)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(chunks, 1024))));
    if (threads == 1)
    {
        for (std::uint64_t c = 0; c < chunks; ++c)
            body(c);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::uint64_t c = next++; c < chunks; c = next++)
                body(c);
        });
}
} // namespace

std::complex<double> complex_normal(Rng &rng)
{
    normal_dist nd;
    return draw_complex(rng, nd);
}

void sample_port_snrs(Rng &rng, const SystemConfig &cfg, const DerivedParams &p, std::span<double> out,
                      std::optional<std::complex<double>> pinned_reference)
{
    if (out.size() != static_cast<std::size_t>(cfg.M))
        throw std::invalid_argument("sample_port_snrs: output span must have M entries");
    normal_dist nd;
    const std::complex<double> g0 = pinned_reference ? *pinned_reference : draw_complex(rng, nd);
    const std::complex<double> common = std::sqrt(p.mu) * g0;
    const double spread = std::sqrt(1.0 - p.mu);
    for (double &gamma : out)
        gamma = cfg.phi * std::norm(common + spread * draw_complex(rng, nd));
}

std::vector<double> sample_port_snrs(Rng &rng, const SystemConfig &cfg, const DerivedParams &p,
                                     std::optional<std::complex<double>> pinned_reference)
{
    std::vector<double> out(static_cast<std::size_t>(cfg.M));
    sample_port_snrs(rng, cfg, p, out, pinned_reference);
    return out;
}

double sample_conditional_port_snr(Rng &rng, double x0, const DerivedParams &p)
{
    const double scale = p.mu < 1.0 ? 1.0 / std::sqrt(p.omega) : 0.0;
    return std::norm(std::sqrt(p.mu * x0) + scale * complex_normal(rng));
}

double mrc_snr(std::span<const double> snrs, int K)
{
    if (K < 1 || static_cast<std::size_t>(K) > snrs.size())
        throw std::invalid_argument("mrc_snr: K must satisfy 1 <= K <= number of ports");
    std::vector<double> work(snrs.begin(), snrs.end());
    std::nth_element(work.begin(), work.begin() + (K - 1), work.end(), std::greater<>());
    return std::accumulate(work.begin(), work.begin() + K, 0.0);
}

std::vector<OutageEstimate> estimate_outage_curve(const SystemConfig &cfg, std::span<const int> ks,
                                                  const McConfig &mc, unsigned threads)
{
    cfg.validate();
    int k_max = 0;
    for (int k : ks)
    {
        if (k < 1 || k > cfg.M)
            throw std::invalid_argument("estimate_outage_curve: K must satisfy 1 <= K <= M");
        k_max = std::max(k_max, k);
    }
    const DerivedParams p = derive_params(cfg);
    const std::uint64_t chunks = chunk_count(mc);

    // successes[c * ks.size() + i]
    std::vector<std::uint64_t> successes(chunks * ks.size(), 0);

    for_each_chunk(chunks, threads, [&](std::uint64_t c) {
        Rng rng = chunk_stream(mc.seed, c);
        std::vector<double> snr(static_cast<std::size_t>(cfg.M));
        std::vector<double> prefix(static_cast<std::size_t>(k_max));
        std::uint64_t *hits = successes.data() + c * ks.size();
        const std::uint64_t n = chunk_length(mc, c);
        for (std::uint64_t s = 0; s < n; ++s)
        {
            sample_port_snrs(rng, cfg, p, snr);
            std::partial_sort(snr.begin(), snr.begin() + k_max, snr.end(), std::greater<>());
            double acc = 0.0;
            for (int k = 0; k < k_max; ++k)
                prefix[static_cast<std::size_t>(k)] = acc += snr[static_cast<std::size_t>(k)];
            for (std::size_t i = 0; i < ks.size(); ++i)
                if (prefix[static_cast<std::size_t>(ks[i] - 1)] <= p.z)
                    ++hits[i];
        }
    });

    std::vector<OutageEstimate> out;
    out.reserve(ks.size());
    for (std::size_t i = 0; i < ks.size(); ++i)
    {
        std::uint64_t total = 0;
        for (std::uint64_t c = 0; c < chunks; ++c)
            total += successes[c * ks.size() + i];
        out.push_back(binomial_estimate(total, mc.samples));
    }
    return out;
}

OutageEstimate estimate_outage(const SystemConfig &cfg, const McConfig &mc, unsigned threads)
{
    const int k[] = {cfg.K};
    return estimate_outage_curve(cfg, k, mc, threads).front();
}

OutageEstimate estimate_psi_mc(double v, double x0, int T, const DerivedParams &p, const McConfig &mc)
{
    if (T < 0)
        throw std::invalid_argument("estimate_psi_mc: T must be >= 0");
    if (T == 0)
    {
        OutageEstimate e = binomial_estimate(mc.samples, mc.samples);
        e.value = e.ci_low = e.ci_high = 1.0;
        return e;
    }
    std::uint64_t hits = 0;
    const std::uint64_t chunks = chunk_count(mc);
    for (std::uint64_t c = 0; c < chunks; ++c)
    {
        Rng rng = chunk_stream(mc.seed, c);
        const std::uint64_t n = chunk_length(mc, c);
        for (std::uint64_t s = 0; s < n; ++s)
        {
            bool all_below = true;
            for (int t = 0; t < T; ++t)
                all_below = (sample_conditional_port_snr(rng, x0, p) <= v) && all_below;
            hits += all_below ? 1 : 0;
        }
    }
    return binomial_estimate(hits, mc.samples);
}

OutageEstimate estimate_phi_mc(double z, double v, double x0, int K, const DerivedParams &p, const McConfig &mc)
{
    if (K < 1)
        throw std::invalid_argument("estimate_phi_mc: K must be >= 1");
    if (z < K * v)
    {
        OutageEstimate e = binomial_estimate(0, mc.samples);
        e.ci_high = 0.0;
        e.diagnostics["std_error"] = 0.0;
        return e;
    }

    constexpr double min_acceptance = 1e-6;
    constexpr std::uint64_t starvation_check_after = 10'000'000;
    std::uint64_t attempts = 0, hits = 0;
    const std::uint64_t chunks = chunk_count(mc);
    for (std::uint64_t c = 0; c < chunks; ++c)
    {
        Rng rng = chunk_stream(mc.seed, c);
        const std::uint64_t n = chunk_length(mc, c);
        for (std::uint64_t s = 0; s < n; ++s)
        {
            double sum = 0.0;
            for (int k = 0; k < K; ++k)
            {
                double x;
                do
                {
                    x = sample_conditional_port_snr(rng, x0, p);
                    ++attempts;
                    if (attempts >= starvation_check_after && (attempts & 0xFFFFF) == 0)
                    {
                        const double accepted = static_cast<double>(c * mc.chunk_size + s) * K + k;
                        if (accepted / static_cast<double>(attempts) < min_acceptance)
                            throw oracle_starvation("estimate_phi_mc: acceptance rate below 1e-6");
                    }
                } while (!(x > v));
                sum += x;
            }
            hits += sum <= z ? 1 : 0;
        }
    }

    // Phi = Pr(gamma > v)^K * Pr(sum <= z | every branch > v)
    const double n = static_cast<double>(mc.samples);
    const double accept = n * K / static_cast<double>(attempts);
    const double frac = static_cast<double>(hits) / n;
    OutageEstimate e;
    e.method = Method::mc;
    e.samples_or_nodes = mc.samples;
    e.value = std::pow(accept, K) * frac;
    // delta method on log(accept^K frac); the rejection count is negative binomial
    double rel_var = K * (1.0 - accept) / n;
    rel_var += hits > 0 ? (1.0 - frac) / (n * frac) : 0.0;
    double sigma = e.value * std::sqrt(rel_var);
    if (hits == 0)
        sigma = std::pow(accept, K) / n;
    e.ci_low = std::max(0.0, e.value - 1.96 * sigma);
    e.ci_high = std::min(1.0, e.value + 1.96 * sigma);
    e.diagnostics["std_error"] = sigma;
    e.diagnostics["acceptance"] = accept;
    return e;
}

OutageEstimate estimate_lambda_mc(double x0, const SystemConfig &cfg, const DerivedParams &p, const McConfig &mc)
{
    cfg.validate();
    std::vector<double> snr(static_cast<std::size_t>(cfg.M));
    std::uint64_t hits = 0;
    const std::uint64_t chunks = chunk_count(mc);
    for (std::uint64_t c = 0; c < chunks; ++c)
    {
        Rng rng = chunk_stream(mc.seed, c);
        const std::uint64_t n = chunk_length(mc, c);
        for (std::uint64_t s = 0; s < n; ++s)
        {
            for (double &x : snr)
                x = sample_conditional_port_snr(rng, x0, p);
            hits += mrc_snr(snr, cfg.K) <= p.z ? 1 : 0;
        }
    }
    return binomial_estimate(hits, mc.samples);
}

} // namespace fasmrc::mc
