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

#include "fasmrc/bounds.hpp"

#include "fasmrc/errors.hpp"
#include "fasmrc/specfun.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fasmrc::bounds
{

namespace
{
// The alternating sums cancel down to roughly (z omega)^M against terms of order
// one, so the lower bound is evaluated with 100 significant digits.
using Real = boost::multiprecision::cpp_bin_float_100;

struct Setup
{
    DerivedParams p;
    double a = 0.0; // z omega
};

Setup setup(const SystemConfig &cfg)
{
    cfg.validate();
    Setup s{derive_params(cfg)};
    if (cfg.K >= cfg.M)
        throw unsupported_configuration("bounds require K <= M - 1");
    if (!(s.p.mu < 1.0))
        throw unsupported_configuration("bounds require mu < 1");
    s.a = s.p.z * s.p.omega;
    return s;
}

Real factorial(int n)
{
    Real f = 1;
    for (int i = 2; i <= n; ++i)
        f *= i;
    return f;
}

Real binom(int n, int k)
{
    Real c = 1;
    for (int i = 1; i <= k; ++i)
        c = c * (n - k + i) / i;
    return c;
}

// Unregularized lower incomplete gamma for integer order n >= 1.
Real lower_gamma(int n, const Real &x)
{
    if (x == 0)
        return 0;
    if (x < n + 1)
    {
        // x^n e^-x sum_j x^j / (n (n+1) ... (n+j))
        Real term = Real(1) / n, sum = term;
        const Real eps = std::numeric_limits<Real>::epsilon();
        for (int j = 1; term > eps * sum; ++j)
        {
            term *= x / (n + j);
            sum += term;
        }
        return pow(x, n) * exp(-x) * sum;
    }
    // (n-1)! (1 - e^-x sum_{j<n} x^j / j!)
    Real term = 1, sum = 1;
    for (int j = 1; j < n; ++j)
    {
        term *= x / j;
        sum += term;
    }
    return factorial(n - 1) * (1 - exp(-x) * sum);
}

struct Terms
{
    std::vector<Real> beta;
    std::vector<Real> kappa;
};

Terms bound_terms(const SystemConfig &cfg, const Setup &s)
{
    const int K = cfg.K, T = s.p.T;
    const Real a = s.a;
    Terms out;
    for (int t = 0; t <= T; ++t)
    {
        const int n = t + K + 1;
        out.beta.push_back((t % 2 == 0 ? 1 : -1) * (1 - exp(-a * n / K)) / n);
    }
    const Real decay = exp(-a);
    for (int t = 0; t <= T; ++t)
    {
        const Real upper = a * (t + 1) / K;
        for (int k = 0; k < K; ++k)
            for (int m = 0; m <= k; ++m)
            {
                const Real mag = pow(Real(K), m) * pow(a, k - m) * decay * lower_gamma(m + 1, upper) /
                                 (factorial(k) * pow(Real(t + 1), m + 1));
                out.kappa.push_back((t + m) % 2 == 0 ? mag : Real(-mag));
            }
    }
    return out;
}
} // namespace

BoundBreakdown lower_bound_breakdown(const SystemConfig &cfg)
{
    const Setup s = setup(cfg);
    const Terms terms = bound_terms(cfg, s);
    BoundBreakdown out;
    for (const Real &b : terms.beta)
        out.beta_terms.push_back(static_cast<double>(b));
    for (const Real &k : terms.kappa)
        out.kappa_terms.push_back(static_cast<double>(k));
    out.psi_factor = psi_factor(cfg.M, cfg.K, s.p.mu);
    return out;
}

double psi_factor(int M, int K, double mu)
{
    if (K < 1 || K >= M)
        throw unsupported_configuration("psi_factor requires 1 <= K <= M - 1");
    const int T = M - K - 1;
    // sum_k binom(K,k) (-1)^k / (k+T+1) = B(T+1, K+1) = T! K! / M!
    const double log_sum = specfun::log_factorial(static_cast<unsigned>(T)) +
                           specfun::log_factorial(static_cast<unsigned>(K)) -
                           specfun::log_factorial(static_cast<unsigned>(M));
    const double log_prefactor = specfun::binomial(static_cast<unsigned>(M), static_cast<unsigned>(K)).log_magnitude +
                                 std::log(T + 1.0) + std::log1p(-mu) -
                                 specfun::log_factorial(static_cast<unsigned>(K)) - std::log(M * mu + 1.0 - mu) -
                                 (T + 1) * std::log(static_cast<double>(K));
    return std::exp(log_prefactor + log_sum);
}

OutageEstimate outage_lower_bound(const SystemConfig &cfg)
{
    const Setup s = setup(cfg);
    const Terms b = bound_terms(cfg, s);
    const int K = cfg.K, T = s.p.T;

    Real bracket = 0;
    Real max_term = 0;
    auto add = [&](const Real &x) {
        bracket += x;
        max_term = std::max(max_term, Real(abs(x)));
    };
    for (int t = 0; t <= T; ++t)
        add(binom(T, t) * b.beta[static_cast<std::size_t>(t)]);
    std::size_t idx = 0;
    for (int t = 0; t <= T; ++t)
        for (int k = 0; k < K; ++k)
            for (int m = 0; m <= k; ++m)
                add(-binom(T, t) * binom(k, m) * b.kappa[idx++]);

    // M mu omega phi + 1 = (M mu + 1 - mu) / (1 - mu)
    const Real prefactor =
        binom(cfg.M, K) * (T + 1) * (1 - Real(s.p.mu)) / (cfg.M * Real(s.p.mu) + 1 - Real(s.p.mu));

    OutageEstimate e;
    e.method = Method::lb;
    e.value = checked_probability(static_cast<double>(prefactor * bracket), "outage_lower_bound");
    e.ci_low = e.ci_high = e.value;
    e.samples_or_nodes = b.beta.size() + b.kappa.size();
    e.diagnostics["max_term"] = static_cast<double>(max_term * prefactor);
    e.diagnostics["cancellation"] =
        bracket != 0 ? static_cast<double>(max_term / abs(bracket)) : std::numeric_limits<double>::infinity();
    return e;
}

OutageEstimate outage_asymptotic(const SystemConfig &cfg)
{
    const Setup s = setup(cfg);
    const double psi = psi_factor(cfg.M, cfg.K, s.p.mu);
    const double log10_value = std::log10(psi) + cfg.M * std::log10(s.a);
    OutageEstimate e;
    e.method = Method::asy;
    e.value = std::pow(10.0, log10_value);
    e.ci_low = e.ci_high = e.value;
    e.diagnostics["log10_value"] = log10_value;
    e.diagnostics["psi"] = psi;
    return e;
}

double diversity_order(const SystemConfig &cfg, double phi_lo, double phi_hi, Method method,
                       const analytic::SeriesTruncation &trunc, const analytic::QuadratureConfig &quad)
{
    if (!(phi_lo > 0.0 && phi_hi > phi_lo))
        throw std::invalid_argument("diversity_order: requires phi_hi > phi_lo > 0");

    auto log10_outage = [&](double phi) {
        SystemConfig c = cfg;
        c.phi = phi;
        switch (method)
        {
        case Method::asy: return outage_asymptotic(c).diagnostics.at("log10_value");
        case Method::lb: return std::log10(outage_lower_bound(c).value);
        case Method::gc: return std::log10(analytic::outage_gc(c, trunc, quad).value);
        case Method::mc: break;
        }
        throw std::invalid_argument("diversity_order: method must be gc, lb or asy");
    };
    return -(log10_outage(phi_hi) - log10_outage(phi_lo)) / (std::log10(phi_hi) - std::log10(phi_lo));
}

} // namespace fasmrc::bounds
