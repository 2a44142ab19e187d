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

#include "fasmrc/channel.hpp"

#include "fasmrc/errors.hpp"
#include "fasmrc/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fasmrc
{

void SystemConfig::validate() const
{
    if (M < 1)
        throw std::invalid_argument("M must be >= 1");
    if (K < 1 || K > M)
        throw std::invalid_argument("K must satisfy 1 <= K <= M");
    if (!(W > 0.0) || !std::isfinite(W))
        throw std::invalid_argument("aperture W must be positive and finite");
    if (!(R > 0.0) || !std::isfinite(std::exp2(R)))
        throw std::invalid_argument("rate R must be positive with 2^R finite");
    if (!(phi > 0.0) || !std::isfinite(phi))
        throw std::invalid_argument("average SNR phi must be positive and finite");
}

double correlation_mu(double W)
{
    if (!(W > 0.0))
        throw std::invalid_argument("correlation_mu: W must be positive");

    const double x = 2.0 * std::numbers::pi * W;
    const double j1_over_x = x < 1e-4 ? 0.5 - x * x / 16.0 : specfun::bessel_j1(x) / x;
    double radicand = specfun::hyp1f2_half(W) - j1_over_x;
    if (radicand < 0.0)
    {
        if (radicand < -1e-12)
            throw numerical_instability("correlation_mu: negative radicand " + std::to_string(radicand) +
                                        " at W = " + std::to_string(W));
        radicand = 0.0;
    }
    return std::min(1.0, std::sqrt(2.0 * radicand));
}

DerivedParams derive_params(const SystemConfig &cfg)
{
    cfg.validate();
    DerivedParams p;
    p.mu = correlation_mu(cfg.W);
    p.omega = p.mu < 1.0 ? 1.0 / (cfg.phi * (1.0 - p.mu)) : std::numeric_limits<double>::infinity();
    p.z = std::exp2(cfg.R) - 1.0;
    p.T = cfg.M - cfg.K - 1;
    p.phi = cfg.phi;
    return p;
}

double ref_snr_pdf(double x, double phi)
{
    if (x < 0.0)
        return 0.0;
    return std::exp(-x / phi) / phi;
}

namespace
{
void require_nondegenerate(const DerivedParams &p)
{
    if (!(p.mu < 1.0))
        throw degenerate_correlation("conditional port law is a point mass at mu = 1");
}
} // namespace

double log_port_pdf_conditional(double x, double x0, const DerivedParams &p)
{
    require_nondegenerate(p);
    if (x < 0.0)
        return -std::numeric_limits<double>::infinity();
    const double arg = 2.0 * p.omega * std::sqrt(p.mu * x0 * x);
    return std::log(p.omega) - p.omega * (x + p.mu * x0) + specfun::log_bessel_i0(arg);
}

double port_pdf_conditional(double x, double x0, const DerivedParams &p)
{
    return std::exp(log_port_pdf_conditional(x, x0, p));
}

double port_cdf_conditional(double v, double x0, const DerivedParams &p)
{
    require_nondegenerate(p);
    if (v <= 0.0)
        return 0.0;
    return specfun::marcum_q1_complement(std::sqrt(2.0 * p.omega * p.mu * x0), std::sqrt(2.0 * p.omega * v));
}

} // namespace fasmrc
