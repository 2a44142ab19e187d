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

#ifndef FASMRC_BOUNDS_HPP
#define FASMRC_BOUNDS_HPP

#include "fasmrc/analytic.hpp"
#include "fasmrc/channel.hpp"
#include "fasmrc/outage_estimate.hpp"

#include <vector>

namespace fasmrc::bounds
{

// Closed-form pieces of the lower bound. The bound replaces the conditional port
// density by its leading (central) term omega e^{-omega mu x0} e^{-omega x}.
struct BoundBreakdown
{
    // beta_t = (-1)^t / (t+K+1) (1 - e^{-z omega (t+K+1)/K}), t = 0..T
    std::vector<double> beta_terms;
    // kappa_{t,k,m} = (-1)^{t+m} K^m (z omega)^{k-m} e^{-z omega} gamma(m+1, z omega (t+1)/K) / (k! (t+1)^{m+1}),
    // flattened with t outermost, then k = 0..K-1, then m = 0..k.
    std::vector<double> kappa_terms;
    double psi_factor = 0.0;
};

BoundBreakdown lower_bound_breakdown(const SystemConfig &cfg);

// Asymptotic factor psi with P_out ~ psi (z omega)^M:
//   binom(M,K) (T+1)(1-mu) / (K! (M mu + 1 - mu) K^{T+1}) sum_k binom(K,k) (-1)^k / (k+T+1).
double psi_factor(int M, int K, double mu);

// diagnostics: "cancellation" = largest |term| / |result|, "max_term".
// Throws unsupported_configuration unless K <= M-1 and mu < 1.
OutageEstimate outage_lower_bound(const SystemConfig &cfg);

// psi (z omega)^M; diagnostics["log10_value"] survives underflow of the value.
OutageEstimate outage_asymptotic(const SystemConfig &cfg);

// -(log P(phi_hi) - log P(phi_lo)) / (log phi_hi - log phi_lo), cfg.phi ignored.
// method must be gc, lb or asy.
double diversity_order(const SystemConfig &cfg, double phi_lo, double phi_hi, Method method,
                       const analytic::SeriesTruncation &trunc = {}, const analytic::QuadratureConfig &quad = {});

} // namespace fasmrc::bounds

#endif
