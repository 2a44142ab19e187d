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

#ifndef FASMRC_OUTAGE_ESTIMATE_HPP
#define FASMRC_OUTAGE_ESTIMATE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace fasmrc
{

enum class Method
{
    mc,  // Monte-Carlo simulation
    gc,  // series + double Gauss-Chebyshev quadrature
    lb,  // closed-form lower bound
    asy, // high-SNR asymptote
};

std::string_view to_string(Method m);
std::optional<Method> parse_method(std::string_view name);

struct OutageEstimate
{
    double value = 0.0;
    double ci_low = 0.0;  // 95% interval for mc; equal to value otherwise
    double ci_high = 0.0;
    Method method = Method::mc;
    std::uint64_t samples_or_nodes = 0;
    std::map<std::string, double> diagnostics;

    double half_width() const { return 0.5 * (ci_high - ci_low); }
};

// Point estimate successes/trials with the normal-approximation 95% interval,
// [0, 3/N] when no success was observed.
OutageEstimate binomial_estimate(std::uint64_t successes, std::uint64_t trials);

// Returns value unchanged when it lies in [0, 1], clamps it when it is within
// 1e-9 of that range, and throws probability_out_of_range otherwise.
double checked_probability(double value, const char *what);

} // namespace fasmrc

#endif
