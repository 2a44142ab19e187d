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

#include "fasmrc/outage_estimate.hpp"

#include "fasmrc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fasmrc
{

std::string_view to_string(Method m)
{
    switch (m)
    {
    case Method::mc: return "mc";
    case Method::gc: return "gc";
    case Method::lb: return "lb";
    case Method::asy: return "asy";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name)
{
    for (Method m : {Method::mc, Method::gc, Method::lb, Method::asy})
        if (to_string(m) == name)
            return m;
    return std::nullopt;
}

OutageEstimate binomial_estimate(std::uint64_t successes, std::uint64_t trials)
{
    OutageEstimate e;
    e.method = Method::mc;
    e.samples_or_nodes = trials;
    if (trials == 0)
        return e;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    e.value = p;
    if (successes == 0)
    {
        e.ci_low = 0.0;
        e.ci_high = std::min(1.0, 3.0 / n);
    }
    else
    {
        const double h = 1.96 * std::sqrt(p * (1.0 - p) / n);
        e.ci_low = std::max(0.0, p - h);
        e.ci_high = std::min(1.0, p + h);
    }
    e.diagnostics["std_error"] = std::sqrt(p * (1.0 - p) / n);
    return e;
}

double checked_probability(double value, const char *what)
{
    if (value >= 0.0 && value <= 1.0)
        return value;
    if (value >= -1e-9 && value <= 1.0 + 1e-9)
        return std::clamp(value, 0.0, 1.0);
    throw probability_out_of_range(std::string(what) + ": value " + std::to_string(value) + " outside [0, 1]");
}

} // namespace fasmrc
