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

#ifndef FASMRC_ERRORS_HPP
#define FASMRC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fasmrc
{

// Base class for every numerical failure raised by the library. Precondition
// violations on plain arguments (k > n, K > M, ...) use std::invalid_argument.
class fasmrc_error : public std::runtime_error
{
public:
    explicit fasmrc_error(const std::string &what) : std::runtime_error(what) {}

    // Stable machine-readable identifier, used as the row status by the experiment runner.
    virtual const char *code() const noexcept { return "NUMERICAL_ERROR"; }
};

#define FASMRC_DEFINE_ERROR(Name, Code)                                      \
    class Name : public fasmrc_error                                         \
    {                                                                        \
    public:                                                                  \
        explicit Name(const std::string &what) : fasmrc_error(what) {}       \
        const char *code() const noexcept override { return Code; }          \
    };

// A special function produced a value outside its mathematical range.
FASMRC_DEFINE_ERROR(numerical_instability, "NUMERICAL_INSTABILITY")
// mu == 1: the conditional port law is a point mass.
FASMRC_DEFINE_ERROR(degenerate_correlation, "DEGENERATE_CORRELATION")
// The analytic path needs K <= M-1 and mu < 1.
FASMRC_DEFINE_ERROR(unsupported_configuration, "UNSUPPORTED_CONFIGURATION")
// Series tail bound above the requested tolerance.
FASMRC_DEFINE_ERROR(truncation_failure, "TRUNCATION_FAILURE")
// K-fold polynomial product exceeded the term cap.
FASMRC_DEFINE_ERROR(term_explosion, "TERM_EXPLOSION")
FASMRC_DEFINE_ERROR(quadrature_nonconvergence, "QUADRATURE_NONCONVERGENCE")
// Rejection sampler acceptance rate fell below the floor.
FASMRC_DEFINE_ERROR(oracle_starvation, "ORACLE_STARVATION")
// A returned probability left [-1e-9, 1 + 1e-9].
FASMRC_DEFINE_ERROR(probability_out_of_range, "PROBABILITY_OUT_OF_RANGE")

#undef FASMRC_DEFINE_ERROR

} // namespace fasmrc

#endif
