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

#ifndef FASMRC_SPECFUN_HPP
#define FASMRC_SPECFUN_HPP

#include <span>
#include <vector>

namespace fasmrc::specfun
{

// Signed real number stored as (ln|x|, sign). Used for factorial-heavy series
// coefficients whose magnitudes leave the double range.
struct LogValue
{
    double log_magnitude = 0.0; // meaningless when sign == 0
    int sign = 0;               // -1, 0 or +1

    static LogValue zero() { return {}; }
    static LogValue one() { return {0.0, 1}; }
    static LogValue from_log(double log_magnitude, int sign = 1);
    static LogValue from_double(double x);

    double to_double() const;
    bool is_zero() const { return sign == 0; }

    LogValue operator-() const { return {log_magnitude, -sign}; }
    LogValue &operator+=(const LogValue &rhs);
    LogValue &operator-=(const LogValue &rhs) { return *this += -rhs; }
    LogValue &operator*=(const LogValue &rhs);
    LogValue &operator/=(const LogValue &rhs);

    friend LogValue operator+(LogValue lhs, const LogValue &rhs) { return lhs += rhs; }
    friend LogValue operator-(LogValue lhs, const LogValue &rhs) { return lhs -= rhs; }
    friend LogValue operator*(LogValue lhs, const LogValue &rhs) { return lhs *= rhs; }
    friend LogValue operator/(LogValue lhs, const LogValue &rhs) { return lhs /= rhs; }
};

// ln(n!)
double log_factorial(unsigned n);

// C(n, k); exact while the value fits a 53-bit mantissa, log-domain beyond.
// Throws std::invalid_argument when k > n.
LogValue binomial(unsigned n, unsigned k);

// Modified Bessel function I0 and its overflow-free forms.
double bessel_i0(double x);
double bessel_i0_scaled(double x); // exp(-x) I0(x)
double log_bessel_i0(double x);

// Bessel functions of the first kind, x >= 0. Power series (extended
// precision) below 20, Hankel asymptotic expansion above.
double bessel_j0(double x);
double bessel_j1(double x);

// 1F2(1/2; 1, 3/2; -pi^2 w^2), evaluated as the integral of J0(2 pi w t) over t in [0, 1].
double hyp1f2_half(double w);

// Lower incomplete gamma at integer order kappa >= 1:
// gamma(kappa, x) = (kappa-1)! (1 - exp(-x) sum_{m<kappa} x^m / m!).
double lower_incomplete_gamma_int(int kappa, double x);
double log_lower_incomplete_gamma_int(int kappa, double x);

// Regularized forms P = gamma/(kappa-1)!, Q = 1 - P. Both are accurate in the
// relative sense, including deep in either tail.
double log_gamma_p_int(int kappa, double x);
double log_gamma_q_int(int kappa, double x);
double gamma_p_int(int kappa, double x);
double gamma_q_int(int kappa, double x);

// ln P(kappa, x) for kappa = 1 .. kappa_max (element kappa-1).
std::vector<double> log_gamma_p_table(int kappa_max, double x);

// Pr(N > n) for N ~ Poisson(mean).
double poisson_upper_tail(int n, double mean);

// First-order Marcum Q function. The pair form returns Q1 and 1 - Q1, each
// summed from positive terms so that both stay accurate when small.
struct MarcumQ
{
    double q = 1.0;
    double complement = 0.0;
};
MarcumQ marcum_q1_pair(double a, double b);
double marcum_q1(double a, double b);
double marcum_q1_complement(double a, double b);

// Gauss-Chebyshev (first kind) nodes t_i = cos((2i-1) pi / (2U)), i = 1..U, with
// the factor sqrt(1 - t_i^2) that converts the rule to an unweighted integral.
struct ChebyshevNode
{
    double t;
    double sqrt_one_minus_t2;
};
std::vector<ChebyshevNode> chebyshev_grid(unsigned U);

// Neumaier-compensated sum after sorting by decreasing magnitude. The result does
// not depend on the order of the input.
double ordered_sum(std::span<const double> terms);

class CompensatedSum
{
public:
    void add(double x);
    double value() const { return sum_ + correction_; }

private:
    double sum_ = 0.0;
    double correction_ = 0.0;
};

} // namespace fasmrc::specfun

#endif
