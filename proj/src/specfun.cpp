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

#include "fasmrc/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace fasmrc::specfun
{

namespace
{
constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// ln(exp(a) + exp(b))
double log_add(double a, double b)
{
    if (a == neg_inf)
        return b;
    if (b == neg_inf)
        return a;
    if (a < b)
        std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}
} // namespace

// ---- LogValue ----------------------------------------------------------------

LogValue LogValue::from_log(double log_magnitude, int sign)
{
    if (sign == 0 || log_magnitude == neg_inf)
        return zero();
    return {log_magnitude, sign > 0 ? 1 : -1};
}

LogValue LogValue::from_double(double x)
{
    if (x == 0.0)
        return zero();
    return {std::log(std::abs(x)), x > 0.0 ? 1 : -1};
}

double LogValue::to_double() const
{
    return sign == 0 ? 0.0 : sign * std::exp(log_magnitude);
}

LogValue &LogValue::operator+=(const LogValue &rhs)
{
    if (rhs.sign == 0)
        return *this;
    if (sign == 0)
        return *this = rhs;

    const bool lhs_larger = log_magnitude >= rhs.log_magnitude;
    const double hi = lhs_larger ? log_magnitude : rhs.log_magnitude;
    const double lo = lhs_larger ? rhs.log_magnitude : log_magnitude;
    const int hi_sign = lhs_larger ? sign : rhs.sign;

    if (sign == rhs.sign)
    {
        log_magnitude = hi + std::log1p(std::exp(lo - hi));
        return *this;
    }
    if (hi == lo)
        return *this = zero();
    log_magnitude = hi + std::log1p(-std::exp(lo - hi));
    sign = hi_sign;
    return *this;
}

LogValue &LogValue::operator*=(const LogValue &rhs)
{
    if (sign == 0 || rhs.sign == 0)
        return *this = zero();
    log_magnitude += rhs.log_magnitude;
    sign *= rhs.sign;
    return *this;
}

LogValue &LogValue::operator/=(const LogValue &rhs)
{
    if (rhs.sign == 0)
        throw std::domain_error("LogValue: division by zero");
    if (sign == 0)
        return *this;
    log_magnitude -= rhs.log_magnitude;
    sign *= rhs.sign;
    return *this;
}

// ---- combinatorics -------------------------------------------------------------

double log_factorial(unsigned n)
{
    if (n < 2)
        return 0.0;
    if (n <= 20)
    {
        double f = 1.0; // exact below 2^64 and representable up to 22!
        for (unsigned i = 2; i <= n; ++i)
            f *= i;
        return std::log(f);
    }
    return std::lgamma(static_cast<double>(n) + 1.0);
}

LogValue binomial(unsigned n, unsigned k)
{
    if (k > n)
        throw std::invalid_argument("binomial: k > n (" + std::to_string(k) + " > " + std::to_string(n) + ")");
    k = std::min(k, n - k);

    // Multiplicative formula stays integral at every step; stop once it leaves the exact range.
    double c = 1.0;
    unsigned i = 1;
    for (; i <= k; ++i)
    {
        const double next = c * (n - k + i) / i;
        if (next > 9007199254740992.0)
            break;
        c = next;
    }
    if (i > k)
        return LogValue::from_double(c);
    return LogValue::from_log(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

// ---- Bessel I0 -----------------------------------------------------------------

double bessel_i0_scaled(double x)
{
    x = std::abs(x);
    if (x < 30.0)
    {
        // sum (x^2/4)^k / (k!)^2, all terms positive
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 500; ++k)
        {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-17 * sum)
                break;
        }
        return sum * std::exp(-x);
    }
    // exp(-x) I0(x) ~ (2 pi x)^{-1/2} sum ((2k-1)!!)^2 / (k! (8x)^k)
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 200; ++k)
    {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * x);
        if (next > term)
            break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum)
            break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double bessel_i0(double x)
{
    x = std::abs(x);
    if (x < 30.0)
        return bessel_i0_scaled(x) * std::exp(x);
    return std::exp(x + std::log(bessel_i0_scaled(x)));
}

double log_bessel_i0(double x)
{
    x = std::abs(x);
    return x + std::log(bessel_i0_scaled(x));
}

// ---- Bessel J0, J1 ---------------------------------------------------------------

namespace
{
constexpr double bessel_switchover = 20.0;

double bessel_j_series(int order, double x)
{
    const long double half = 0.5L * x;
    const long double q = -half * half;
    long double term = order == 0 ? 1.0L : half;
    long double sum = term;
    for (int k = 1; k < 300; ++k)
    {
        term *= q / (static_cast<long double>(k) * (k + order));
        sum += term;
        if (std::abs(term) < 1e-22L)
            break;
    }
    return static_cast<double>(sum);
}

// Hankel expansion J_n(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - (n/2 + 1/4) pi.
double bessel_j_asymptotic(int order, double x)
{
    const double mu = 4.0 * order * order;
    double p = 1.0, q = 0.0;
    double term = 1.0;
    double last = std::numeric_limits<double>::infinity();
    for (int k = 1; k < 200; ++k)
    {
        term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * x);
        if (std::abs(term) > last)
            break;
        last = std::abs(term);
        // a_k / x^k enters Q for odd k and P for even k with alternating signs.
        switch (k % 4)
        {
        case 1: q += term; break;
        case 2: p -= term; break;
        case 3: q -= term; break;
        default: p += term; break;
        }
        if (last < 1e-18)
            break;
    }
    const double chi = x - (0.5 * order + 0.25) * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}
} // namespace

double bessel_j0(double x)
{
    x = std::abs(x);
    return x < bessel_switchover ? bessel_j_series(0, x) : bessel_j_asymptotic(0, x);
}

double bessel_j1(double x)
{
    const double s = x < 0.0 ? -1.0 : 1.0;
    x = std::abs(x);
    return s * (x < bessel_switchover ? bessel_j_series(1, x) : bessel_j_asymptotic(1, x));
}

// ---- 1F2 ---------------------------------------------------------------------------

double hyp1f2_half(double w)
{
    if (w < 0.0)
        throw std::invalid_argument("hyp1f2_half: negative aperture");
    if (w == 0.0)
        return 1.0;

    // J0(2 pi w t) completes w periods on [0, 1]; on a quarter period it is smooth
    // enough for a fixed 30-point Gauss-Legendre rule to reach rounding level.
    const double k = 2.0 * std::numbers::pi * w;
    const int panels = static_cast<int>(std::ceil(4.0 * w)) + 1;
    auto f = [k](double t) { return bessel_j0(k * t); };

    CompensatedSum total;
    for (int i = 0; i < panels; ++i)
    {
        const double a = static_cast<double>(i) / panels;
        const double b = static_cast<double>(i + 1) / panels;
        total.add(boost::math::quadrature::gauss<double, 30>::integrate(f, a, b));
    }
    return total.value();
}

// ---- incomplete gamma ------------------------------------------------------------------

double log_gamma_p_int(int kappa, double x)
{
    if (kappa < 1)
        throw std::invalid_argument("incomplete gamma: order must be >= 1");
    if (x < 0.0)
        throw std::invalid_argument("incomplete gamma: negative argument");
    if (x == 0.0)
        return neg_inf;
    if (std::isinf(x))
        return 0.0;

    if (x < kappa + 1.0)
    {
        // P = x^k e^-x / k! * sum_n x^n / ((k+1)...(k+n)); positive terms, no cancellation.
        double term = 1.0, sum = 1.0;
        for (int n = 1; n < 100000; ++n)
        {
            term *= x / (kappa + n);
            sum += term;
            if (term < 1e-17 * sum)
                break;
        }
        return kappa * std::log(x) - x - log_factorial(static_cast<unsigned>(kappa)) + std::log(sum);
    }
    return std::log(-std::expm1(log_gamma_q_int(kappa, x)));
}

double log_gamma_q_int(int kappa, double x)
{
    if (kappa < 1)
        throw std::invalid_argument("incomplete gamma: order must be >= 1");
    if (x < 0.0)
        throw std::invalid_argument("incomplete gamma: negative argument");
    if (x == 0.0)
        return 0.0;
    if (std::isinf(x))
        return neg_inf;

    if (x < kappa + 1.0)
        return std::log1p(-std::exp(log_gamma_p_int(kappa, x)));

    // Q = e^-x sum_{m<kappa} x^m/m!; with x >= kappa the terms increase with m, so
    // scale by the last one.
    const double log_x = std::log(x);
    const double log_last = (kappa - 1) * log_x - log_factorial(static_cast<unsigned>(kappa - 1));
    double term = 1.0, sum = 1.0;
    for (int m = kappa - 1; m >= 1; --m)
    {
        term *= m / x;
        sum += term;
        if (term < 1e-17 * sum)
            break;
    }
    return log_last - x + std::log(sum);
}

double gamma_p_int(int kappa, double x) { return std::exp(log_gamma_p_int(kappa, x)); }
double gamma_q_int(int kappa, double x) { return std::exp(log_gamma_q_int(kappa, x)); }

double log_lower_incomplete_gamma_int(int kappa, double x)
{
    return log_gamma_p_int(kappa, x) + log_factorial(static_cast<unsigned>(kappa - 1));
}

double lower_incomplete_gamma_int(int kappa, double x)
{
    return std::exp(log_lower_incomplete_gamma_int(kappa, x));
}

std::vector<double> log_gamma_p_table(int kappa_max, double x)
{
    if (kappa_max < 1)
        return {};
    std::vector<double> out(static_cast<std::size_t>(kappa_max));
    if (x == 0.0)
    {
        std::fill(out.begin(), out.end(), neg_inf);
        return out;
    }
    // P(k, x) = P(k+1, x) + e^-x x^k / k!, downward from the top: only additions.
    out.back() = log_gamma_p_int(kappa_max, x);
    const double log_x = std::log(x);
    double log_term = kappa_max == 1 ? 0.0
                                     : (kappa_max - 1) * log_x - x - log_factorial(static_cast<unsigned>(kappa_max - 1));
    for (int k = kappa_max - 1; k >= 1; --k)
    {
        out[static_cast<std::size_t>(k - 1)] = log_add(out[static_cast<std::size_t>(k)], log_term);
        log_term += std::log(static_cast<double>(k)) - log_x;
    }
    return out;
}

double poisson_upper_tail(int n, double mean)
{
    if (n < 0)
        return 1.0;
    if (mean <= 0.0)
        return 0.0;
    return gamma_p_int(n + 1, mean);
}

// ---- Marcum Q ------------------------------------------------------------------------

MarcumQ marcum_q1_pair(double a, double b)
{
    if (a < 0.0 || b < 0.0)
        throw std::invalid_argument("marcum_q1: negative argument");
    const double lambda = 0.5 * a * a;
    const double y = 0.5 * b * b;
    if (y == 0.0)
        return {1.0, 0.0};
    if (lambda == 0.0)
        return {std::exp(-y), -std::expm1(-y)};

    // Q1(a, b) = sum_k Pois(k; a^2/2) Q(k+1, b^2/2),   1 - Q1 = sum_k Pois(k; a^2/2) P(k+1, b^2/2).
    // Both sums have log-concave positive terms. Each is walked from the side where
    // the weights alone bound the terms, past the peak of the products, until the
    // terms fall e^-46 below that peak.
    const double log_lambda = std::log(lambda);
    const double log_y = std::log(y);
    const int mode = static_cast<int>(lambda);
    auto log_weight = [&](int k) { return k * log_lambda - lambda - log_factorial(static_cast<unsigned>(k)); };
    auto log_poisson_y = [&](int k) { return k * log_y - y - log_factorial(static_cast<unsigned>(k)); };
    constexpr double cutoff = 46.0;

    const double log_w_mode = log_weight(mode);
    int k_hi = mode;
    for (double lw = log_w_mode; lw > log_w_mode - cutoff;)
    {
        ++k_hi;
        lw += log_lambda - std::log(static_cast<double>(k_hi));
    }
    int k_lo = mode;
    for (double lw = log_w_mode; k_lo > 0 && lw > log_w_mode - cutoff; --k_lo)
        lw -= log_lambda - std::log(static_cast<double>(k_lo));

    auto log_total = [](const std::vector<double> &logs, double peak) {
        CompensatedSum sum;
        for (double l : logs)
            sum.add(std::exp(l - peak));
        return peak + std::log(sum.value());
    };
    std::vector<double> logs;

    // The retained weights sum to one up to e^-46. Normalizing over the window
    // removes the drift that lgamma at large k leaves in every log weight.
    double log_norm = 0.0;
    {
        double lw = log_weight(k_lo);
        for (int k = k_lo; k <= k_hi; ++k)
        {
            logs.push_back(lw);
            lw += log_lambda - std::log(k + 1.0);
        }
        log_norm = log_total(logs, *std::max_element(logs.begin(), logs.end()));
        logs.clear();
    }

    // Upper tail, upward from k_lo: Q(k+2) = Q(k+1) + e^-y y^(k+1)/(k+1)!.
    double peak = -std::numeric_limits<double>::infinity();
    {
        double lw = log_weight(k_lo) - log_norm;
        double lq = log_gamma_q_int(k_lo + 1, y);
        double lpy = log_poisson_y(k_lo + 1);
        for (int k = k_lo;; ++k)
        {
            const double term = lw + lq;
            logs.push_back(term);
            peak = std::max(peak, term);
            if (k >= mode && term < peak - cutoff)
                break;
            lq = log_add(lq, lpy);
            lw += log_lambda - std::log(k + 1.0);
            lpy += log_y - std::log(k + 2.0);
        }
    }
    const double log_q = log_total(logs, peak);

    // Lower tail, downward from k_hi: P(k) = P(k+1) + e^-y y^k/k!.
    logs.clear();
    peak = -std::numeric_limits<double>::infinity();
    {
        double lw = log_weight(k_hi) - log_norm;
        double lp = log_gamma_p_int(k_hi + 1, y);
        double lpy = log_poisson_y(k_hi);
        for (int k = k_hi;; --k)
        {
            const double term = lw + lp;
            logs.push_back(term);
            peak = std::max(peak, term);
            if (k == 0 || (k <= mode && term < peak - cutoff))
                break;
            lp = log_add(lp, lpy);
            lw -= log_lambda - std::log(static_cast<double>(k));
            lpy -= log_y - std::log(static_cast<double>(k));
        }
    }
    const double log_c = log_total(logs, peak);

    // The smaller tail carries full relative accuracy; the larger follows from it.
    const double q = std::clamp(std::exp(log_q), 0.0, 1.0);
    const double c = std::clamp(std::exp(log_c), 0.0, 1.0);
    return q < c ? MarcumQ{q, 1.0 - q} : MarcumQ{1.0 - c, c};
}

double marcum_q1(double a, double b) { return marcum_q1_pair(a, b).q; }
double marcum_q1_complement(double a, double b) { return marcum_q1_pair(a, b).complement; }

// ---- quadrature grids and summation -----------------------------------------------------

std::vector<ChebyshevNode> chebyshev_grid(unsigned U)
{
    if (U == 0)
        throw std::invalid_argument("chebyshev_grid: U must be >= 1");
    std::vector<ChebyshevNode> nodes;
    nodes.reserve(U);
    for (unsigned i = 1; i <= U; ++i)
    {
        const double theta = (2.0 * i - 1.0) * std::numbers::pi / (2.0 * U);
        nodes.push_back({std::cos(theta), std::sin(theta)});
    }
    return nodes;
}

void CompensatedSum::add(double x)
{
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        correction_ += (sum_ - t) + x;
    else
        correction_ += (x - t) + sum_;
    sum_ = t;
}

double ordered_sum(std::span<const double> terms)
{
    std::vector<double> sorted(terms.begin(), terms.end());
    std::sort(sorted.begin(), sorted.end(), [](double a, double b) {
        const double aa = std::abs(a), ab = std::abs(b);
        return aa != ab ? aa > ab : a > b;
    });
    CompensatedSum s;
    for (double x : sorted)
        s.add(x);
    return s.value();
}

} // namespace fasmrc::specfun
