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

#include <catch_amalgamated.hpp>

#include "fasmrc/specfun.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

// Covered tests:
// - LogValue arithmetic and sign handling
// - Factorials and binomials in log domain
// - Bessel I0, J0, J1 against Boost.Math and high-precision constants
// - 1F2 by quadrature against the direct series and pinned values
// - Integer-order incomplete gamma against Boost.Math
// - Marcum Q1 against the noncentral chi-squared CDF, plus monotonicity
// - Chebyshev grid and ordered summation

using namespace fasmrc::specfun;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("LogValue - arithmetic")
{
    const auto a = LogValue::from_double(3.0);
    const auto b = LogValue::from_double(-5.0);
    CHECK_THAT((a + b).to_double(), WithinRel(-2.0, 1e-15));
    CHECK_THAT((a - b).to_double(), WithinRel(8.0, 1e-15));
    CHECK_THAT((a * b).to_double(), WithinRel(-15.0, 1e-15));
    CHECK_THAT((b / a).to_double(), WithinRel(-5.0 / 3.0, 1e-15));
    CHECK((a - a).is_zero());
    CHECK(LogValue::from_double(0.0).is_zero());
    CHECK((LogValue::zero() + a).log_magnitude == a.log_magnitude);
    CHECK((-a).sign == -1);
    CHECK((-a).log_magnitude == a.log_magnitude);
    CHECK_THAT(a.to_double(), WithinRel(3.0, 1e-15));

    // Magnitudes far outside double range survive multiplication back into range
    const auto big = LogValue::from_log(2000.0);
    const auto small = LogValue::from_log(-1999.0);
    CHECK_THAT((big * small).to_double(), WithinRel(std::exp(1.0), 1e-12));
    CHECK(std::isinf(big.to_double()));
}

TEST_CASE("log_factorial")
{
    CHECK(log_factorial(0) == 0.0);
    CHECK(log_factorial(1) == 0.0);
    CHECK_THAT(log_factorial(10), WithinRel(std::log(3628800.0), 1e-15));
    CHECK_THAT(log_factorial(10), WithinAbs(15.1044, 1e-4));
    for (unsigned n : {20u, 21u, 50u, 170u, 1000u})
        CHECK_THAT(log_factorial(n), WithinRel(std::lgamma(n + 1.0), 1e-14));
}

TEST_CASE("binomial - Pascal triangle")
{
    // Stored as logarithms; exact integers are recovered to the last couple of ulps
    CHECK(binomial(5, 2).log_magnitude == std::log(10.0));
    CHECK_THAT(binomial(5, 2).to_double(), WithinRel(10.0, 1e-15));
    CHECK(binomial(7, 0).to_double() == 1.0);
    CHECK(binomial(7, 7).to_double() == 1.0);
    CHECK(binomial(20, 10).log_magnitude == std::log(184756.0));
    CHECK(std::round(binomial(20, 10).to_double()) == 184756.0);
    CHECK_THROWS_AS(binomial(3, 4), std::invalid_argument);

    // Every row up to 60 equals the Pascal recurrence
    std::vector<double> row{1.0};
    for (unsigned n = 1; n <= 60; ++n)
    {
        std::vector<double> next(n + 1, 1.0);
        for (unsigned k = 1; k < n; ++k)
            next[k] = row[k - 1] + row[k];
        row = next;
        for (unsigned k = 0; k <= n; ++k)
            CHECK_THAT(binomial(n, k).to_double(), WithinRel(row[k], row[k] < 0x1p53 ? 1e-14 : 1e-12));
    }
    CHECK_THAT(binomial(2000, 1000).log_magnitude,
               WithinRel(std::lgamma(2001.0) - 2.0 * std::lgamma(1001.0), 1e-12));
}

TEST_CASE("bessel_i0")
{
    CHECK(bessel_i0(0.0) == 1.0);
    CHECK_THAT(bessel_i0(1.0), WithinRel(oracle::i0_at_1, 1e-14));
    CHECK_THAT(bessel_i0_scaled(50.0), WithinRel(oracle::i0_scaled_at_50, 1e-12));
    CHECK(std::isfinite(bessel_i0_scaled(800.0)));
    CHECK(std::isinf(bessel_i0(800.0)));
    CHECK_THAT(log_bessel_i0(800.0), WithinRel(800.0 + std::log(bessel_i0_scaled(800.0)), 1e-15));

    double prev = 1.0;
    for (double x = 0.0; x <= 700.0; x += 0.37)
    {
        const double v = bessel_i0(x);
        CHECK_THAT(v, WithinRel(boost::math::cyl_bessel_i(0, x), 1e-12));
        CHECK(v >= 1.0);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("bessel_j0 and bessel_j1")
{
    CHECK(bessel_j1(0.0) == 0.0);
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK_THAT(bessel_j1(1e-8) / 1e-8, WithinRel(0.5, 1e-12));
    CHECK_THAT(bessel_j1(10.0 * std::numbers::pi), WithinAbs(oracle::j1_at_10pi, 1e-12));
    for (double x = 0.0; x <= 200.0; x += 0.013)
    {
        CHECK_THAT(bessel_j1(x), WithinAbs(boost::math::cyl_bessel_j(1, x), 1e-10));
        CHECK_THAT(bessel_j0(x), WithinAbs(boost::math::cyl_bessel_j(0, x), 1e-10));
    }
    // Both sides of the series / asymptotic switch
    for (double x : {19.999, 20.0, 20.001})
        CHECK_THAT(bessel_j1(x), WithinAbs(boost::math::cyl_bessel_j(1, x), 1e-12));
}

TEST_CASE("hyp1f2_half")
{
    CHECK(hyp1f2_half(0.0) == 1.0);
    CHECK_THAT(hyp1f2_half(0.1), WithinRel(oracle::hyp1f2_series(0.1), 1e-12));
    CHECK_THAT(hyp1f2_half(0.5), WithinRel(oracle::hyp_at_half, 1e-10));
    CHECK_THAT(hyp1f2_half(1.0), WithinRel(oracle::hyp_at_1, 1e-10));
    CHECK_THAT(hyp1f2_half(5.0), WithinRel(oracle::hyp_at_5, 1e-9));
    CHECK_THAT(hyp1f2_half(50.0), WithinRel(oracle::hyp_at_50, 1e-8));
    CHECK_THAT(hyp1f2_half(5.0), WithinRel(oracle::hyp1f2_integral(5.0), 1e-9));

    // Quadrature path against the direct series where the series is safe
    for (double w = 0.01; w <= 1.0; w += 0.01)
        CHECK_THAT(hyp1f2_half(w), WithinRel(oracle::hyp1f2_series(w), 1e-8));
    for (double w = 1.0; w <= 50.0; w += 0.7)
        CHECK_THAT(hyp1f2_half(w), WithinRel(oracle::hyp1f2_integral(w), 1e-8));
}

TEST_CASE("lower_incomplete_gamma_int")
{
    for (double x : {0.0, 0.3, 2.0, 40.0})
        CHECK_THAT(lower_incomplete_gamma_int(1, x), WithinAbs(-std::expm1(-x), 1e-15));
    for (int k : {1, 3, 30})
        CHECK(lower_incomplete_gamma_int(k, 0.0) == 0.0);
    CHECK_THAT(lower_incomplete_gamma_int(2, 1.0), WithinRel(1.0 - 2.0 * std::exp(-1.0), 1e-14));
    CHECK_THAT(lower_incomplete_gamma_int(2, 1.0), WithinAbs(0.264241, 1e-6));
    CHECK_THROWS_AS(lower_incomplete_gamma_int(0, 1.0), std::invalid_argument);

    for (int k : {1, 2, 5, 17, 60, 150, 400})
    {
        double prev = -std::numeric_limits<double>::infinity();
        for (double x : {1e-6, 0.01, 0.5, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0})
        {
            const double p_ref = oracle::gamma_p(k, x);
            if (p_ref > 1e-300)
                CHECK_THAT(gamma_p_int(k, x), WithinRel(p_ref, 1e-10));
            const double q_ref = boost::math::gamma_q(static_cast<double>(k), x);
            if (q_ref > 1e-300)
                CHECK_THAT(gamma_q_int(k, x), WithinRel(q_ref, 1e-10));
            const double lg = log_lower_incomplete_gamma_int(k, x);
            if (p_ref > 1e-300)
                CHECK_THAT(lg, WithinRel(std::log(p_ref) + std::lgamma(k), 1e-10));
            CHECK(lg >= prev);
            prev = lg;
        }
        // Saturates at (k-1)!
        CHECK_THAT(log_lower_incomplete_gamma_int(k, 1e4), WithinRel(std::lgamma(k), 1e-12));
    }

    const auto table = log_gamma_p_table(80, 7.5);
    REQUIRE(table.size() == 80);
    for (int k = 1; k <= 80; ++k)
        CHECK_THAT(std::exp(table[k - 1]), WithinRel(oracle::gamma_p(k, 7.5), 1e-12));
}

TEST_CASE("poisson_upper_tail")
{
    // Pr(N > n) for N ~ Poisson(mean)
    for (double mean : {0.1, 2.0, 25.0, 300.0})
        for (int n = 0; n < 400; n += 3)
        {
            const double tail = oracle::gamma_p(n + 1, mean);
            if (tail > 1e-300)
                CHECK_THAT(poisson_upper_tail(n, mean), WithinRel(tail, 1e-10));
        }
    // Small-mean case from the explicit probability mass function
    CHECK_THAT(poisson_upper_tail(0, 0.1), WithinRel(-std::expm1(-0.1), 1e-14));
    CHECK_THAT(poisson_upper_tail(1, 0.1), WithinRel(-std::expm1(-0.1) - 0.1 * std::exp(-0.1), 1e-12));
}

TEST_CASE("marcum_q1 - special values")
{
    CHECK(marcum_q1(3.0, 0.0) == 1.0);
    CHECK(marcum_q1(0.0, 0.0) == 1.0);
    CHECK_THAT(marcum_q1(0.0, std::sqrt(2.0)), WithinAbs(std::exp(-1.0), 1e-15));
    CHECK_THAT(marcum_q1(1.0, 1.0), WithinAbs(0.73287980379682027, 1e-12));
    CHECK_THAT(marcum_q1(100.0, 100.0), WithinAbs(0.50199473633835101, 1e-10));

    // Q1(1, 1) as the tail integral of the Rician power density
    // The integrand is below e^-150 beyond y = 400
    const double tail = oracle::integrate(
        [](double y) { return 0.5 * std::exp(-0.5 * (y + 1.0)) * boost::math::cyl_bessel_i(0, std::sqrt(y)); }, 1.0,
        400.0);
    CHECK_THAT(marcum_q1(1.0, 1.0), WithinAbs(tail, 1e-10));
}

TEST_CASE("marcum_q1 - against the noncentral chi-squared CDF")
{
    const std::vector<double> grid{0.0, 0.01, 0.3, 1.0, 2.5, 5.0, 10.0, 20.0, 35.0, 50.0, 75.0, 100.0};
    for (double a : grid)
    {
        double prev = 2.0;
        for (double b : grid)
        {
            const auto pair = marcum_q1_pair(a, b);
            CHECK_THAT(pair.q, WithinAbs(oracle::marcum_q1(a, b), 1e-10));
            CHECK_THAT(pair.q + pair.complement, WithinAbs(1.0, 1e-11));
            CHECK(pair.q >= 0.0);
            CHECK(pair.q <= 1.0);
            CHECK(pair.q <= prev + 1e-13); // nonincreasing in b
            prev = pair.q;
        }
    }
    for (double b : grid)
    {
        double prev = -1.0;
        for (double a : grid)
        {
            const double q = marcum_q1(a, b);
            CHECK(q >= prev - 1e-13); // nondecreasing in a
            prev = q;
        }
    }
}

TEST_CASE("marcum_q1_complement - relative accuracy in the lower tail")
{
    for (double a : {0.0, 0.5, 3.0, 12.0})
        for (double b : {1e-4, 1e-2, 0.1, 0.5})
        {
            boost::math::non_central_chi_squared_distribution<double> d(2.0, a * a);
            const double ref = a == 0.0 ? -std::expm1(-0.5 * b * b) : boost::math::cdf(d, b * b);
            if (ref > 1e-290)
                CHECK_THAT(marcum_q1_complement(a, b), WithinRel(ref, 1e-9));
        }
}

TEST_CASE("chebyshev_grid")
{
    const auto one = chebyshev_grid(1);
    REQUIRE(one.size() == 1);
    CHECK_THAT(one[0].t, WithinAbs(0.0, 1e-16));
    CHECK_THAT(one[0].sqrt_one_minus_t2, WithinAbs(1.0, 1e-16));

    const auto two = chebyshev_grid(2);
    CHECK_THAT(two[0].t, WithinAbs(std::sqrt(0.5), 1e-15));
    CHECK_THAT(two[1].t, WithinAbs(-std::sqrt(0.5), 1e-15));

    for (unsigned U : {3u, 10u, 101u, 800u})
    {
        const auto g = chebyshev_grid(U);
        REQUIRE(g.size() == U);
        for (unsigned i = 0; i < U; ++i)
        {
            CHECK(g[i].t > -1.0);
            CHECK(g[i].t < 1.0);
            if (i > 0)
                CHECK(g[i].t < g[i - 1].t);
            const double theta = (2.0 * i + 1.0) * std::numbers::pi / (2.0 * U);
            CHECK_THAT(g[i].t, WithinAbs(std::cos(theta), 1e-15));
            CHECK_THAT(g[i].sqrt_one_minus_t2, WithinAbs(std::sin(theta), 1e-15));
        }
    }
}

TEST_CASE("chebyshev_grid - exact for weighted polynomials up to degree 2U-1")
{
    // Integral of t^n / sqrt(1 - t^2) over [-1, 1]: pi (n-1)!! / n!! for even n, zero for odd n
    auto exact = [](int n) {
        if (n % 2)
            return 0.0;
        double r = std::numbers::pi;
        for (int k = 1; k <= n; k += 2)
            r *= static_cast<double>(k) / (k + 1);
        return r;
    };
    for (unsigned U : {1u, 2u, 5u, 12u})
    {
        const auto g = chebyshev_grid(U);
        for (int n = 0; n <= static_cast<int>(2 * U - 1); ++n)
        {
            double sum = 0.0;
            for (const auto &node : g)
                sum += std::pow(node.t, n);
            CHECK_THAT(std::numbers::pi / U * sum, WithinAbs(exact(n), 1e-13));
        }
    }
}

TEST_CASE("ordered_sum - independent of input order")
{
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n;
    std::vector<double> v(5000);
    for (auto &x : v)
        x = n(rng) * std::exp(10.0 * n(rng));
    const double ref = ordered_sum(v);
    for (int rep = 0; rep < 5; ++rep)
    {
        std::shuffle(v.begin(), v.end(), rng);
        CHECK(ordered_sum(v) == ref);
    }
    // Cancellation that plain summation loses completely
    const std::vector<double> c{1e16, 1.0, -1e16, 1.0};
    CHECK(ordered_sum(c) == 2.0);
    CompensatedSum s;
    for (double x : c)
        s.add(x);
    CHECK(s.value() == 2.0);
}
