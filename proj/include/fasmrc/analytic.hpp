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

#ifndef FASMRC_ANALYTIC_HPP
#define FASMRC_ANALYTIC_HPP

#include "fasmrc/channel.hpp"
#include "fasmrc/outage_estimate.hpp"
#include "fasmrc/specfun.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace fasmrc::analytic
{

struct SeriesTruncation
{
    int n_max = 40;         // cap on the total power of x0 kept in a transform
    double tail_tol = 1e-8; // largest acceptable bound on the discarded tail
};

struct QuadratureConfig
{
    std::optional<double> H; // outer cutoff on x0; default phi ln(1e10)
    unsigned U_p = 800;
    unsigned U_l = 800;

    double cutoff(double phi) const;
};

// One monomial coef * x0^a * v^b * (s + omega)^-c of a Laplace transform.
struct LtTerm
{
    int x0_power = 0;
    int v_power = 0;
    int inv_shift_power = 1;
    specfun::LogValue coefficient;
};

// exp(-v_shift v (s + omega)) exp(-x0_decay omega mu x0)
struct LtPrefactor
{
    int v_shift = 0;
    int x0_decay = 0;
};

// Truncated transform sum_terms coef x0^a v^b (s+omega)^-c times the exponential
// prefactor, symbolic in x0, v and s. Terms are kept sorted by (a, b, c).
class SparseLtPolynomial
{
public:
    SparseLtPolynomial(double omega, double mu, LtPrefactor prefactor, std::vector<LtTerm> terms);

    double omega() const { return omega_; }
    double mu() const { return mu_; }
    const LtPrefactor &prefactor() const { return prefactor_; }
    const std::vector<LtTerm> &terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    int max_x0_power() const;

    specfun::LogValue coefficient(int x0_power, int v_power, int inv_shift_power) const;

    // Transform value at real s > -omega.
    double evaluate(double s, double x0, double v) const;

    // Product of two transforms, dropping every term whose x0 power exceeds n_max.
    // Throws term_explosion when the product holds more than term_cap terms.
    SparseLtPolynomial multiply(const SparseLtPolynomial &other, int n_max, std::size_t term_cap) const;

private:
    double omega_;
    double mu_;
    LtPrefactor prefactor_;
    std::vector<LtTerm> terms_;
};

inline constexpr std::size_t default_term_cap = 2'000'000;

// Transform of f(x | x0) u(x - v): terms d_m x0^m v^l / (l! (s+omega)^(m+1-l)) for
// l <= m <= n_max, d_m = omega^(2m+1) mu^m / m!. Requires mu < 1.
SparseLtPolynomial branch_lt(const SeriesTruncation &trunc, const DerivedParams &p);

// Bound on the terms of order > n_max dropped from branch_lt at (s, x0).
double branch_lt_tail_bound(int n_max, double s, double x0, const DerivedParams &p);

// K-fold product of a branch transform.
SparseLtPolynomial lt_power_k(const SparseLtPolynomial &branch, int K, const SeriesTruncation &trunc,
                              std::size_t term_cap = default_term_cap);

// Laplace transforms of x^a e^-bx u(x-v) and (x-a)^(K-1) e^-bx u(x-a). Both throw
// std::invalid_argument unless s > -b.
double lt_closed_form_g(int a, double b, double v, double s);
double lt_closed_form_p(int K, double a, double b, double s);

// Integral of f(x) e^-sx over [0, inf) by adaptive quadrature (relative target
// 1e-9); breakpoints mark discontinuities of f. Throws quadrature_nonconvergence.
double laplace_numeric(const std::function<double(double)> &f, double s, std::span<const double> breakpoints = {});

// Psi(v, x0) = Pr(T given ports all <= v | gamma_0 = x0).
double psi_exact(double v, double x0, int T, const DerivedParams &p);

// Phi(z, v, x0) = Pr(sum of K ports <= z, each > v | gamma_0 = x0), obtained by
// inverting the K-fold transform term by term. Each term becomes a regularized
// lower incomplete gamma P(chi, omega (z - K v)).
class PhiSeries
{
public:
    PhiSeries(int K, const DerivedParams &p, const SeriesTruncation &trunc, std::size_t term_cap = default_term_cap);

    int K() const { return K_; }
    int order() const { return order_; }
    const SparseLtPolynomial &transform() const { return transform_; }

    // Upper bound on the probability mass of the dropped orders, Pr(N > order)
    // with N ~ Poisson(K omega mu x0).
    double tail_bound(double x0) const;

    // v-dependent part: element a is ln of the coefficient multiplying x0^a.
    // Empty when z < K v.
    std::vector<double> inner(double z, double v) const;
    double evaluate(std::span<const double> inner, double x0) const;

    double operator()(double z, double v, double x0) const;

private:
    int K_;
    int order_;
    double omega_;
    double mu_;
    SparseLtPolynomial transform_;
};

// Throws truncation_failure when PhiSeries::tail_bound(x0) > tail_tol.
double phi_exact(double z, double v, double x0, int K, const DerivedParams &p, const SeriesTruncation &trunc);

// binom(M, K) (T + 1)
double order_statistic_multiplicity(int M, int K);

// Pr(best-K MRC SNR <= z | gamma_0 = x0) with the inner integral over v in
// [0, z/K] done by U_l-node Gauss-Chebyshev.
double lambda_conditional(double z, double x0, const SystemConfig &cfg, const DerivedParams &p,
                          const SeriesTruncation &trunc, const QuadratureConfig &quad);

// Double Gauss-Chebyshev evaluation of the outage probability. The series
// order is raised above trunc.n_max when needed so that the tail bound at the
// largest outer node stays below trunc.tail_tol.
OutageEstimate outage_gc(const SystemConfig &cfg, const SeriesTruncation &trunc = {},
                         const QuadratureConfig &quad = {});

// Individual node contributions of outage_gc (already multiplied by the
// quadrature prefactor), outer index major. Exposed for summation-order tests.
std::vector<double> outage_gc_contributions(const SystemConfig &cfg, const SeriesTruncation &trunc,
                                            const QuadratureConfig &quad);

} // namespace fasmrc::analytic

#endif
