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

#include "fasmrc/analytic.hpp"

#include "fasmrc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fasmrc::analytic
{

using specfun::LogValue;

namespace
{
constexpr double neg_inf = -std::numeric_limits<double>::infinity();

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

// ln(x^n), with 0^0 = 1
double log_power(double log_x, int n)
{
    return n == 0 ? 0.0 : n * log_x;
}

bool key_less(const LtTerm &l, const LtTerm &r)
{
    if (l.x0_power != r.x0_power)
        return l.x0_power < r.x0_power;
    if (l.v_power != r.v_power)
        return l.v_power < r.v_power;
    return l.inv_shift_power < r.inv_shift_power;
}

std::uint64_t pack_key(int a, int b, int c)
{
    return (static_cast<std::uint64_t>(a) << 42) | (static_cast<std::uint64_t>(b) << 21) | static_cast<std::uint64_t>(c);
}

void require_analytic_config(const SystemConfig &cfg, const DerivedParams &p)
{
    cfg.validate();
    if (cfg.K >= cfg.M)
        throw unsupported_configuration("analytic path requires K <= M - 1");
    if (!(p.mu < 1.0))
        throw unsupported_configuration("analytic path requires mu < 1");
}
} // namespace

double QuadratureConfig::cutoff(double phi) const
{
    return H ? *H : phi * std::log(1e10);
}

// ---- SparseLtPolynomial --------------------------------------------------------

SparseLtPolynomial::SparseLtPolynomial(double omega, double mu, LtPrefactor prefactor, std::vector<LtTerm> terms)
    : omega_(omega), mu_(mu), prefactor_(prefactor), terms_(std::move(terms))
{
    for (const LtTerm &t : terms_)
        if (t.inv_shift_power < 1 || t.x0_power < 0 || t.v_power < 0)
            throw std::invalid_argument("SparseLtPolynomial: invalid term exponents");
    std::sort(terms_.begin(), terms_.end(), key_less);
}

int SparseLtPolynomial::max_x0_power() const
{
    int m = 0;
    for (const LtTerm &t : terms_)
        m = std::max(m, t.x0_power);
    return m;
}

LogValue SparseLtPolynomial::coefficient(int x0_power, int v_power, int inv_shift_power) const
{
    const LtTerm probe{x0_power, v_power, inv_shift_power, {}};
    auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, key_less);
    if (it == terms_.end() || key_less(probe, *it))
        return LogValue::zero();
    return it->coefficient;
}

double SparseLtPolynomial::evaluate(double s, double x0, double v) const
{
    const double shift = s + omega_;
    if (!(shift > 0.0))
        throw std::invalid_argument("SparseLtPolynomial::evaluate: requires s > -omega");
    const double log_x0 = std::log(x0), log_v = std::log(v), log_shift = std::log(shift);

    LogValue sum;
    for (const LtTerm &t : terms_)
    {
        if ((t.x0_power > 0 && x0 == 0.0) || (t.v_power > 0 && v == 0.0))
            continue;
        sum += t.coefficient * LogValue::from_log(log_power(log_x0, t.x0_power) + log_power(log_v, t.v_power) -
                                                   t.inv_shift_power * log_shift);
    }
    const double log_prefactor = -prefactor_.v_shift * v * shift - prefactor_.x0_decay * omega_ * mu_ * x0;
    return (sum * LogValue::from_log(log_prefactor)).to_double();
}

SparseLtPolynomial SparseLtPolynomial::multiply(const SparseLtPolynomial &other, int n_max,
                                                std::size_t term_cap) const
{
    if (omega_ != other.omega_ || mu_ != other.mu_)
        throw std::invalid_argument("SparseLtPolynomial::multiply: mismatched channel parameters");

    std::unordered_map<std::uint64_t, LtTerm> acc;
    for (const LtTerm &l : terms_)
    {
        for (const LtTerm &r : other.terms_)
        {
            const int a = l.x0_power + r.x0_power;
            if (a > n_max)
                continue;
            const int b = l.v_power + r.v_power;
            const int c = l.inv_shift_power + r.inv_shift_power;
            auto [it, inserted] = acc.try_emplace(pack_key(a, b, c), LtTerm{a, b, c, LogValue::zero()});
            it->second.coefficient += l.coefficient * r.coefficient;
            if (inserted && acc.size() > term_cap)
                throw term_explosion("K-fold transform exceeds " + std::to_string(term_cap) + " terms");
        }
    }
    std::vector<LtTerm> terms;
    terms.reserve(acc.size());
    for (auto &[key, term] : acc)
        terms.push_back(term);
    return SparseLtPolynomial(omega_, mu_,
                              {prefactor_.v_shift + other.prefactor_.v_shift,
                               prefactor_.x0_decay + other.prefactor_.x0_decay},
                              std::move(terms));
}

// ---- transforms ----------------------------------------------------------------

SparseLtPolynomial branch_lt(const SeriesTruncation &trunc, const DerivedParams &p)
{
    if (!(p.mu < 1.0))
        throw degenerate_correlation("branch_lt: mu = 1");
    if (trunc.n_max < 0)
        throw std::invalid_argument("branch_lt: n_max must be >= 0");

    const double log_omega = std::log(p.omega);
    const double log_mu = p.mu > 0.0 ? std::log(p.mu) : neg_inf;
    std::vector<LtTerm> terms;
    for (int m = 0; m <= trunc.n_max; ++m)
    {
        if (m > 0 && p.mu == 0.0)
            break;
        const double log_d = (2 * m + 1) * log_omega + log_power(log_mu, m) - specfun::log_factorial(m);
        for (int l = 0; l <= m; ++l)
            terms.push_back({m, l, m + 1 - l, LogValue::from_log(log_d - specfun::log_factorial(l))});
    }
    return SparseLtPolynomial(p.omega, p.mu, {1, 1}, std::move(terms));
}

double branch_lt_tail_bound(int n_max, double s, double x0, const DerivedParams &p)
{
    // order m contributes at most Pois(m; lambda) (omega / (s + omega))^(m+1)
    const double r = std::max(1.0, p.omega / (s + p.omega));
    const double lambda = p.omega * p.mu * x0;
    return r * std::exp(lambda * (r - 1.0)) * specfun::poisson_upper_tail(n_max, lambda * r);
}

SparseLtPolynomial lt_power_k(const SparseLtPolynomial &branch, int K, const SeriesTruncation &trunc,
                              std::size_t term_cap)
{
    if (K < 1)
        throw std::invalid_argument("lt_power_k: K must be >= 1");
    std::vector<LtTerm> kept;
    for (const LtTerm &t : branch.terms())
        if (t.x0_power <= trunc.n_max)
            kept.push_back(t);
    const SparseLtPolynomial base(branch.omega(), branch.mu(), branch.prefactor(), std::move(kept));
    SparseLtPolynomial out = base;
    for (int k = 1; k < K; ++k)
        out = out.multiply(base, trunc.n_max, term_cap);
    return out;
}

double lt_closed_form_g(int a, double b, double v, double s)
{
    if (a < 0)
        throw std::invalid_argument("lt_closed_form_g: a must be >= 0");
    if (!(s > -b))
        throw std::invalid_argument("lt_closed_form_g: requires s > -b");
    const double shift = s + b;
    const double log_shift = std::log(shift);
    const double log_v = std::log(v);
    double log_sum = neg_inf;
    for (int l = 0; l <= a; ++l)
    {
        if (l > 0 && v == 0.0)
            break;
        log_sum = log_add(log_sum, specfun::log_factorial(a) + log_power(log_v, l) - specfun::log_factorial(l) -
                                       (a + 1 - l) * log_shift);
    }
    return std::exp(-shift * v + log_sum);
}

double lt_closed_form_p(int K, double a, double b, double s)
{
    if (K < 1)
        throw std::invalid_argument("lt_closed_form_p: K must be >= 1");
    if (!(s > -b))
        throw std::invalid_argument("lt_closed_form_p: requires s > -b");
    const double shift = s + b;
    return std::exp(specfun::log_factorial(K - 1) - a * shift - K * std::log(shift));
}

double laplace_numeric(const std::function<double(double)> &f, double s, std::span<const double> breakpoints)
{
    std::vector<double> cuts{0.0};
    for (double b : breakpoints)
        if (b > 0.0)
            cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // f underflows to zero in the far tail where exp(-s x) may overflow for s < 0
    auto g = [&](double x) {
        const double fx = f(x);
        return fx == 0.0 ? 0.0 : fx * std::exp(-s * x);
    };
    constexpr double target = 1e-9;

    specfun::CompensatedSum total;
    double abs_error = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    {
        double err = 0.0, seg_l1 = 0.0;
        total.add(boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, cuts[i], cuts[i + 1], 20, 1e-13,
                                                                                 &err, &seg_l1));
        abs_error += err;
        l1 += seg_l1;
    }
    boost::math::quadrature::exp_sinh<double> tail_rule;
    double err = 0.0, tail_l1 = 0.0;
    total.add(tail_rule.integrate(g, cuts.back(), std::numeric_limits<double>::infinity(), 1e-13, &err, &tail_l1));
    abs_error += err;
    l1 += tail_l1;

    const double value = total.value();
    if (!std::isfinite(value) || abs_error > target * std::max(std::abs(value), 1e-300) + 1e-15 * l1)
        throw quadrature_nonconvergence("laplace_numeric: error estimate " + std::to_string(abs_error) +
                                        " for value " + std::to_string(value));
    return value;
}

// ---- Psi and Phi -----------------------------------------------------------------

double psi_exact(double v, double x0, int T, const DerivedParams &p)
{
    if (T < 0)
        throw std::invalid_argument("psi_exact: T must be >= 0");
    if (T == 0)
        return 1.0;
    if (v <= 0.0)
        return 0.0;
    return checked_probability(std::pow(port_cdf_conditional(v, x0, p), T), "psi_exact");
}

PhiSeries::PhiSeries(int K, const DerivedParams &p, const SeriesTruncation &trunc, std::size_t term_cap)
    : K_(K), order_(trunc.n_max), omega_(p.omega), mu_(p.mu),
      transform_(lt_power_k(branch_lt(trunc, p), K, trunc, term_cap))
{
}

double PhiSeries::tail_bound(double x0) const
{
    return specfun::poisson_upper_tail(order_, K_ * omega_ * mu_ * x0);
}

std::vector<double> PhiSeries::inner(double z, double v) const
{
    if (z < K_ * v)
        return {};
    // Inverse transform of e^{-Kvs} (s+omega)^-c is (x-Kv)^{c-1} e^{-omega(x-Kv)} / (c-1)!;
    // integrating over [Kv, z] gives P(c, omega (z - Kv)) / omega^c.
    const double y = omega_ * (z - K_ * v);
    int c_max = 1;
    for (const LtTerm &t : transform_.terms())
        c_max = std::max(c_max, t.inv_shift_power);
    const std::vector<double> log_p = specfun::log_gamma_p_table(c_max, y);

    const int shift = transform_.prefactor().v_shift;
    const double log_omega = std::log(omega_);
    const double log_v = std::log(v);
    std::vector<double> out(static_cast<std::size_t>(transform_.max_x0_power()) + 1, neg_inf);
    for (const LtTerm &t : transform_.terms())
    {
        if (t.v_power > 0 && v == 0.0)
            continue;
        const double term = t.coefficient.log_magnitude + log_power(log_v, t.v_power) -
                            t.inv_shift_power * log_omega + log_p[static_cast<std::size_t>(t.inv_shift_power - 1)];
        double &slot = out[static_cast<std::size_t>(t.x0_power)];
        slot = log_add(slot, term);
    }
    for (double &slot : out)
        slot -= shift * omega_ * v;
    return out;
}

double PhiSeries::evaluate(std::span<const double> inner, double x0) const
{
    if (inner.empty())
        return 0.0;
    const double log_x0 = std::log(x0);
    const double log_decay = -transform_.prefactor().x0_decay * omega_ * mu_ * x0;
    double log_sum = neg_inf;
    for (std::size_t a = 0; a < inner.size(); ++a)
    {
        if (a > 0 && x0 == 0.0)
            break;
        log_sum = log_add(log_sum, inner[a] + log_power(log_x0, static_cast<int>(a)));
    }
    return checked_probability(std::exp(log_sum + log_decay), "phi");
}

double PhiSeries::operator()(double z, double v, double x0) const
{
    return evaluate(inner(z, v), x0);
}

double phi_exact(double z, double v, double x0, int K, const DerivedParams &p, const SeriesTruncation &trunc)
{
    if (K < 1)
        throw std::invalid_argument("phi_exact: K must be >= 1");
    if (z < K * v)
        return 0.0;
    const PhiSeries series(K, p, trunc);
    const double tail = series.tail_bound(x0);
    if (tail > trunc.tail_tol)
        throw truncation_failure("phi_exact: tail bound " + std::to_string(tail) + " exceeds tolerance at order " +
                                 std::to_string(trunc.n_max));
    return series(z, v, x0);
}

// ---- Gauss-Chebyshev outage ----------------------------------------------------------

double order_statistic_multiplicity(int M, int K)
{
    // Exact in double while the product stays below 2^53
    double c = 1.0;
    for (int i = 1; i <= K; ++i)
        c = c * (M - K + i) / i;
    return c * (M - K);
}

namespace
{
// Smallest order >= n_floor whose Poisson tail at `mean` is within tol.
int required_order(int n_floor, double mean, double tol)
{
    constexpr int hard_cap = 600;
    int n = std::max(n_floor, 0);
    while (specfun::poisson_upper_tail(n, mean) > tol)
    {
        if (++n > hard_cap)
            throw truncation_failure("series order above " + std::to_string(hard_cap) + " needed for mean " +
                                     std::to_string(mean));
    }
    return n;
}

struct InnerNode
{
    double v;
    double weight; // sqrt(1 - t^2)
    std::vector<double> phi_inner;
};

std::vector<InnerNode> inner_nodes(const PhiSeries &phi, double z, int K, unsigned U_l)
{
    std::vector<InnerNode> nodes;
    for (const auto &n : specfun::chebyshev_grid(U_l))
    {
        const double v = z * (n.t + 1.0) / (2.0 * K);
        nodes.push_back({v, n.sqrt_one_minus_t2, phi.inner(z, v)});
    }
    return nodes;
}

// Phi Psi f at one (v, x0) node; zero short-circuits the costlier factors.
double inner_integrand(const PhiSeries &phi, const InnerNode &node, double x0, int T, const DerivedParams &p)
{
    const double phi_value = phi.evaluate(node.phi_inner, x0);
    if (phi_value == 0.0)
        return 0.0;
    const double psi = psi_exact(node.v, x0, T, p);
    if (psi == 0.0)
        return 0.0;
    return phi_value * psi * port_pdf_conditional(node.v, x0, p);
}
} // namespace

double lambda_conditional(double z, double x0, const SystemConfig &cfg, const DerivedParams &p,
                          const SeriesTruncation &trunc, const QuadratureConfig &quad)
{
    require_analytic_config(cfg, p);
    if (z <= 0.0)
        return 0.0;
    SeriesTruncation t = trunc;
    t.n_max = required_order(trunc.n_max, cfg.K * p.omega * p.mu * x0, trunc.tail_tol);
    const PhiSeries phi(cfg.K, p, t);

    std::vector<double> terms;
    for (const InnerNode &node : inner_nodes(phi, z, cfg.K, quad.U_l))
        terms.push_back(inner_integrand(phi, node, x0, p.T, p) * node.weight);
    const double scale = order_statistic_multiplicity(cfg.M, cfg.K) * z / (2.0 * cfg.K) * std::numbers::pi / quad.U_l;
    return checked_probability(scale * specfun::ordered_sum(terms), "lambda_conditional");
}

namespace
{
struct GcRun
{
    std::vector<double> contributions;
    double H = 0.0;
    int order = 0;
    double max_tail = 0.0;
    std::size_t terms = 0;
};

GcRun run_gc(const SystemConfig &cfg, const SeriesTruncation &trunc, const QuadratureConfig &quad)
{
    const DerivedParams p = derive_params(cfg);
    require_analytic_config(cfg, p);
    if (quad.U_p == 0 || quad.U_l == 0)
        throw std::invalid_argument("outage_gc: node counts must be >= 1");
    const double H = quad.cutoff(cfg.phi);
    if (!(H > 0.0))
        throw std::invalid_argument("outage_gc: H must be positive");

    const auto outer = specfun::chebyshev_grid(quad.U_p);
    const double x0_max = H * (outer.front().t + 1.0) / 2.0;

    GcRun run;
    run.H = H;
    run.order = required_order(trunc.n_max, cfg.K * p.omega * p.mu * x0_max, trunc.tail_tol);
    SeriesTruncation t = trunc;
    t.n_max = run.order;
    const PhiSeries phi(cfg.K, p, t);
    run.max_tail = phi.tail_bound(x0_max);
    run.terms = phi.transform().size();

    const std::vector<InnerNode> inner = inner_nodes(phi, p.z, cfg.K, quad.U_l);
    const double scale = order_statistic_multiplicity(cfg.M, cfg.K) * std::numbers::pi * std::numbers::pi * H * p.z /
                         (4.0 * cfg.K * quad.U_p * quad.U_l);

    run.contributions.reserve(static_cast<std::size_t>(quad.U_p) * quad.U_l);
    for (const auto &o : outer)
    {
        const double x0 = H * (o.t + 1.0) / 2.0;
        const double outer_weight = o.sqrt_one_minus_t2 * ref_snr_pdf(x0, cfg.phi);
        for (const InnerNode &node : inner)
        {
            const double g = outer_weight == 0.0 ? 0.0 : inner_integrand(phi, node, x0, p.T, p);
            run.contributions.push_back(scale * g * node.weight * outer_weight);
        }
    }
    return run;
}
} // namespace

std::vector<double> outage_gc_contributions(const SystemConfig &cfg, const SeriesTruncation &trunc,
                                            const QuadratureConfig &quad)
{
    return run_gc(cfg, trunc, quad).contributions;
}

OutageEstimate outage_gc(const SystemConfig &cfg, const SeriesTruncation &trunc, const QuadratureConfig &quad)
{
    const GcRun run = run_gc(cfg, trunc, quad);
    OutageEstimate e;
    e.method = Method::gc;
    // The Chebyshev rule overshoots by roughly 7.4 / U^2 where the outage saturates at one.
    const double raw = specfun::ordered_sum(run.contributions);
    const double U = std::min(quad.U_p, quad.U_l);
    const double slack = 20.0 / (U * U);
    e.value = checked_probability(raw > 1.0 && raw <= 1.0 + slack ? 1.0 : raw, "outage_gc");
    e.diagnostics["raw_value"] = raw;
    e.ci_low = e.ci_high = e.value;
    e.samples_or_nodes = static_cast<std::uint64_t>(quad.U_p) * quad.U_l;
    e.diagnostics["H"] = run.H;
    e.diagnostics["U_p"] = quad.U_p;
    e.diagnostics["U_l"] = quad.U_l;
    e.diagnostics["series_order"] = run.order;
    e.diagnostics["max_tail"] = run.max_tail;
    e.diagnostics["terms"] = static_cast<double>(run.terms);
    return e;
}

} // namespace fasmrc::analytic
