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

#ifndef FASMRC_MONTECARLO_HPP
#define FASMRC_MONTECARLO_HPP

#include "fasmrc/channel.hpp"
#include "fasmrc/outage_estimate.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace fasmrc::mc
{

struct McConfig
{
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 20240601;
    std::uint64_t chunk_size = 65536;
};

using Rng = std::mt19937_64;

// Private stream of chunk `chunk` under `seed`. Results depend on (seed,
// samples, chunk_size) only, never on how chunks are scheduled.
Rng chunk_stream(std::uint64_t seed, std::uint64_t chunk);

// Circularly-symmetric complex normal with E|g|^2 = 1.
std::complex<double> complex_normal(Rng &rng);

// gamma_m = phi |sqrt(mu) g0 + sqrt(1 - mu) g_m|^2 for m = 1..M, written to out
// (size M). g0 is drawn unless pinned.
void sample_port_snrs(Rng &rng, const SystemConfig &cfg, const DerivedParams &p, std::span<double> out,
                      std::optional<std::complex<double>> pinned_reference = std::nullopt);
std::vector<double> sample_port_snrs(Rng &rng, const SystemConfig &cfg, const DerivedParams &p,
                                     std::optional<std::complex<double>> pinned_reference = std::nullopt);

// One port SNR given gamma_0 = x0, i.e. |sqrt(mu x0) + g / sqrt(omega)|^2.
double sample_conditional_port_snr(Rng &rng, double x0, const DerivedParams &p);

// Sum of the K largest entries. Throws std::invalid_argument unless 1 <= K <= size.
double mrc_snr(std::span<const double> snrs, int K);

// Fraction of channel draws with best-K MRC SNR <= z.
OutageEstimate estimate_outage(const SystemConfig &cfg, const McConfig &mc, unsigned threads = 1);

// Same channel draws evaluated for several K at once. Element i equals
// estimate_outage with cfg.K = ks[i] bit for bit.
std::vector<OutageEstimate> estimate_outage_curve(const SystemConfig &cfg, std::span<const int> ks,
                                                  const McConfig &mc, unsigned threads = 1);

// Conditional oracles given gamma_0 = x0. diagnostics["std_error"] carries the
// one-sigma error of the estimate.

// Pr(all T port SNRs <= v).
OutageEstimate estimate_psi_mc(double v, double x0, int T, const DerivedParams &p, const McConfig &mc);

// Pr(sum of K port SNRs <= z, each > v), with every branch drawn by rejection
// from the region above v. Throws oracle_starvation when the acceptance rate
// drops below 1e-6.
OutageEstimate estimate_phi_mc(double z, double v, double x0, int K, const DerivedParams &p, const McConfig &mc);

// Pr(best-K MRC SNR <= z | gamma_0 = x0).
OutageEstimate estimate_lambda_mc(double x0, const SystemConfig &cfg, const DerivedParams &p, const McConfig &mc);

} // namespace fasmrc::mc

#endif
