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

#ifndef FASMRC_CHANNEL_HPP
#define FASMRC_CHANNEL_HPP

namespace fasmrc
{

// Physical scenario. Transmit power, path gain and noise enter only through the
// average received SNR phi.
struct SystemConfig
{
    int M = 1;        // total ports
    int K = 1;        // activated ports
    double W = 1.0;   // aperture in wavelengths
    double R = 1.0;   // rate, bit/s/Hz
    double phi = 1.0; // average received SNR, linear

    // Throws std::invalid_argument unless 1 <= K <= M, W > 0, R > 0, phi > 0.
    void validate() const;
};

struct DerivedParams
{
    double mu = 0.0;    // correlation factor in [0, 1]
    double omega = 0.0; // 1 / (phi (1 - mu)); +inf when mu == 1
    double z = 0.0;     // outage SNR threshold 2^R - 1
    int T = 0;          // M - K - 1, may be negative
    double phi = 1.0;
};

// mu(W) = sqrt(2) sqrt(1F2(1/2; 1, 3/2; -pi^2 W^2) - J1(2 pi W) / (2 pi W)).
// A radicand in (-1e-12, 0) is clamped to zero; anything lower throws
// numerical_instability.
double correlation_mu(double W);

// Throws std::invalid_argument when cfg fails SystemConfig::validate.
DerivedParams derive_params(const SystemConfig &cfg);

// Exponential density of the reference-port SNR.
double ref_snr_pdf(double x, double phi);

// Conditional density of a port SNR given gamma_0 = x0:
//   omega exp(-omega (x + mu x0)) I0(2 omega sqrt(mu x0 x)).
// Throws degenerate_correlation when mu == 1.
double port_pdf_conditional(double x, double x0, const DerivedParams &p);
double log_port_pdf_conditional(double x, double x0, const DerivedParams &p);

// Pr(gamma_m <= v | gamma_0 = x0) = 1 - Q1(sqrt(2 omega mu x0), sqrt(2 omega v)).
double port_cdf_conditional(double v, double x0, const DerivedParams &p);

} // namespace fasmrc

#endif
