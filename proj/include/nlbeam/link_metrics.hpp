// SPDX-License-Identifier: Apache-2.0
//
// nlbeam - mmWave MIMO link analysis with nonlinear power amplifiers
// Copyright (C) 2026 nlbeam contributors
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

#ifndef NLBEAM_LINK_METRICS_HPP
#define NLBEAM_LINK_METRICS_HPP

#include "nlbeam/channel.hpp"
#include "nlbeam/distortion.hpp"
#include "nlbeam/pa_model.hpp"

namespace nlbeam
{

// Noise, bandwidth and the PA power budget. All powers are linear in
// `unit` (dBm conversion happens at the config boundary only).
struct LinkBudget
{
    double noise_power = dbm_to_mw(-105.0);   // sigma_n^2
    double bandwidth_hz = 1.0e9;              // BW
    double pa_max_output = dbm_to_mw(6.0);    // P_max
    double pa_max_efficiency = 0.3;           // eta_max in (0, 1]
    double consumed_power_cap = arma::datum::inf; // P_0
    PowerUnit unit = PowerUnit::milliwatt;
};

void validate(const LinkBudget &b);

// Worst-case spectral efficiency treating the distortion as Gaussian noise:
//   SE = log2 det(I + (H C_d H^H + sigma^2 I)^{-1} H Ctilde_u H^H)
// with Ctilde_u = Gbar C_u Gbar^H and C_d from the distortion closed form.
double spectral_efficiency(const arma::cx_mat &h, const HermitianCov &cu,
                           const PACoefficients &pa, double noise_power);

// Single-RF closed form over the effective channel ht = H a_t(aod_max):
//   log2 det(I + (ht ht^H gbar_d(P/Nt) + (sigma^2/P) I)^{-1} ht ht^H gbar_s(P/Nt))
// Returns 0 at P = 0.
double se_single_rf(double total_input_power, const ChannelRealization &ch,
                    const PACoefficients &pa, double noise_power);

// Rank-one lower bound log2(1 + gbar_s / (gbar_d + sigma^2/(delta P))),
// tight when the channel has a single path.
double se_lower_bound(double total_input_power, const ChannelRealization &ch,
                      const PACoefficients &pa, double noise_power);

struct BeampatternResult
{
    arma::vec values;      // max-normalized a^H C a over the grid
    bool all_zero = false; // C had no radiated power; values left at zero
};

// Radiated power versus angle, G(phi) = a(phi)^H C a(phi), normalized by
// its maximum over the grid.
BeampatternResult beampattern(const HermitianCov &c, const ArrayGeometry &g,
                              const arma::vec &angles_rad);

arma::vec default_beampattern_grid(arma::uword n_points = 1024);

// P_rad,n = [Ctilde_u]_nn + [C_d]_nn
arma::vec radiated_power_per_branch(const HermitianCov &ctu, const HermitianCov &cd);

// Consumed power of one PA, (sqrt(P_max)/eta_max) * sqrt(P_rad,n).
double consumed_power(double radiated_power, const LinkBudget &budget);

// eta(P_n) = P_rad,n / P_cons,n = eta_max * sqrt(P_rad,n / P_max); 0 at P_rad = 0.
double pa_efficiency(double radiated_power, const LinkBudget &budget);

// EE = BW * SE / P_cons in bits/J; consumed power converted to watts from
// the budget's unit. Throws when consumed_total <= 0.
double energy_efficiency(double se, double consumed_total, const LinkBudget &budget);

// Total consumed power of the equal-split single-RF transmitter:
//   (sqrt(P_max)/eta_max) * sqrt((gbar_s + gbar_d)(P/Nt) * P * Nt)
// Strictly increasing in P.
double consumed_power_single_rf(double total_input_power, arma::uword n_t,
                                const PACoefficients &pa, const LinkBudget &budget);

struct LinkMetricsReport
{
    double se_bits_per_s_hz = 0.0;
    arma::vec radiated_per_branch;
    arma::vec consumed_per_branch;
    arma::vec pa_efficiency_per_branch;
    double consumed_total = 0.0;
    double ee_bits_per_joule = 0.0;
};

// Full per-link evaluation used by the sweep driver: SE via the general
// determinant form plus the PA power accounting for the given C_u.
LinkMetricsReport link_metrics_report(const arma::cx_mat &h, const HermitianCov &cu,
                                      const PACoefficients &pa, const LinkBudget &budget);

} // namespace nlbeam

#endif
