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

#ifndef NLBEAM_EE_OPTIMIZER_HPP
#define NLBEAM_EE_OPTIMIZER_HPP

#include "nlbeam/beamformers.hpp"
#include "nlbeam/link_metrics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nlbeam
{

struct P2Solution
{
    double p_star = 0.0;        // optimal total input power (budget unit)
    double ee_star = 0.0;       // bits/J
    double se_at_star = 0.0;    // bits/s/Hz
    double pcons_at_star = 0.0; // budget unit
    bool on_constraint_boundary = false;
    bool feasible = true;
};

// Maximizes EE(P) = BW * SE(P) / Pcons(P) for the single-RF transmitter
// over P in [lo, hi] dBm, restricted to Pcons(P) <= P_0. Pcons is strictly
// increasing, so the feasibility boundary P_ub is found by bisection; the
// maximization runs a 64-point log-spaced pre-scan followed by golden
// section on log10(P), with an optional guarded Newton polish.
P2Solution solve_p2(const ChannelRealization &ch, const PACoefficients &pa,
                    const LinkBudget &budget, std::pair<double, double> p_bounds_dbm,
                    bool newton_refine = true);

enum class Scheme
{
    digital,
    analog,
    hybrid,
    quantized_analog
};

const char *to_string(Scheme s);
std::optional<Scheme> scheme_from_string(const std::string &name);

enum class ShadowingMode
{
    disabled,    // zeta = 0
    per_channel, // fresh draw for every realization
    frozen       // one draw from the base seed, shared by all realizations
};

struct CrosstalkSpec
{
    CrosstalkModel model = CrosstalkModel::identity_plus_offdiag;
    double sigma_ct_sq = 0.0;
};

// One grid axis per field; rows come out in (n_t, scheme, p) order with p
// innermost. Every row averages its metrics over n_channels realizations
// whose seeds derive only from (base_seed, channel index), so the same
// channels pair up across n_t, scheme and power.
struct SweepSpec
{
    std::vector<double> p_dbm;
    std::vector<arma::uword> n_t;
    std::vector<Scheme> schemes;

    arma::uword n_r = 16;
    arma::uword n_rf = 1;
    arma::uword n_s = 1;
    arma::uword n_paths = 5;
    double tx_spacing = 0.5;
    double rx_spacing = 0.5;

    PathLossModel pathloss;
    AngleDistribution angles;
    ShadowingMode shadowing = ShadowingMode::disabled;

    PACoefficients pa;
    LinkBudget budget;

    std::uint64_t base_seed = 1;
    arma::uword n_channels = 1;

    std::optional<CrosstalkSpec> crosstalk;
    unsigned quantization_bits = 4;
    arma::uword dictionary_size = 256;
    PowerAllocation digital_allocation = PowerAllocation::equal;

    // Evaluate through the single-RF closed forms instead of the general
    // determinant pipeline (valid for the analog scheme with n_rf = 1;
    // the two routes agree and the consistency tests pin that down).
    bool single_rf_closed_form = false;
};

struct SweepRow
{
    double p_dbm = 0.0;
    arma::uword n_t = 0;
    arma::uword n_s = 0;
    arma::uword n_rf = 0;
    Scheme scheme = Scheme::analog;
    double se = 0.0;    // bits/s/Hz, channel average
    double pcons = 0.0; // budget unit, channel average
    double ee = 0.0;    // bits/J, channel average
    std::uint64_t seed = 0;
    bool ok = true;
    std::string error;
};

// Rows are preallocated in grid order and filled independently, so the
// output does not depend on thread count. A failing grid point marks its
// row and the sweep continues.
std::vector<SweepRow> sweep(const SweepSpec &spec, unsigned n_threads);

// Channel for sweep point (base_seed, channel_index): seeds depend only on
// those two values.
ChannelRealization sweep_channel(const SweepSpec &spec, arma::uword n_t,
                                 arma::uword channel_index);

} // namespace nlbeam

#endif
