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

#include "nlbeam/link_metrics.hpp"

#include <stdexcept>

namespace nlbeam
{

void validate(const LinkBudget &b)
{
    if (!(b.noise_power > 0.0) || !std::isfinite(b.noise_power))
        throw std::invalid_argument("LinkBudget: noise_power must be positive");
    if (!(b.bandwidth_hz > 0.0) || !std::isfinite(b.bandwidth_hz))
        throw std::invalid_argument("LinkBudget: bandwidth_hz must be positive");
    if (!(b.pa_max_output > 0.0) || !std::isfinite(b.pa_max_output))
        throw std::invalid_argument("LinkBudget: pa_max_output must be positive");
    if (!(b.pa_max_efficiency > 0.0) || b.pa_max_efficiency > 1.0)
        throw std::invalid_argument("LinkBudget: pa_max_efficiency must be in (0, 1]");
    if (!(b.consumed_power_cap > 0.0))
        throw std::invalid_argument("LinkBudget: consumed_power_cap must be positive");
}

namespace
{

// log2 det(I + A^{-1} S) = (logdet(A + S) - logdet(A)) / log 2, both
// factors Hermitian positive definite. Keeps the determinant real and the
// difference nonnegative for S PSD.
double log2_det_ratio(const arma::cx_mat &a, const arma::cx_mat &s)
{
    const arma::cx_mat ah = (a + a.t()) / 2.0;
    const arma::cx_mat bh = ah + (s + s.t()) / 2.0;

    double val_a = 0.0;
    double val_b = 0.0;
    if (!arma::log_det_sympd(val_a, ah))
        throw std::runtime_error("spectral efficiency: interference-plus-noise matrix not PD");
    if (!arma::log_det_sympd(val_b, bh))
        throw std::runtime_error("spectral efficiency: signal-plus-interference matrix not PD");

    return std::max(0.0, (val_b - val_a) / std::log(2.0));
}

struct TransmitStats
{
    HermitianCov ctu; // Gbar C_u Gbar^H
    HermitianCov cd;  // distortion covariance
};

TransmitStats transmit_stats(const HermitianCov &cu, const PACoefficients &pa)
{
    const BussgangGain g = bussgang_gains(cu.branch_powers(), pa);
    arma::cx_mat ctu = cu.matrix();
    const arma::uword n = cu.size();
    for (arma::uword j = 0; j < n; ++j)
        for (arma::uword i = 0; i < n; ++i)
            ctu(i, j) *= g.per_branch_gain(i) * std::conj(g.per_branch_gain(j));

    return TransmitStats{HermitianCov(std::move(ctu)), distortion_covariance(cu, pa)};
}

} // namespace

double spectral_efficiency(const arma::cx_mat &h, const HermitianCov &cu,
                           const PACoefficients &pa, double noise_power)
{
    if (!(noise_power > 0.0))
        throw std::invalid_argument("spectral_efficiency: noise power must be positive");
    if (h.n_cols != cu.size())
        throw std::invalid_argument("spectral_efficiency: channel/covariance dimension mismatch");

    const TransmitStats tx = transmit_stats(cu, pa);

    arma::cx_mat a = h * tx.cd.matrix() * h.t();
    a.diag() += noise_power;
    const arma::cx_mat s = h * tx.ctu.matrix() * h.t();

    return log2_det_ratio(a, s);
}

double se_single_rf(double total_input_power, const ChannelRealization &ch,
                    const PACoefficients &pa, double noise_power)
{
    if (total_input_power < 0.0 || !std::isfinite(total_input_power))
        throw std::invalid_argument("se_single_rf: input power must be >= 0 and finite");
    if (!(noise_power > 0.0))
        throw std::invalid_argument("se_single_rf: noise power must be positive");
    if (total_input_power == 0.0)
        return 0.0;

    const double n_t = static_cast<double>(ch.tx_geometry.num_elements);
    const double p_branch = total_input_power / n_t;
    const double gs = gbar_s(p_branch, pa);
    const double gd = gbar_d(p_branch, pa);

    const arma::cx_vec ht = effective_channel(ch);
    const arma::cx_mat outer = ht * ht.t();

    arma::cx_mat a = gd * outer;
    a.diag() += noise_power / total_input_power;

    return log2_det_ratio(a, gs * outer);
}

double se_lower_bound(double total_input_power, const ChannelRealization &ch,
                      const PACoefficients &pa, double noise_power)
{
    if (total_input_power < 0.0 || !std::isfinite(total_input_power))
        throw std::invalid_argument("se_lower_bound: input power must be >= 0 and finite");
    if (!(noise_power > 0.0))
        throw std::invalid_argument("se_lower_bound: noise power must be positive");
    if (total_input_power == 0.0)
        return 0.0;

    const double n_t = static_cast<double>(ch.tx_geometry.num_elements);
    const double p_branch = total_input_power / n_t;
    const double delta = effective_channel_gain(ch);
    if (delta <= 0.0)
        return 0.0;

    const double gs = gbar_s(p_branch, pa);
    const double gd = gbar_d(p_branch, pa);
    return std::log2(1.0 + gs / (gd + noise_power / (delta * total_input_power)));
}

arma::vec default_beampattern_grid(arma::uword n_points)
{
    arma::vec grid(n_points);
    for (arma::uword i = 0; i < n_points; ++i)
        grid(i) = -pi / 2.0 + pi * static_cast<double>(i) / static_cast<double>(n_points);
    return grid;
}

BeampatternResult beampattern(const HermitianCov &c, const ArrayGeometry &g,
                              const arma::vec &angles_rad)
{
    if (angles_rad.is_empty())
        throw std::invalid_argument("beampattern: empty angle grid");
    if (c.size() != g.num_elements)
        throw std::invalid_argument("beampattern: covariance/geometry dimension mismatch");

    BeampatternResult out;
    out.values.set_size(angles_rad.n_elem);
    for (arma::uword i = 0; i < angles_rad.n_elem; ++i)
    {
        const arma::cx_vec a = array_response(angles_rad(i), g);
        out.values(i) = std::real(arma::cdot(a, c.matrix() * a));
    }

    const double peak = out.values.max();
    if (peak <= 0.0)
    {
        out.values.zeros();
        out.all_zero = true;
        return out;
    }
    out.values /= peak;
    return out;
}

arma::vec radiated_power_per_branch(const HermitianCov &ctu, const HermitianCov &cd)
{
    if (ctu.size() != cd.size())
        throw std::invalid_argument("radiated_power_per_branch: dimension mismatch");
    return ctu.branch_powers() + cd.branch_powers();
}

double consumed_power(double radiated_power, const LinkBudget &budget)
{
    if (radiated_power < 0.0 || !std::isfinite(radiated_power))
        throw std::invalid_argument("consumed_power: radiated power must be >= 0 and finite");
    return std::sqrt(budget.pa_max_output) / budget.pa_max_efficiency * std::sqrt(radiated_power);
}

double pa_efficiency(double radiated_power, const LinkBudget &budget)
{
    if (radiated_power < 0.0 || !std::isfinite(radiated_power))
        throw std::invalid_argument("pa_efficiency: radiated power must be >= 0 and finite");
    return budget.pa_max_efficiency * std::sqrt(radiated_power / budget.pa_max_output);
}

static double to_watt(double power, PowerUnit unit)
{
    return unit == PowerUnit::milliwatt ? power * 1e-3 : power;
}

double energy_efficiency(double se, double consumed_total, const LinkBudget &budget)
{
    if (!(consumed_total > 0.0))
        throw std::invalid_argument("energy_efficiency: consumed power must be positive");
    return budget.bandwidth_hz * se / to_watt(consumed_total, budget.unit);
}

double consumed_power_single_rf(double total_input_power, arma::uword n_t,
                                const PACoefficients &pa, const LinkBudget &budget)
{
    if (total_input_power < 0.0 || !std::isfinite(total_input_power))
        throw std::invalid_argument("consumed_power_single_rf: input power must be >= 0");
    if (n_t < 1)
        throw std::invalid_argument("consumed_power_single_rf: n_t must be >= 1");
    if (total_input_power == 0.0)
        return 0.0;

    const double p_branch = total_input_power / static_cast<double>(n_t);
    const double rad = (gbar_s(p_branch, pa) + gbar_d(p_branch, pa)) * total_input_power *
                       static_cast<double>(n_t);
    return std::sqrt(budget.pa_max_output) / budget.pa_max_efficiency * std::sqrt(rad);
}

LinkMetricsReport link_metrics_report(const arma::cx_mat &h, const HermitianCov &cu,
                                      const PACoefficients &pa, const LinkBudget &budget)
{
    validate(budget);

    const TransmitStats tx = transmit_stats(cu, pa);

    arma::cx_mat a = h * tx.cd.matrix() * h.t();
    a.diag() += budget.noise_power;
    const arma::cx_mat s = h * tx.ctu.matrix() * h.t();

    LinkMetricsReport rep;
    rep.se_bits_per_s_hz = log2_det_ratio(a, s);
    rep.radiated_per_branch = radiated_power_per_branch(tx.ctu, tx.cd);

    const arma::uword n = rep.radiated_per_branch.n_elem;
    rep.consumed_per_branch.set_size(n);
    rep.pa_efficiency_per_branch.set_size(n);
    KahanSum total;
    for (arma::uword i = 0; i < n; ++i)
    {
        const double rad = std::max(0.0, rep.radiated_per_branch(i));
        rep.consumed_per_branch(i) = consumed_power(rad, budget);
        rep.pa_efficiency_per_branch(i) = pa_efficiency(rad, budget);
        total.add(rep.consumed_per_branch(i));
    }
    rep.consumed_total = total.sum;
    rep.ee_bits_per_joule = rep.consumed_total > 0.0
                                ? energy_efficiency(rep.se_bits_per_s_hz, rep.consumed_total, budget)
                                : 0.0;
    return rep;
}

} // namespace nlbeam
