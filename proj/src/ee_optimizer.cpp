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

#include "nlbeam/ee_optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace nlbeam
{

const char *to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::digital:
        return "digital";
    case Scheme::analog:
        return "analog";
    case Scheme::hybrid:
        return "hybrid";
    case Scheme::quantized_analog:
        return "quantized_analog";
    }
    return "unknown";
}

std::optional<Scheme> scheme_from_string(const std::string &name)
{
    if (name == "digital")
        return Scheme::digital;
    if (name == "analog")
        return Scheme::analog;
    if (name == "hybrid")
        return Scheme::hybrid;
    if (name == "quantized_analog")
        return Scheme::quantized_analog;
    return std::nullopt;
}

namespace
{

double dbm_to_unit(double dbm, PowerUnit unit)
{
    const double mw = dbm_to_mw(dbm);
    return unit == PowerUnit::milliwatt ? mw : mw * 1e-3;
}

constexpr std::uint64_t frozen_shadowing_stream = 0xF7025EEDull;
constexpr std::uint64_t crosstalk_stream = 1;

struct EeObjective
{
    const ChannelRealization &ch;
    const PACoefficients &pa;
    const LinkBudget &budget;
    arma::uword n_t;

    double pcons(double p) const { return consumed_power_single_rf(p, n_t, pa, budget); }

    double ee(double p) const
    {
        const double c = pcons(p);
        if (!(c > 0.0))
            return 0.0;
        return energy_efficiency(se_single_rf(p, ch, pa, budget.noise_power), c, budget);
    }
};

// EE as a function of x = log10(P).
double ee_at(const EeObjective &obj, double x) { return obj.ee(std::pow(10.0, x)); }

} // namespace

P2Solution solve_p2(const ChannelRealization &ch, const PACoefficients &pa,
                    const LinkBudget &budget, std::pair<double, double> p_bounds_dbm,
                    bool newton_refine)
{
    validate(budget);
    validate(pa);
    if (!std::isfinite(p_bounds_dbm.first) || !std::isfinite(p_bounds_dbm.second) ||
        !(p_bounds_dbm.first < p_bounds_dbm.second))
        throw std::invalid_argument("solve_p2: need finite bounds with lower < upper");

    const EeObjective obj{ch, pa, budget, ch.tx_geometry.num_elements};

    const double p_lo = dbm_to_unit(p_bounds_dbm.first, budget.unit);
    const double p_hi = dbm_to_unit(p_bounds_dbm.second, budget.unit);

    P2Solution sol;

    if (obj.pcons(p_lo) > budget.consumed_power_cap)
    {
        sol.feasible = false;
        sol.p_star = sol.ee_star = sol.se_at_star = sol.pcons_at_star =
            std::numeric_limits<double>::quiet_NaN();
        return sol;
    }

    // Feasibility boundary: pcons is strictly increasing, so the cap (when
    // active inside the bounds) is a unique bisection root.
    double p_ub = p_hi;
    bool cap_active = false;
    if (obj.pcons(p_hi) > budget.consumed_power_cap)
    {
        cap_active = true;
        double lo = p_lo, hi = p_hi;
        while ((hi - lo) > 1e-9 * hi)
        {
            const double mid = 0.5 * (lo + hi);
            if (obj.pcons(mid) > budget.consumed_power_cap)
                hi = mid;
            else
                lo = mid;
        }
        p_ub = lo;
    }

    const double x_lo = std::log10(p_lo);
    const double x_ub = std::log10(p_ub);

    // Coarse pre-scan picks the bracket; EE can have flat shoulders and the
    // scan keeps golden section inside the right basin.
    constexpr int scan_points = 64;
    double best_x = x_lo;
    double best_val = -1.0;
    for (int i = 0; i < scan_points; ++i)
    {
        const double x = x_lo + (x_ub - x_lo) * static_cast<double>(i) /
                                    static_cast<double>(scan_points - 1);
        const double v = ee_at(obj, x);
        if (v > best_val)
        {
            best_val = v;
            best_x = x;
        }
    }
    const double step = (x_ub - x_lo) / static_cast<double>(scan_points - 1);
    double a = std::max(x_lo, best_x - step);
    double b = std::min(x_ub, best_x + step);

    // Golden section on log10 P.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c1 = b - gr * (b - a);
    double c2 = a + gr * (b - a);
    double f1 = ee_at(obj, c1);
    double f2 = ee_at(obj, c2);
    while ((b - a) > 1e-12)
    {
        if (f1 < f2)
        {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = ee_at(obj, c2);
        }
        else
        {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = ee_at(obj, c1);
        }
    }
    double x_star = 0.5 * (a + b);
    double ee_star = ee_at(obj, x_star);

    if (newton_refine)
    {
        // Guarded polish on the log-domain derivative; kept only when it
        // stays bracketed and actually improves.
        const double h = 1e-6;
        double x = x_star;
        for (int it = 0; it < 4; ++it)
        {
            const double fp = ee_at(obj, x + h);
            const double fm = ee_at(obj, x - h);
            const double f0 = ee_at(obj, x);
            const double d1 = (fp - fm) / (2.0 * h);
            const double d2 = (fp - 2.0 * f0 + fm) / (h * h);
            if (!(d2 < 0.0))
                break;
            const double x_next = x - d1 / d2;
            if (!(x_next > x_lo) || !(x_next < x_ub))
                break;
            if (ee_at(obj, x_next) < f0)
                break;
            x = x_next;
        }
        if (ee_at(obj, x) > ee_star)
        {
            x_star = x;
            ee_star = ee_at(obj, x_star);
        }
    }

    // The cap boundary competes with the interior stationary point.
    if (cap_active)
    {
        const double ee_boundary = ee_at(obj, x_ub);
        if (ee_boundary >= ee_star)
        {
            x_star = x_ub;
            ee_star = ee_boundary;
        }
    }

    sol.p_star = std::pow(10.0, x_star);
    sol.se_at_star = se_single_rf(sol.p_star, ch, pa, budget.noise_power);
    sol.pcons_at_star = obj.pcons(sol.p_star);
    sol.ee_star = ee_star;
    sol.on_constraint_boundary = cap_active && (std::abs(x_star - x_ub) <= 2e-12);
    return sol;
}

ChannelRealization sweep_channel(const SweepSpec &spec, arma::uword n_t,
                                 arma::uword channel_index)
{
    const ArrayGeometry tx{n_t, spec.tx_spacing};
    const ArrayGeometry rx{spec.n_r, spec.rx_spacing};

    PathLossModel pl = spec.pathloss;
    switch (spec.shadowing)
    {
    case ShadowingMode::disabled:
        pl.shadowing_std_db = 0.0;
        break;
    case ShadowingMode::per_channel:
        break; // drawn inside generate_channel
    case ShadowingMode::frozen:
        pl.fixed_db += draw_shadowing_db(mix_seed(spec.base_seed, frozen_shadowing_stream),
                                         pl.shadowing_std_db);
        pl.shadowing_std_db = 0.0;
        break;
    }

    return generate_channel(mix_seed(spec.base_seed, channel_index), spec.n_paths, tx, rx, pl,
                            spec.angles);
}

namespace
{

Beamformer build_scheme(const SweepSpec &spec, Scheme scheme, const ChannelRealization &ch,
                        double p)
{
    switch (scheme)
    {
    case Scheme::analog:
        return analog_aod(ch, spec.n_rf, spec.n_s, p);
    case Scheme::quantized_analog:
        return quantize_phases(analog_aod(ch, spec.n_rf, spec.n_s, p), spec.quantization_bits);
    case Scheme::digital:
        return digital_eigen(ch, spec.n_s, p, spec.digital_allocation,
                             spec.budget.noise_power);
    case Scheme::hybrid:
        return hybrid_omp(ch, spec.n_rf, spec.n_s, p, default_dictionary(spec.dictionary_size));
    }
    throw std::invalid_argument("sweep: unknown scheme");
}

void evaluate_row(const SweepSpec &spec, SweepRow &row)
{
    KahanSum se_sum, pcons_sum, ee_sum;
    const double p = dbm_to_unit(row.p_dbm, spec.budget.unit);

    for (arma::uword c = 0; c < spec.n_channels; ++c)
    {
        const ChannelRealization ch = sweep_channel(spec, row.n_t, c);

        double se = 0.0, pcons = 0.0, ee = 0.0;
        if (spec.single_rf_closed_form)
        {
            if (row.scheme != Scheme::analog || spec.n_rf != 1)
                throw std::invalid_argument(
                    "sweep: the single-RF closed form applies to the analog scheme with "
                    "n_rf = 1 only");
            if (spec.crosstalk)
                throw std::invalid_argument(
                    "sweep: crosstalk requires the general evaluation path");
            se = se_single_rf(p, ch, spec.pa, spec.budget.noise_power);
            pcons = consumed_power_single_rf(p, row.n_t, spec.pa, spec.budget);
            ee = pcons > 0.0 ? energy_efficiency(se, pcons, spec.budget) : 0.0;
        }
        else
        {
            const Beamformer bf = build_scheme(spec, row.scheme, ch, p);
            HermitianCov cu = bf.covariance();
            if (spec.crosstalk && spec.crosstalk->sigma_ct_sq > 0.0)
            {
                const CrosstalkMatrix b =
                    sample_crosstalk(mix_seed(mix_seed(spec.base_seed, c), crosstalk_stream),
                                     row.n_t, spec.crosstalk->sigma_ct_sq, spec.crosstalk->model);
                cu = apply_crosstalk(cu, b);
            }
            const LinkMetricsReport rep = link_metrics_report(ch.h, cu, spec.pa, spec.budget);
            se = rep.se_bits_per_s_hz;
            pcons = rep.consumed_total;
            ee = rep.ee_bits_per_joule;
        }

        se_sum.add(se);
        pcons_sum.add(pcons);
        ee_sum.add(ee);
    }

    const double inv = 1.0 / static_cast<double>(spec.n_channels);
    row.se = se_sum.sum * inv;
    row.pcons = pcons_sum.sum * inv;
    row.ee = ee_sum.sum * inv;
}

} // namespace

std::vector<SweepRow> sweep(const SweepSpec &spec, unsigned n_threads)
{
    if (spec.p_dbm.empty() || spec.n_t.empty() || spec.schemes.empty())
        throw std::invalid_argument("sweep: empty grid");
    if (spec.n_channels < 1)
        throw std::invalid_argument("sweep: n_channels must be >= 1");
    validate(spec.budget);
    validate(spec.pa);

    const std::size_t n_rows = spec.n_t.size() * spec.schemes.size() * spec.p_dbm.size();
    std::vector<SweepRow> rows(n_rows);

    // Grid order: n_t, then scheme, then power (power innermost).
    std::size_t idx = 0;
    for (arma::uword nt : spec.n_t)
        for (Scheme scheme : spec.schemes)
            for (double p_dbm : spec.p_dbm)
            {
                SweepRow &row = rows[idx++];
                row.p_dbm = p_dbm;
                row.n_t = nt;
                row.n_s = spec.n_s;
                row.n_rf = scheme == Scheme::digital ? nt : spec.n_rf;
                row.scheme = scheme;
                row.seed = spec.base_seed;
            }

    parallel_for(n_rows, n_threads, [&](std::size_t i) {
        try
        {
            evaluate_row(spec, rows[i]);
        }
        catch (const std::exception &e)
        {
            rows[i].ok = false;
            rows[i].error = e.what();
            rows[i].se = rows[i].pcons = rows[i].ee = std::numeric_limits<double>::quiet_NaN();
        }
    });

    return rows;
}

} // namespace nlbeam
