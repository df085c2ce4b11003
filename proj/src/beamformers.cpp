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

#include "nlbeam/beamformers.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace nlbeam
{

HermitianCov Beamformer::covariance() const
{
    const arma::cx_mat f = f_rf * f_bb;
    return HermitianCov(f * f.t());
}

void validate(const Beamformer &bf)
{
    if (bf.f_rf.n_cols != bf.f_bb.n_rows)
        throw std::invalid_argument("Beamformer: F_RF/F_BB dimension mismatch");
    if (!(bf.total_input_power >= 0.0))
        throw std::invalid_argument("Beamformer: negative input power");

    if (!bf.constant_modulus_waived)
    {
        const double want = 1.0 / std::sqrt(static_cast<double>(bf.n_t()));
        for (arma::uword j = 0; j < bf.f_rf.n_cols; ++j)
            for (arma::uword i = 0; i < bf.f_rf.n_rows; ++i)
                if (std::abs(std::abs(bf.f_rf(i, j)) - want) > 1e-12)
                    throw std::invalid_argument("Beamformer: F_RF entry violates constant modulus");
    }

    const double tr = arma::accu(arma::square(arma::abs(bf.f_rf * bf.f_bb)));
    const double scale = std::max(1.0, bf.total_input_power);
    if (std::abs(tr - bf.total_input_power) > 1e-9 * scale)
        throw std::invalid_argument("Beamformer: trace(C_u) does not match total input power");
}

// Path order by descending |psi|, ties to the lowest index.
static std::vector<arma::uword> paths_by_strength(const ChannelRealization &ch)
{
    std::vector<arma::uword> order(ch.n_paths);
    std::iota(order.begin(), order.end(), arma::uword{0});
    std::stable_sort(order.begin(), order.end(), [&](arma::uword a, arma::uword b) {
        return std::abs(ch.path_gains(a)) > std::abs(ch.path_gains(b));
    });
    return order;
}

Beamformer analog_aod(const ChannelRealization &ch, arma::uword n_rf, arma::uword n_s, double p)
{
    if (n_rf > ch.n_paths)
        throw std::invalid_argument("analog_aod: n_rf must not exceed the number of paths");
    if (n_s < 1 || n_s > n_rf)
        throw std::invalid_argument("analog_aod: need 1 <= n_s <= n_rf");
    if (!(p >= 0.0) || !std::isfinite(p))
        throw std::invalid_argument("analog_aod: input power must be >= 0 and finite");

    const auto order = paths_by_strength(ch);

    Beamformer bf;
    bf.f_rf.set_size(ch.tx_geometry.num_elements, n_rf);
    for (arma::uword j = 0; j < n_rf; ++j)
        bf.f_rf.col(j) = array_response(ch.aod[order[j]], ch.tx_geometry);

    // Scaled identity block: every used column carries p/n_s, which gives
    // an exactly equal per-branch power split p/N_t for any n_s.
    bf.f_bb.zeros(n_rf, n_s);
    const double c = std::sqrt(p / static_cast<double>(n_s));
    for (arma::uword j = 0; j < n_s; ++j)
        bf.f_bb(j, j) = c;

    bf.total_input_power = p;
    return bf;
}

Beamformer digital_eigen(const ChannelRealization &ch, arma::uword n_s, double p,
                         PowerAllocation alloc, double noise_power)
{
    if (n_s < 1)
        throw std::invalid_argument("digital_eigen: n_s must be >= 1");
    if (!(p >= 0.0) || !std::isfinite(p))
        throw std::invalid_argument("digital_eigen: input power must be >= 0 and finite");

    arma::cx_mat u_svd, v_svd;
    arma::vec svals;
    if (!arma::svd_econ(u_svd, svals, v_svd, ch.h))
        throw std::runtime_error("digital_eigen: SVD failed");

    const double rank_tol =
        svals.is_empty() ? 0.0
                         : svals.max() * static_cast<double>(std::max(ch.h.n_rows, ch.h.n_cols)) *
                               std::numeric_limits<double>::epsilon();
    const arma::uword rank = arma::sum(svals > rank_tol);
    if (n_s > rank)
        throw std::invalid_argument("digital_eigen: n_s exceeds the channel rank");

    arma::vec stream_power(n_s, arma::fill::value(p / static_cast<double>(n_s)));
    if (alloc == PowerAllocation::waterfilling)
    {
        if (!(noise_power > 0.0))
            throw std::invalid_argument("digital_eigen: waterfilling requires noise_power > 0");
        // Classical level fill on the linear-PA effective gains s_i^2/noise.
        arma::vec inv_gain(n_s);
        for (arma::uword i = 0; i < n_s; ++i)
            inv_gain(i) = noise_power / (svals(i) * svals(i));
        arma::uword active = n_s;
        while (active > 0)
        {
            const double level =
                (p + arma::sum(inv_gain.head(active))) / static_cast<double>(active);
            if (level > inv_gain(active - 1))
            {
                stream_power.zeros();
                for (arma::uword i = 0; i < active; ++i)
                    stream_power(i) = level - inv_gain(i);
                break;
            }
            --active;
        }
    }

    Beamformer bf;
    bf.f_rf.eye(ch.tx_geometry.num_elements, ch.tx_geometry.num_elements);
    bf.f_bb.set_size(ch.tx_geometry.num_elements, n_s);
    for (arma::uword i = 0; i < n_s; ++i)
        bf.f_bb.col(i) = v_svd.col(i) * std::sqrt(stream_power(i));
    bf.total_input_power = p;
    bf.constant_modulus_waived = true;
    return bf;
}

Beamformer quantize_phases(const Beamformer &bf, unsigned bits)
{
    if (bits < 1)
        throw std::invalid_argument("quantize_phases: bits must be >= 1");

    const double step = 2.0 * pi / std::pow(2.0, static_cast<double>(bits));

    Beamformer out = bf;
    for (arma::uword j = 0; j < out.f_rf.n_cols; ++j)
        for (arma::uword i = 0; i < out.f_rf.n_rows; ++i)
        {
            const cx z = out.f_rf(i, j);
            const double phase = std::round(std::arg(z) / step) * step;
            out.f_rf(i, j) = std::polar(std::abs(z), phase);
        }

    const double tr = arma::accu(arma::square(arma::abs(out.f_rf * out.f_bb)));
    if (tr > 0.0)
        out.f_bb *= std::sqrt(bf.total_input_power / tr);
    return out;
}

arma::vec default_dictionary(arma::uword n_points)
{
    // Uniform in sin(angle) over [-1, 1).
    arma::vec d(n_points);
    for (arma::uword i = 0; i < n_points; ++i)
        d(i) = std::asin(-1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n_points));
    return d;
}

Beamformer hybrid_omp(const ChannelRealization &ch, arma::uword n_rf, arma::uword n_s, double p,
                      const arma::vec &dictionary_angles_rad)
{
    if (n_s < 1 || n_s > n_rf)
        throw std::invalid_argument("hybrid_omp: need 1 <= n_s <= n_rf");
    if (dictionary_angles_rad.is_empty())
        throw std::invalid_argument("hybrid_omp: empty dictionary");
    if (dictionary_angles_rad.n_elem < n_rf)
        throw std::invalid_argument("hybrid_omp: dictionary smaller than n_rf");
    if (!(p >= 0.0) || !std::isfinite(p))
        throw std::invalid_argument("hybrid_omp: input power must be >= 0 and finite");

    // Target: unit-power optimal digital precoder (top right singular vectors).
    const Beamformer digital = digital_eigen(ch, n_s, static_cast<double>(n_s), // unit per stream
                                             PowerAllocation::equal);
    const arma::cx_mat f_opt = digital.f_bb;

    arma::cx_mat dict(ch.tx_geometry.num_elements, dictionary_angles_rad.n_elem);
    for (arma::uword j = 0; j < dict.n_cols; ++j)
        dict.col(j) = array_response(dictionary_angles_rad(j), ch.tx_geometry);

    arma::cx_mat f_rf(ch.tx_geometry.num_elements, 0);
    arma::cx_mat f_bb;
    arma::cx_mat residual = f_opt;
    std::vector<bool> used(dict.n_cols, false);

    for (arma::uword it = 0; it < n_rf; ++it)
    {
        const arma::cx_mat corr = dict.t() * residual;
        arma::uword best = 0;
        double best_energy = -1.0;
        for (arma::uword j = 0; j < dict.n_cols; ++j)
        {
            if (used[j])
                continue;
            const double e = arma::accu(arma::square(arma::abs(corr.row(j))));
            if (e > best_energy) // strict: ties keep the lowest index
            {
                best_energy = e;
                best = j;
            }
        }
        used[best] = true;
        f_rf = arma::join_rows(f_rf, dict.col(best));

        f_bb = arma::solve(f_rf, f_opt);
        residual = f_opt - f_rf * f_bb;
        const double rn = arma::norm(residual, "fro");
        if (rn > 0.0)
            residual /= rn;
    }

    Beamformer bf;
    bf.f_rf = std::move(f_rf);
    const double tr = arma::accu(arma::square(arma::abs(bf.f_rf * f_bb)));
    bf.f_bb = tr > 0.0 ? arma::cx_mat(f_bb * std::sqrt(p / tr)) : f_bb;
    bf.total_input_power = p;
    return bf;
}

} // namespace nlbeam
