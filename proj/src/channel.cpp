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

#include "nlbeam/channel.hpp"

#include <stdexcept>

namespace nlbeam
{

void validate(const ArrayGeometry &g)
{
    if (g.num_elements < 1)
        throw std::invalid_argument("ArrayGeometry: num_elements must be >= 1");
    if (!(g.spacing > 0.0) || !std::isfinite(g.spacing))
        throw std::invalid_argument("ArrayGeometry: spacing must be positive and finite");
}

void validate(const PathLossModel &pl)
{
    if (!(pl.distance_m > 0.0) || !std::isfinite(pl.distance_m))
        throw std::invalid_argument("PathLossModel: distance_m must be positive and finite");
    if (pl.shadowing_std_db < 0.0 || !std::isfinite(pl.shadowing_std_db))
        throw std::invalid_argument("PathLossModel: shadowing_std_db must be >= 0 and finite");
    if (!std::isfinite(pl.fixed_db) || !std::isfinite(pl.slope_db_per_decade))
        throw std::invalid_argument("PathLossModel: attenuation terms must be finite");
}

void validate(const AngleDistribution &dist)
{
    if (!std::isfinite(dist.min_rad) || !std::isfinite(dist.max_rad))
        throw std::invalid_argument("AngleDistribution: bounds must be finite");
    if (!(dist.min_rad < dist.max_rad))
        throw std::invalid_argument("AngleDistribution: min_rad must be < max_rad");
    if (dist.kind == AngleDistribution::Kind::uniform_sine &&
        (dist.min_rad < -pi / 2.0 || dist.max_rad > pi / 2.0))
        throw std::invalid_argument(
            "AngleDistribution: sine-spaced sampling requires bounds within [-pi/2, pi/2]");
}

arma::cx_vec array_response(double angle_rad, const ArrayGeometry &g)
{
    validate(g);
    const double n = static_cast<double>(g.num_elements);
    const double phase_step = -2.0 * pi * g.spacing * std::sin(angle_rad);
    arma::cx_vec a(g.num_elements);
    for (arma::uword k = 0; k < g.num_elements; ++k)
        a(k) = std::polar(1.0 / std::sqrt(n), phase_step * static_cast<double>(k));
    return a;
}

static double sample_angle(Rng &rng, const AngleDistribution &dist)
{
    if (dist.kind == AngleDistribution::Kind::uniform_sine)
    {
        double s = rng.uniform(std::sin(dist.min_rad), std::sin(dist.max_rad));
        return std::asin(s);
    }
    return rng.uniform(dist.min_rad, dist.max_rad);
}

double draw_shadowing_db(std::uint64_t seed, double std_db)
{
    if (std_db < 0.0)
        throw std::invalid_argument("draw_shadowing_db: negative standard deviation");
    Rng rng(seed);
    return std_db * rng.gaussian();
}

ChannelRealization generate_channel(std::uint64_t seed, arma::uword n_paths,
                                    const ArrayGeometry &tx, const ArrayGeometry &rx,
                                    const PathLossModel &pl, const AngleDistribution &angles)
{
    if (n_paths < 1)
        throw std::invalid_argument("generate_channel: n_paths must be >= 1");
    validate(tx);
    validate(rx);
    validate(pl);
    validate(angles);

    Rng rng(seed);

    ChannelRealization ch;
    ch.tx_geometry = tx;
    ch.rx_geometry = rx;
    ch.n_paths = n_paths;
    ch.seed = seed;

    // Fixed draw order: shadowing, gains, AoDs, AoAs.
    if (pl.shadowing_std_db > 0.0)
        ch.shadowing_db = pl.shadowing_std_db * rng.gaussian();

    const double gain_variance = db_to_linear(-(pl.mean_path_loss_db() + ch.shadowing_db));

    ch.path_gains.set_size(n_paths);
    for (arma::uword l = 0; l < n_paths; ++l)
        ch.path_gains(l) = rng.cgauss(gain_variance);

    ch.aod.resize(n_paths);
    for (arma::uword l = 0; l < n_paths; ++l)
        ch.aod[l] = sample_angle(rng, angles);

    ch.aoa.resize(n_paths);
    for (arma::uword l = 0; l < n_paths; ++l)
        ch.aoa[l] = sample_angle(rng, angles);

    const double scale =
        std::sqrt(static_cast<double>(tx.num_elements) * static_cast<double>(rx.num_elements) /
                  static_cast<double>(n_paths));

    ch.h.zeros(rx.num_elements, tx.num_elements);
    for (arma::uword l = 0; l < n_paths; ++l)
        ch.h += ch.path_gains(l) * array_response(ch.aoa[l], rx) *
                array_response(ch.aod[l], tx).t();
    ch.h *= scale;

    return ch;
}

DominantPath dominant_path(const ChannelRealization &ch)
{
    if (ch.n_paths < 1)
        throw std::invalid_argument("dominant_path: empty channel");

    arma::uword best = 0;
    double best_gain = std::abs(ch.path_gains(0));
    for (arma::uword l = 1; l < ch.n_paths; ++l)
    {
        double g = std::abs(ch.path_gains(l));
        if (g > best_gain) // strict: ties keep the lowest index
        {
            best_gain = g;
            best = l;
        }
    }
    return DominantPath{ch.aod[best], ch.aoa[best], best};
}

arma::cx_vec effective_channel(const ChannelRealization &ch)
{
    const DominantPath dom = dominant_path(ch);
    return ch.h * array_response(dom.aod, ch.tx_geometry);
}

double effective_channel_gain(const ChannelRealization &ch)
{
    const DominantPath dom = dominant_path(ch);
    const arma::cx_vec ar = array_response(dom.aoa, ch.rx_geometry);
    const arma::cx_vec at = array_response(dom.aod, ch.tx_geometry);
    const cx inner = arma::cdot(ar, ch.h * at);
    return std::norm(inner);
}

} // namespace nlbeam
