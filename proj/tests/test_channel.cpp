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

#include <catch2/catch_amalgamated.hpp>

#include <cstring>

using namespace nlbeam;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

// Channel built directly from given per-path data, bypassing the sampler.
ChannelRealization manual_channel(const arma::cx_vec &gains, const std::vector<double> &aod,
                                  const std::vector<double> &aoa, arma::uword n_t,
                                  arma::uword n_r)
{
    ChannelRealization ch;
    ch.tx_geometry = {n_t, 0.5};
    ch.rx_geometry = {n_r, 0.5};
    ch.n_paths = gains.n_elem;
    ch.path_gains = gains;
    ch.aod = aod;
    ch.aoa = aoa;
    ch.h.zeros(n_r, n_t);
    for (arma::uword l = 0; l < ch.n_paths; ++l)
        ch.h += gains(l) * array_response(aoa[l], ch.rx_geometry) *
                array_response(aod[l], ch.tx_geometry).t();
    ch.h *= std::sqrt(static_cast<double>(n_t * n_r) / static_cast<double>(ch.n_paths));
    return ch;
}

const PathLossModel no_shadowing{86.6, 24.5, 0.0, 15.0};

} // namespace

TEST_CASE("broadside array response is uniform")
{
    const arma::cx_vec a = array_response(0.0, {4, 0.5});
    for (arma::uword k = 0; k < 4; ++k)
    {
        REQUIRE_THAT(a(k).real(), WithinRel(0.5, 1e-15));
        REQUIRE_THAT(a(k).imag(), WithinAbs(0.0, 1e-15));
    }
}

TEST_CASE("endfire response of a two-element array alternates sign")
{
    const arma::cx_vec a = array_response(pi / 2.0, {2, 0.5});
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    REQUIRE_THAT(a(0).real(), WithinRel(inv_sqrt2, 1e-15));
    REQUIRE_THAT(a(1).real(), WithinRel(-inv_sqrt2, 1e-12));
    REQUIRE_THAT(std::abs(a(1).imag()), WithinAbs(0.0, 1e-15));
}

TEST_CASE("array responses are unit norm")
{
    Rng rng(42);
    for (int i = 0; i < 1000; ++i)
    {
        const ArrayGeometry g{static_cast<arma::uword>(1 + (i % 64)), 0.5};
        const double angle = rng.uniform(-pi / 2.0, pi / 2.0);
        REQUIRE_THAT(arma::norm(array_response(angle, g)), WithinAbs(1.0, 1e-14));
    }
}

TEST_CASE("single-path channels have rank one")
{
    const ChannelRealization ch =
        generate_channel(7, 1, {8, 0.5}, {4, 0.5}, no_shadowing, AngleDistribution::uniform());
    REQUIRE(arma::rank(ch.h) == 1);
}

TEST_CASE("identical seeds give bit-identical realizations")
{
    const auto a =
        generate_channel(123, 5, {16, 0.5}, {16, 0.5}, no_shadowing, AngleDistribution::uniform());
    const auto b =
        generate_channel(123, 5, {16, 0.5}, {16, 0.5}, no_shadowing, AngleDistribution::uniform());
    REQUIRE(std::memcmp(a.h.memptr(), b.h.memptr(), a.h.n_elem * sizeof(cx)) == 0);
    REQUIRE(std::memcmp(a.path_gains.memptr(), b.path_gains.memptr(),
                        a.path_gains.n_elem * sizeof(cx)) == 0);
    REQUIRE(a.aod == b.aod);
    REQUIRE(a.aoa == b.aoa);

    const auto c =
        generate_channel(124, 5, {16, 0.5}, {16, 0.5}, no_shadowing, AngleDistribution::uniform());
    REQUIRE(arma::abs(a.h - c.h).max() > 0.0);
}

TEST_CASE("channel matrix reconstructs from its path data")
{
    for (arma::uword l : {1u, 2u, 3u, 4u, 5u, 6u, 7u, 8u})
        for (arma::uword nt : {2u, 16u, 64u})
        {
            const arma::uword nr = nt == 2 ? 64 : 4;
            const auto ch = generate_channel(1000 + l + nt, l, {nt, 0.5}, {nr, 0.5}, no_shadowing,
                                             AngleDistribution::uniform());
            arma::cx_mat rebuilt(nr, nt, arma::fill::zeros);
            for (arma::uword k = 0; k < l; ++k)
                rebuilt += ch.path_gains(k) * array_response(ch.aoa[k], ch.rx_geometry) *
                           array_response(ch.aod[k], ch.tx_geometry).t();
            rebuilt *= std::sqrt(static_cast<double>(nt * nr) / static_cast<double>(l));
            REQUIRE(arma::norm(ch.h - rebuilt, "fro") <= 1e-12 * arma::norm(ch.h, "fro"));
        }
}

TEST_CASE("mean channel energy matches the path loss")
{
    // E{||H||_F^2} = Nt*Nr*10^{-PL/10} without shadowing.
    const arma::uword nt = 2, nr = 2, l = 2;
    const double expect =
        static_cast<double>(nt * nr) * db_to_linear(-no_shadowing.mean_path_loss_db());

    KahanSum acc;
    const int n_seeds = 100000;
    for (int s = 0; s < n_seeds; ++s)
    {
        const auto ch = generate_channel(mix_seed(5, s), l, {nt, 0.5}, {nr, 0.5}, no_shadowing,
                                         AngleDistribution::uniform());
        acc.add(std::pow(arma::norm(ch.h, "fro"), 2));
    }
    const double mean = acc.sum / n_seeds;
    REQUIRE_THAT(mean, WithinRel(expect, 0.01));
}

TEST_CASE("shadowing shifts the drawn gain variance")
{
    PathLossModel pl = no_shadowing;
    pl.shadowing_std_db = 8.0;
    const auto ch =
        generate_channel(99, 4, {4, 0.5}, {4, 0.5}, pl, AngleDistribution::uniform());
    REQUIRE(ch.shadowing_db != 0.0);

    // Same seed with shadowing folded into the fixed term reproduces the
    // frozen-fading workflow.
    const double zeta = draw_shadowing_db(77, 8.0);
    PathLossModel frozen = no_shadowing;
    frozen.fixed_db += zeta;
    const auto ch2 =
        generate_channel(31, 4, {4, 0.5}, {4, 0.5}, frozen, AngleDistribution::uniform());
    REQUIRE(ch2.shadowing_db == 0.0);
}

TEST_CASE("invalid angle distribution is a configuration error")
{
    AngleDistribution bad;
    bad.min_rad = 1.0;
    bad.max_rad = -1.0;
    REQUIRE_THROWS_AS(
        generate_channel(1, 2, {2, 0.5}, {2, 0.5}, no_shadowing, bad), std::invalid_argument);
}

TEST_CASE("dominant path selection")
{
    const std::vector<double> aod{0.1, 0.2, 0.3};
    const std::vector<double> aoa{-0.1, -0.2, -0.3};

    SECTION("largest magnitude wins")
    {
        const auto ch = manual_channel({cx(0.1, 0.0), cx(0.0, 0.9), cx(0.3, 0.0)}, aod, aoa, 4, 4);
        REQUIRE(dominant_path(ch).index == 1);
        REQUIRE_THAT(dominant_path(ch).aod, WithinRel(0.2, 1e-15));
    }

    SECTION("ties resolve to the lowest index")
    {
        const auto ch = manual_channel({cx(0.5, 0.0), cx(0.1, 0.0), cx(0.0, 0.5)}, aod, aoa, 4, 4);
        REQUIRE(dominant_path(ch).index == 0);
    }

    SECTION("single path returns the only path")
    {
        const auto ch = manual_channel(arma::cx_vec{cx(0.2, 0.1)}, {0.7}, {-0.4}, 4, 4);
        REQUIRE(dominant_path(ch).index == 0);
    }
}

TEST_CASE("effective channel of a unit single-path link")
{
    const arma::uword nt = 8, nr = 4;
    const auto ch = manual_channel(arma::cx_vec{cx(1.0, 0.0)}, {0.35}, {-0.6}, nt, nr);
    const arma::cx_vec ht = effective_channel(ch);
    const arma::cx_vec expect =
        std::sqrt(static_cast<double>(nt * nr)) * array_response(-0.6, ch.rx_geometry);
    REQUIRE(arma::abs(ht - expect).max() < 1e-12);
}

TEST_CASE("zero channel has zero effective channel and gain")
{
    auto ch = manual_channel(arma::cx_vec{cx(0.0, 0.0)}, {0.3}, {0.2}, 4, 4);
    REQUIRE(arma::abs(effective_channel(ch)).max() == 0.0);
    REQUIRE(effective_channel_gain(ch) == 0.0);
}

TEST_CASE("effective channel gain of a single path")
{
    const arma::uword nt = 16, nr = 8;
    const cx psi(0.3, -0.4);
    const auto ch = manual_channel(arma::cx_vec{psi}, {0.5}, {0.1}, nt, nr);
    REQUIRE_THAT(effective_channel_gain(ch),
                 WithinRel(static_cast<double>(nt * nr) * std::norm(psi), 1e-12));
}

TEST_CASE("effective channel gain is bounded by the spectral norm")
{
    for (int i = 0; i < 50; ++i)
    {
        const auto ch = generate_channel(mix_seed(2024, i), 5, {8, 0.5}, {8, 0.5}, no_shadowing,
                                         AngleDistribution::uniform());
        const double snorm = arma::norm(ch.h, 2);
        REQUIRE(effective_channel_gain(ch) <= snorm * snorm * (1.0 + 1e-12));
    }
}

TEST_CASE("sine-spaced angle sampling stays inside the bounds")
{
    AngleDistribution dist;
    dist.kind = AngleDistribution::Kind::uniform_sine;
    dist.min_rad = -pi / 3.0;
    dist.max_rad = pi / 3.0;
    const auto ch = generate_channel(5, 64, {2, 0.5}, {2, 0.5}, no_shadowing, dist);
    for (double a : ch.aod)
    {
        REQUIRE(a >= dist.min_rad - 1e-12);
        REQUIRE(a <= dist.max_rad + 1e-12);
    }
}
