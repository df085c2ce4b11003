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

#include "nlbeam/distortion.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace nlbeam;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

arma::cx_vec random_cm_vector(Rng &rng, arma::uword n)
{
    arma::cx_vec f(n);
    for (arma::uword i = 0; i < n; ++i)
        f(i) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), rng.uniform(-pi, pi));
    return f;
}

} // namespace

TEST_CASE("covariance wrapper rejects non-Hermitian input")
{
    arma::cx_mat m(2, 2, arma::fill::zeros);
    m(0, 1) = cx(1.0, 0.0);
    m(1, 0) = cx(0.5, 0.0);
    m.diag() += 2.0;
    REQUIRE_THROWS_AS(HermitianCov(m), std::invalid_argument);
}

TEST_CASE("covariance wrapper rejects indefinite input")
{
    arma::cx_mat m(2, 2, arma::fill::zeros);
    m(0, 0) = cx(1.0, 0.0);
    m(1, 1) = cx(-1.0, 0.0);
    REQUIRE_THROWS_AS(HermitianCov(m), std::invalid_argument);
}

TEST_CASE("covariance wrapper symmetrizes within tolerance")
{
    arma::cx_mat m(2, 2);
    m(0, 0) = cx(2.0, 0.0);
    m(1, 1) = cx(3.0, 0.0);
    m(0, 1) = cx(0.5, 0.25);
    m(1, 0) = std::conj(m(0, 1)) + cx(1e-14, 0.0);
    const HermitianCov c(m);
    REQUIRE(arma::abs(c.matrix() - c.matrix().t()).max() == 0.0);
}

TEST_CASE("hadamard power term, scalar entries")
{
    arma::cx_mat m(1, 1);
    m(0, 0) = cx(2.0, 0.0);
    REQUIRE(hadamard_power_term(m, 1)(0, 0) == cx(8.0, 0.0));
    REQUIRE(hadamard_power_term(m, 2)(0, 0) == cx(32.0, 0.0));
}

TEST_CASE("hadamard power term on a diagonal matrix")
{
    arma::cx_mat m(3, 3, arma::fill::zeros);
    m(0, 0) = cx(1.0, 0.0);
    m(1, 1) = cx(2.0, 0.0);
    m(2, 2) = cx(0.5, 0.0);
    const arma::cx_mat t = hadamard_power_term(m, 2); // entries P^{5}
    REQUIRE_THAT(t(1, 1).real(), WithinRel(32.0, 1e-15));
    REQUIRE_THAT(t(2, 2).real(), WithinRel(std::pow(0.5, 5), 1e-15));
    REQUIRE(t(0, 1) == cx(0.0, 0.0));
}

TEST_CASE("hadamard power term collapses for rank-one constant-modulus input")
{
    Rng rng(11);
    const arma::uword n = 6;
    const double alpha = 0.7; // per-branch power
    const arma::cx_vec f = random_cm_vector(rng, n);
    const arma::cx_mat cz = (alpha * static_cast<double>(n)) * f * f.t();

    for (arma::uword m : {1u, 2u, 3u})
    {
        const arma::cx_mat lhs = hadamard_power_term(cz, m);
        const arma::cx_mat rhs = std::pow(alpha, 2.0 * m) * cz;
        REQUIRE(arma::abs(lhs - rhs).max() <= 1e-12 * arma::abs(rhs).max());
    }
}

TEST_CASE("linear PA produces no distortion")
{
    Rng rng(3);
    const arma::cx_vec f = random_cm_vector(rng, 4);
    const HermitianCov cu(arma::cx_mat(4.0 * f * f.t()));
    const HermitianCov cd = distortion_covariance(cu, linear_pa(cx(2.96, 0.0)));
    REQUIRE(arma::abs(cd.matrix()).max() == 0.0);
}

TEST_CASE("scalar third-order distortion matches the Gaussian moment identity")
{
    // E|d|^2 = |b3|^2 (6 - 8 + 4) P^3 for x = b1 u + b3 |u|^2 u.
    PACoefficients pa;
    pa.beta = {cx(2.96, 0.0), std::polar(0.1418, -2.816)};
    const double p = 0.7;
    const HermitianCov cu(arma::cx_mat(1, 1, arma::fill::value(cx(p, 0.0))));
    const HermitianCov cd = distortion_covariance(cu, pa);
    const double expect = 2.0 * std::norm(pa.beta[1]) * p * p * p;
    REQUIRE_THAT(cd.matrix()(0, 0).real(), WithinRel(expect, 1e-12));
    REQUIRE_THAT(expect, WithinRel(0.01379356663928, 1e-9)); // frozen value
}

TEST_CASE("rank-one constant-modulus covariance collapses the closed form")
{
    Rng rng(17);
    const arma::uword n = 8;
    const double p_total = 4.0;
    const arma::cx_vec f = random_cm_vector(rng, n);
    const HermitianCov cu(p_total * f * f.t());

    const HermitianCov cd = distortion_covariance(cu, default_pa());
    const double gd = gbar_d(p_total / static_cast<double>(n), default_pa());
    const arma::cx_mat expect = gd * p_total * f * f.t();
    REQUIRE(arma::abs(cd.matrix() - expect).max() <= 1e-12 * arma::abs(expect).max());
}

TEST_CASE("diagonal covariance keeps the distortion diagonal")
{
    const PACoefficients pa = default_pa();
    arma::cx_mat m(3, 3, arma::fill::zeros);
    const double powers[3] = {0.25, 1.0, 2.5};
    for (arma::uword i = 0; i < 3; ++i)
        m(i, i) = cx(powers[i], 0.0);

    const HermitianCov cd = distortion_covariance(HermitianCov(m), pa);
    for (arma::uword i = 0; i < 3; ++i)
        for (arma::uword j = 0; j < 3; ++j)
        {
            if (i == j)
            {
                double expect = 0.0;
                for (arma::uword k = 1; k <= pa.order(); ++k)
                    expect += std::norm(gamma_m(powers[i], k, pa)) *
                              std::pow(powers[i], 2.0 * k + 1.0);
                REQUIRE_THAT(cd.matrix()(i, i).real(), WithinRel(expect, 1e-12));
            }
            else
            {
                REQUIRE(std::abs(cd.matrix()(i, j)) == 0.0);
            }
        }
}

TEST_CASE("distortion covariance is Hermitian PSD for random inputs")
{
    Rng rng(23);
    for (int trial = 0; trial < 1000; ++trial)
    {
        const arma::uword n = 2 + static_cast<arma::uword>(rng.uniform(0.0, 14.0 + 1.0)) % 15;
        const arma::uword order = 1 + (trial % 3);

        PACoefficients pa;
        pa.beta.resize(order + 1);
        pa.beta[0] = cx(1.0 + rng.uniform(0.0, 2.0), rng.uniform(-0.5, 0.5));
        for (arma::uword m = 1; m <= order; ++m)
            pa.beta[m] = cx(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2));

        arma::cx_mat a(n, n);
        for (arma::uword j = 0; j < n; ++j)
            for (arma::uword i = 0; i < n; ++i)
                a(i, j) = rng.cgauss(1.0);
        const HermitianCov cu(arma::cx_mat(a * a.t() / static_cast<double>(n)));

        // Construction validates Hermitian symmetry and PSD within the
        // -1e-10*trace eigenvalue tolerance; reaching here is the pass.
        const HermitianCov cd = distortion_covariance(cu, pa);
        REQUIRE(cd.size() == n);
    }
}

TEST_CASE("identity coupling leaves the covariance unchanged")
{
    Rng rng(29);
    const arma::cx_vec f = random_cm_vector(rng, 4);
    const HermitianCov cu(arma::cx_mat(2.0 * f * f.t()));
    CrosstalkMatrix b;
    b.matrix = arma::eye<arma::cx_mat>(4, 4);
    REQUIRE(arma::abs(apply_crosstalk(cu, b).matrix() - cu.matrix()).max() <= 1e-15);

    b.matrix *= 2.0;
    REQUIRE(arma::abs(apply_crosstalk(cu, b).matrix() - 4.0 * cu.matrix()).max() <= 1e-12);
}

TEST_CASE("coupled covariance stays Hermitian PSD")
{
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial)
    {
        arma::cx_mat a(5, 5);
        for (auto &v : a)
            v = rng.cgauss(1.0);
        const HermitianCov cu(arma::cx_mat(a * a.t()));
        const CrosstalkMatrix b = sample_crosstalk(mix_seed(7, trial), 5, 0.05,
                                                   CrosstalkModel::identity_plus_offdiag);
        const HermitianCov coupled = apply_crosstalk(cu, b); // validates on construction
        REQUIRE(coupled.size() == 5);
    }
}

TEST_CASE("coupling dimension mismatch is rejected")
{
    const HermitianCov cu(arma::eye<arma::cx_mat>(4, 4));
    CrosstalkMatrix b;
    b.matrix = arma::eye<arma::cx_mat>(3, 3);
    REQUIRE_THROWS_AS(apply_crosstalk(cu, b), std::invalid_argument);
}

TEST_CASE("zero-power coupling is the identity for the direct-path model")
{
    const CrosstalkMatrix b =
        sample_crosstalk(5, 6, 0.0, CrosstalkModel::identity_plus_offdiag);
    REQUIRE(arma::abs(b.matrix - arma::eye<arma::cx_mat>(6, 6)).max() == 0.0);
}

TEST_CASE("literal iid coupling has the declared average energy")
{
    const double sigma_sq = 0.01;
    const arma::uword n = 8;
    KahanSum acc;
    const int n_seeds = 1000;
    for (int s = 0; s < n_seeds; ++s)
    {
        const CrosstalkMatrix b =
            sample_crosstalk(mix_seed(99, s), n, sigma_sq, CrosstalkModel::literal_iid);
        acc.add(std::pow(arma::norm(b.matrix, "fro"), 2));
    }
    const double mean = acc.sum / n_seeds;
    REQUIRE_THAT(mean, WithinRel(sigma_sq * static_cast<double>(n * n), 0.05));
}
