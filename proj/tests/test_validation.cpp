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

#include "nlbeam/validation.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstring>

using namespace nlbeam;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

HermitianCov rank_one_cm(std::uint64_t seed, arma::uword n, double p_total)
{
    Rng rng(seed);
    arma::cx_vec f(n);
    for (auto &z : f)
        z = std::polar(1.0 / std::sqrt(static_cast<double>(n)), rng.uniform(-pi, pi));
    return HermitianCov(p_total * f * f.t());
}

} // namespace

TEST_CASE("pairing enumeration reproduces the basic Gaussian moments")
{
    // E{a b*} itself
    REQUIRE_THAT(std::abs(isserlis_moment(0, 0, 1.0, 1.0, cx(0.3, 0.4)) - cx(0.3, 0.4)),
                 WithinAbs(0.0, 1e-15));

    // E{|a|^6} = 3! sigma^6 via m = n = 1 with b = a
    REQUIRE_THAT(isserlis_moment(1, 1, 1.0, 1.0, cx(1.0, 0.0)).real(), WithinRel(6.0, 1e-12));

    // E{|a|^4} = 2 P^2 via m = 1, n = 0 with b = a
    const double p = 0.7;
    REQUIRE_THAT(isserlis_moment(1, 0, p, p, cx(p, 0.0)).real(), WithinRel(2.0 * p * p, 1e-12));

    // E{|a|^8} = 4! P^4 via m = 2, n = 1 with b = a
    REQUIRE_THAT(isserlis_moment(2, 1, p, p, cx(p, 0.0)).real(),
                 WithinRel(24.0 * std::pow(p, 4), 1e-12));
}

TEST_CASE("pairing enumeration refuses oversized inputs")
{
    REQUIRE_THROWS_AS(isserlis_moment(4, 3, 1.0, 1.0, cx(0.1, 0.0)), std::invalid_argument);
}

TEST_CASE("independent variables have uncorrelated odd powers")
{
    for (unsigned m = 0; m <= 3; ++m)
        for (unsigned n = 0; n <= 3; ++n)
            REQUIRE(std::abs(isserlis_moment(m, n, 1.3, 0.8, cx(0.0, 0.0))) == 0.0);
}

TEST_CASE("closed form cross-correlation matches the enumeration")
{
    Rng rng(7);
    for (int draw = 0; draw < 25; ++draw)
    {
        const double sa = rng.uniform(0.3, 2.0);
        const double sb = rng.uniform(0.3, 2.0);
        const cx rho = std::polar(rng.uniform(0.0, 0.9) * std::sqrt(sa * sb),
                                  rng.uniform(-pi, pi));
        for (unsigned m = 0; m <= 3; ++m)
            for (unsigned n = 0; n <= 3; ++n)
            {
                const cx exact = isserlis_moment(m, n, sa, sb, rho);
                const cx closed = lemma1_closed_form(m, n, sa, sb, rho);
                REQUIRE(std::abs(closed - exact) <= 1e-9 * std::max(1e-300, std::abs(exact)));
            }
    }
}

TEST_CASE("closed form with the truncated sum misses the leading term")
{
    // Starting at q = 1 wipes out the plain cross-correlation entirely.
    REQUIRE(lemma1_closed_form_from_q1(0, 0, 1.0, 1.0, cx(0.5, 0.0)) == cx(0.0, 0.0));
    REQUIRE(lemma1_closed_form_from_q1(2, 0, 1.0, 1.0, cx(0.5, 0.0)) == cx(0.0, 0.0));

    const cx rho(0.4, -0.2);
    const cx full = lemma1_closed_form(1, 1, 1.0, 1.0, rho);
    const cx trunc = lemma1_closed_form_from_q1(1, 1, 1.0, 1.0, rho);
    REQUIRE(std::abs(full - trunc) > 0.1 * std::abs(full));
}

TEST_CASE("vanishing cross-covariance kills every closed-form term")
{
    for (unsigned m = 0; m <= 3; ++m)
        for (unsigned n = 0; n <= 3; ++n)
            REQUIRE(lemma1_closed_form(m, n, 1.0, 2.0, cx(0.0, 0.0)) == cx(0.0, 0.0));
}

TEST_CASE("moment-enumeration route reproduces the distortion covariance")
{
    const HermitianCov cu = rank_one_cm(5, 4, 4.0);
    const PACoefficients pa = default_pa(); // M = 2
    const arma::cx_mat oracle = distortion_covariance_by_enumeration(cu, pa);
    const HermitianCov closed = distortion_covariance(cu, pa);
    REQUIRE(arma::norm(closed.matrix() - oracle, "fro") <= 1e-10 * arma::norm(oracle, "fro"));
}

TEST_CASE("coefficient index tied to m breaks the M=2 covariance")
{
    const HermitianCov cu = rank_one_cm(6, 4, 4.0);
    const PACoefficients pa = default_pa();
    const arma::cx_mat oracle = distortion_covariance_by_enumeration(cu, pa);
    const arma::cx_mat printed = distortion_covariance_beta_index_m(cu, pa);
    REQUIRE(arma::norm(printed - oracle, "fro") > 0.10 * arma::norm(oracle, "fro"));

    // For M = 1 the two kernels coincide, so the misprint is invisible.
    PACoefficients pa1 = pa;
    pa1.beta.resize(2);
    const HermitianCov correct1 = distortion_covariance(cu, pa1);
    const arma::cx_mat printed1 = distortion_covariance_beta_index_m(cu, pa1);
    REQUIRE(arma::norm(printed1 - correct1.matrix(), "fro") <=
            1e-12 * arma::norm(correct1.matrix(), "fro"));
}

TEST_CASE("monte carlo estimator needs a minimum sample count")
{
    const HermitianCov cu(arma::eye<arma::cx_mat>(2, 2));
    REQUIRE_THROWS_AS(mc_bussgang(cu, default_pa(), 100, 1), std::invalid_argument);
}

TEST_CASE("monte carlo estimate of a linear PA")
{
    const cx beta1(2.96, 0.0);
    const HermitianCov cu = rank_one_cm(9, 2, 1.0);
    const McEstimate est = mc_bussgang(cu, linear_pa(beta1), 100000, 77);

    for (arma::uword i = 0; i < 2; ++i)
        REQUIRE(std::abs(est.gain_hat(i) - beta1) < 3.0 / std::sqrt(1e5) * std::abs(beta1));
    REQUIRE(arma::abs(est.cd_hat).max() < 1e-10);
}

TEST_CASE("scalar monte carlo distortion variance matches the moment identity")
{
    PACoefficients pa;
    pa.beta = {cx(2.96, 0.0), std::polar(0.1418, -2.816)};
    const double p = 1.3;
    const HermitianCov cu(arma::cx_mat(1, 1, arma::fill::value(cx(p, 0.0))));
    const McEstimate est = mc_bussgang(cu, pa, 400000, 5);
    const double expect = 2.0 * std::norm(pa.beta[1]) * p * p * p;
    REQUIRE_THAT(est.cd_hat(0, 0).real(), WithinRel(expect, 0.05));
    REQUIRE(est.cd_hat(0, 0).imag() == 0.0);
}

TEST_CASE("monte carlo covariance estimate is Hermitian by construction")
{
    const HermitianCov cu = rank_one_cm(13, 4, 4.0);
    const McEstimate est = mc_bussgang(cu, default_pa(), 50000, 3);
    REQUIRE(arma::abs(est.cd_hat - est.cd_hat.t()).max() == 0.0);
}

TEST_CASE("estimates are identical for any thread split")
{
    const HermitianCov cu = rank_one_cm(15, 4, 4.0);
    const McEstimate a = mc_bussgang(cu, default_pa(), 200000, 21, 1);
    const McEstimate b = mc_bussgang(cu, default_pa(), 200000, 21, 4);
    REQUIRE(std::memcmp(a.gain_hat.memptr(), b.gain_hat.memptr(), 4 * sizeof(cx)) == 0);
    REQUIRE(std::memcmp(a.cd_hat.memptr(), b.cd_hat.memptr(), 16 * sizeof(cx)) == 0);

    const McEstimate c = mc_bussgang(cu, default_pa(), 200000, 22, 1);
    REQUIRE(arma::abs(a.cd_hat - c.cd_hat).max() > 0.0);
}

TEST_CASE("a distortionless PA passes the whole validation suite trivially")
{
    ValidationConfig vc;
    vc.pa = linear_pa(cx(2.96, 0.0));
    vc.mc_samples = 20000; // the gain estimator is exact for a linear PA
    vc.consistency_channels = 50;
    const ValidationReport report = validate_all(vc);
    for (const CheckResult &c : report.checks)
    {
        INFO(c.name << ": " << c.detail);
        REQUIRE(c.pass);
    }
}

TEST_CASE("orthogonality residual shrinks with the sample count")
{
    const HermitianCov cu = rank_one_cm(17, 2, 2.0);
    const arma::vec p = cu.branch_powers();
    const BussgangGain g = bussgang_gains(p, default_pa());

    auto residual = [&](std::size_t n, std::uint64_t seed) {
        const McEstimate est = mc_bussgang(cu, default_pa(), n, seed);
        const arma::cx_mat resid = est.input_distortion_corr(g.per_branch_gain);
        double worst = 0.0;
        for (arma::uword k = 0; k < 2; ++k)
            for (arma::uword m = 0; m < 2; ++m)
                worst = std::max(worst, std::abs(resid(k, m)) /
                                            std::sqrt(p(m) * std::real(est.cd_hat(k, k))));
        return worst;
    };

    // Median over 20 seeds at n and 4n: expect a clear 1/sqrt(n) trend.
    std::vector<double> small, large;
    for (int s = 0; s < 20; ++s)
    {
        small.push_back(residual(20000, mix_seed(31, s)));
        large.push_back(residual(80000, mix_seed(63, s)));
    }
    std::sort(small.begin(), small.end());
    std::sort(large.begin(), large.end());
    REQUIRE(small[10] / large[10] >= 1.3);

    // A wrong linear coefficient leaves a floor the samples cannot remove.
    const arma::cx_vec wrong(2, arma::fill::value(default_pa().beta[0]));
    const McEstimate est = mc_bussgang(cu, default_pa(), 200000, 9);
    const arma::cx_mat bad = est.input_distortion_corr(wrong);
    REQUIRE(arma::abs(bad).max() > 10.0 * arma::abs(est.input_distortion_corr(g.per_branch_gain)).max());
}
