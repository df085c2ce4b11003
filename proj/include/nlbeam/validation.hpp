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

#ifndef NLBEAM_VALIDATION_HPP
#define NLBEAM_VALIDATION_HPP

#include "nlbeam/distortion.hpp"
#include "nlbeam/link_metrics.hpp"
#include "nlbeam/pa_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nlbeam
{

// Empirical Bussgang decomposition of the raw polynomial PA. The gain is
// estimated per branch as E{x_n u_n*}/E{|u_n|^2} and the distortion
// covariance as the sample covariance of x - Ghat u, which is Hermitian by
// construction.
struct McEstimate
{
    arma::cx_vec gain_hat;
    arma::cx_mat cd_hat;
    arma::cx_mat xu_mean; // raw second moments: entry (k, n) estimates E{x_k u_n*}
    arma::cx_mat uu_mean; // entry (k, n) estimates E{u_k u_n*}
    std::size_t n_samples = 0;
    std::uint64_t seed = 0;

    // Residual correlation E{d_k u_n*} for d = x - diag(gains) u. Feeding
    // the closed-form average gain makes this a genuine statistical check;
    // with gain_hat it vanishes identically on the diagonal (and everywhere
    // for rank-one inputs) by construction of the estimator.
    arma::cx_mat input_distortion_corr(const arma::cx_vec &gains) const;
};

// Samples u ~ CN(0, C_u) through a Hermitian eigenfactor of C_u and pushes
// each sample through pa_transfer. Accumulation runs in fixed 2^16-sample
// blocks with per-block derived seeds and a compensated in-order reduction,
// so the estimate is identical for any thread count. Requires n_samples >=
// 1e4 and (numerically) PSD C_u.
McEstimate mc_bussgang(const HermitianCov &cu, const PACoefficients &pa,
                       std::size_t n_samples, std::uint64_t seed, unsigned n_threads = 1);

// Exact Gaussian moment E{phi_m(a) phi_n^*(b)} with phi_m(a) = |a|^{2m} a,
// computed by enumerating every perfect pairing of the multiset
// {a x(m+1), a* x m, b x n, b* x(n+1)}; each pairing contributes the
// product of its pair moments. Enumeration is memoized on the remaining
// multiset counts. Requires m + n <= 6, which caps the pairing count at
// 13!! = 135135.
cx isserlis_moment(unsigned m, unsigned n, double sigma_a_sq, double sigma_b_sq, cx rho);

// Closed-form cross-correlation of phi_m(a) and phi_n(b):
//   sum_{q=0}^{min(m,n)} (m+1)!(n+1)!/(q+1) C(m,q) C(n,q)
//       sigma_a^{2(m-q)} sigma_b^{2(n-q)} |rho|^{2q} rho
// The sum starts at q = 0; the pairing enumeration above certifies that
// (the q = 0 terms are exactly what later cancels in the distortion
// covariance derivation, which is why that one starts at m = 1).
cx lemma1_closed_form(unsigned m, unsigned n, double sigma_a_sq, double sigma_b_sq, cx rho);

// Negative control: same sum started at q = 1. Evaluates to zero whenever
// min(m,n) = 0 and misses the leading term otherwise.
cx lemma1_closed_form_from_q1(unsigned m, unsigned n, double sigma_a_sq, double sigma_b_sq,
                              cx rho);

// Second independent route to the distortion covariance: expands
// E{d_k d_j*} through the raw moment enumeration with no gamma_m kernels.
// Exact up to floating point; requires pa.order() <= 3.
arma::cx_mat distortion_covariance_by_enumeration(const HermitianCov &cu,
                                                  const PACoefficients &pa);

// Negative control for the distortion kernel: gamma_m evaluated with the
// coefficient index tied to m instead of the summation variable q. Agrees
// with the correct kernel for M <= 1 and diverges from the enumeration and
// Monte Carlo oracles for M >= 2.
arma::cx_mat distortion_covariance_beta_index_m(const HermitianCov &cu,
                                                const PACoefficients &pa);

struct CheckResult
{
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct ValidationReport
{
    std::vector<CheckResult> checks;

    bool all_pass() const;
    const CheckResult *first_failure() const;
};

struct ValidationConfig
{
    PACoefficients pa;
    LinkBudget budget;
    arma::uword n_t = 16;
    arma::uword n_r = 16;
    arma::uword n_paths = 5;
    double tx_spacing = 0.5;
    double rx_spacing = 0.5;
    PathLossModel pathloss;
    AngleDistribution angles;
    std::uint64_t seed = 1;
    std::size_t mc_samples = 1'000'000;
    arma::uword consistency_channels = 1000;
    unsigned n_threads = 1;
};

// Runs the full oracle suite: average-gain and covariance Monte Carlo,
// moment-enumeration arbitration with both negative controls, rank-one
// Hadamard collapse, the two-route SE consistency checks, the bound
// tightness checks and the beampattern coincidence property.
ValidationReport validate_all(const ValidationConfig &config);

} // namespace nlbeam

#endif
