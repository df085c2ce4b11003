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

#include "nlbeam/beamformers.hpp"
#include "nlbeam/channel.hpp"

#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace nlbeam
{

namespace
{

constexpr std::size_t mc_block_size = 65536;

double factorial(unsigned n)
{
    double f = 1.0;
    for (unsigned k = 2; k <= n; ++k)
        f *= static_cast<double>(k);
    return f;
}

double binomial(unsigned n, unsigned k)
{
    if (k > n)
        return 0.0;
    double b = 1.0;
    for (unsigned i = 0; i < k; ++i)
        b = b * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return b;
}

// Hermitian square root via the eigendecomposition; tiny negative
// eigenvalues (within the PSD tolerance) sample as zero variance.
arma::cx_mat hermitian_factor(const HermitianCov &cu)
{
    arma::vec evals;
    arma::cx_mat evecs;
    if (!arma::eig_sym(evals, evecs, cu.matrix()))
        throw std::runtime_error("mc_bussgang: eigendecomposition failed");
    arma::vec root = arma::sqrt(arma::clamp(evals, 0.0, arma::datum::inf));
    return evecs * arma::diagmat(root) * evecs.t();
}

struct McBlockSums
{
    arma::cx_mat s_xx, s_xu, s_uu;
};

McBlockSums mc_block(const arma::cx_mat &factor, const PACoefficients &pa, std::uint64_t seed,
                     std::size_t count)
{
    const arma::uword n = factor.n_rows;
    McBlockSums sums;
    sums.s_xx.zeros(n, n);
    sums.s_xu.zeros(n, n);
    sums.s_uu.zeros(n, n);

    Rng rng(seed);
    arma::cx_vec z(n), u(n), x(n);
    for (std::size_t s = 0; s < count; ++s)
    {
        for (arma::uword i = 0; i < n; ++i)
            z(i) = rng.cgauss(1.0);
        u = factor * z;
        for (arma::uword i = 0; i < n; ++i)
            x(i) = pa_transfer(u(i), pa);

        for (arma::uword j = 0; j < n; ++j)
        {
            const cx ucj = std::conj(u(j));
            const cx xcj = std::conj(x(j));
            for (arma::uword i = 0; i < n; ++i)
            {
                sums.s_xx(i, j) += x(i) * xcj;
                sums.s_xu(i, j) += x(i) * ucj;
                sums.s_uu(i, j) += u(i) * ucj;
            }
        }
    }
    return sums;
}

void kahan_add_matrix(arma::cx_mat &sum, arma::cx_mat &carry, const arma::cx_mat &x)
{
    // Entrywise compensated accumulation, in block order.
    const arma::cx_mat y = x - carry;
    const arma::cx_mat t = sum + y;
    carry = (t - sum) - y;
    sum = t;
}

} // namespace

McEstimate mc_bussgang(const HermitianCov &cu, const PACoefficients &pa, std::size_t n_samples,
                       std::uint64_t seed, unsigned n_threads)
{
    validate(pa);
    if (n_samples < 10000)
        throw std::invalid_argument("mc_bussgang: need at least 1e4 samples");

    const arma::uword n = cu.size();
    const arma::cx_mat factor = hermitian_factor(cu);

    const std::size_t n_blocks = (n_samples + mc_block_size - 1) / mc_block_size;
    std::vector<McBlockSums> blocks(n_blocks);

    parallel_for(n_blocks, n_threads, [&](std::size_t b) {
        const std::size_t lo = b * mc_block_size;
        const std::size_t count = std::min(mc_block_size, n_samples - lo);
        blocks[b] = mc_block(factor, pa, mix_seed(seed, b), count);
    });

    arma::cx_mat s_xx(n, n, arma::fill::zeros), c_xx(n, n, arma::fill::zeros);
    arma::cx_mat s_xu(n, n, arma::fill::zeros), c_xu(n, n, arma::fill::zeros);
    arma::cx_mat s_uu(n, n, arma::fill::zeros), c_uu(n, n, arma::fill::zeros);
    for (std::size_t b = 0; b < n_blocks; ++b)
    {
        kahan_add_matrix(s_xx, c_xx, blocks[b].s_xx);
        kahan_add_matrix(s_xu, c_xu, blocks[b].s_xu);
        kahan_add_matrix(s_uu, c_uu, blocks[b].s_uu);
    }

    McEstimate est;
    est.n_samples = n_samples;
    est.seed = seed;
    est.gain_hat.set_size(n);
    for (arma::uword i = 0; i < n; ++i)
        est.gain_hat(i) = s_xu(i, i) / std::real(s_uu(i, i));

    // cd_hat is the sample covariance of d = x - Ghat u expanded through the
    // accumulated sums. Entries are produced for i <= j and mirrored so the
    // estimate is Hermitian by construction (not merely up to rounding).
    const double inv_n = 1.0 / static_cast<double>(n_samples);
    est.cd_hat.set_size(n, n);
    for (arma::uword j = 0; j < n; ++j)
        for (arma::uword i = 0; i <= j; ++i)
        {
            const cx gi = est.gain_hat(i);
            const cx gj_c = std::conj(est.gain_hat(j));
            const cx v = (s_xx(i, j) - s_xu(i, j) * gj_c - gi * std::conj(s_xu(j, i)) +
                          gi * s_uu(i, j) * gj_c) *
                         inv_n;
            est.cd_hat(i, j) = (i == j) ? cx(v.real(), 0.0) : v;
            if (i != j)
                est.cd_hat(j, i) = std::conj(v);
        }

    est.xu_mean = s_xu * inv_n;
    est.uu_mean = s_uu * inv_n;
    return est;
}

arma::cx_mat McEstimate::input_distortion_corr(const arma::cx_vec &gains) const
{
    if (gains.n_elem != xu_mean.n_rows)
        throw std::invalid_argument("input_distortion_corr: gain vector length mismatch");
    return xu_mean - arma::diagmat(gains) * uu_mean;
}

cx isserlis_moment(unsigned m, unsigned n, double sigma_a_sq, double sigma_b_sq, cx rho)
{
    if (m + n > 6)
        throw std::invalid_argument(
            "isserlis_moment: m + n > 6 would enumerate more than 13!! = 135135 pairings; "
            "use the closed form for higher orders");

    // Multiset counts for phi_m(a) phi_n^*(b): a x(m+1), a* x m, b x n, b* x(n+1).
    // Nonzero pair moments: {a,a*} -> sigma_a^2, {b,b*} -> sigma_b^2,
    // {a,b*} -> rho, {a*,b} -> conj(rho); every other pair vanishes by
    // circular symmetry. Recursion pairs the first remaining element and is
    // memoized on the remaining counts.
    struct Key
    {
        unsigned a, as, b, bs;
        bool operator==(const Key &o) const
        {
            return a == o.a && as == o.as && b == o.b && bs == o.bs;
        }
    };
    struct KeyHash
    {
        std::size_t operator()(const Key &k) const
        {
            return (k.a << 12) | (k.as << 8) | (k.b << 4) | k.bs;
        }
    };

    std::unordered_map<Key, cx, KeyHash> memo;
    const cx rho_c = std::conj(rho);

    std::function<cx(Key)> go = [&](Key k) -> cx {
        if (k.a == 0 && k.as == 0 && k.b == 0 && k.bs == 0)
            return cx(1.0, 0.0);
        auto it = memo.find(k);
        if (it != memo.end())
            return it->second;

        cx total(0.0, 0.0);
        if (k.a > 0)
        {
            // pair one 'a' with an 'a*' or a 'b*'
            Key r = k;
            r.a -= 1;
            if (k.as > 0)
            {
                Key r2 = r;
                r2.as -= 1;
                total += static_cast<double>(k.as) * sigma_a_sq * go(r2);
            }
            if (k.bs > 0)
            {
                Key r2 = r;
                r2.bs -= 1;
                total += static_cast<double>(k.bs) * rho * go(r2);
            }
        }
        else if (k.as > 0)
        {
            // only a*, b, b* remain: a* pairs with b
            Key r = k;
            r.as -= 1;
            if (k.b > 0)
            {
                Key r2 = r;
                r2.b -= 1;
                total += static_cast<double>(k.b) * rho_c * go(r2);
            }
        }
        else if (k.b > 0)
        {
            Key r = k;
            r.b -= 1;
            if (k.bs > 0)
            {
                Key r2 = r;
                r2.bs -= 1;
                total += static_cast<double>(k.bs) * sigma_b_sq * go(r2);
            }
        }
        // remaining lone b* (or unpaired leftovers) contribute nothing

        memo.emplace(k, total);
        return total;
    };

    return go(Key{m + 1, m, n, n + 1});
}

cx lemma1_closed_form(unsigned m, unsigned n, double sigma_a_sq, double sigma_b_sq, cx rho)
{
    const unsigned qmax = std::min(m, n);
    cx total(0.0, 0.0);
    const double rho_abs_sq = std::norm(rho);
    for (unsigned q = 0; q <= qmax; ++q)
    {
        const double coeff = factorial(m + 1) * factorial(n + 1) / static_cast<double>(q + 1) *
                             binomial(m, q) * binomial(n, q);
        const double powers = std::pow(sigma_a_sq, static_cast<double>(m - q)) *
                              std::pow(sigma_b_sq, static_cast<double>(n - q)) *
                              std::pow(rho_abs_sq, static_cast<double>(q));
        total += coeff * powers * rho;
    }
    return total;
}

cx lemma1_closed_form_from_q1(unsigned m, unsigned n, double sigma_a_sq, double sigma_b_sq,
                              cx rho)
{
    const unsigned qmax = std::min(m, n);
    cx total(0.0, 0.0);
    const double rho_abs_sq = std::norm(rho);
    for (unsigned q = 1; q <= qmax; ++q)
    {
        const double coeff = factorial(m + 1) * factorial(n + 1) / static_cast<double>(q + 1) *
                             binomial(m, q) * binomial(n, q);
        const double powers = std::pow(sigma_a_sq, static_cast<double>(m - q)) *
                              std::pow(sigma_b_sq, static_cast<double>(n - q)) *
                              std::pow(rho_abs_sq, static_cast<double>(q));
        total += coeff * powers * rho;
    }
    return total;
}

arma::cx_mat distortion_covariance_by_enumeration(const HermitianCov &cu,
                                                  const PACoefficients &pa)
{
    validate(pa);
    const unsigned order = static_cast<unsigned>(pa.order());
    if (order > 3)
        throw std::invalid_argument(
            "distortion_covariance_by_enumeration: supports PA order M <= 3 only");

    const arma::uword nt = cu.size();
    const arma::vec p = cu.branch_powers();
    arma::cx_mat cd(nt, nt, arma::fill::zeros);

    // d_k = sum_{m>=1} beta_m (phi_m(u_k) - P_k^m (m+1)! u_k); expand
    // E{d_k d_j*} through raw pairing moments, no distortion kernels.
    for (arma::uword k = 0; k < nt; ++k)
        for (arma::uword j = 0; j < nt; ++j)
        {
            const cx rho = cu.matrix()(k, j);
            cx sum(0.0, 0.0);
            for (unsigned m = 1; m <= order; ++m)
                for (unsigned n = 1; n <= order; ++n)
                {
                    const double am = std::pow(p(k), static_cast<double>(m)) * factorial(m + 1);
                    const double an = std::pow(p(j), static_cast<double>(n)) * factorial(n + 1);
                    const cx e_mn = isserlis_moment(m, n, p(k), p(j), rho);
                    const cx e_m0 = isserlis_moment(m, 0, p(k), p(j), rho);
                    const cx e_0n = isserlis_moment(0, n, p(k), p(j), rho);
                    sum += pa.beta[m] * std::conj(pa.beta[n]) *
                           (e_mn - an * e_m0 - am * e_0n + am * an * rho);
                }
            cd(k, j) = sum;
        }
    return cd;
}

arma::cx_mat distortion_covariance_beta_index_m(const HermitianCov &cu, const PACoefficients &pa)
{
    validate(pa);
    const arma::uword nt = cu.size();
    const arma::uword order = pa.order();
    const arma::vec p = cu.branch_powers();

    // Kernel with the coefficient frozen at index m (the misprint under
    // arbitration); correct for M <= 1, wrong from M = 2 up.
    auto gamma_printed = [&](double power, arma::uword m) {
        cx s(0.0, 0.0);
        double p_pow = 1.0;
        for (arma::uword q = m; q <= order; ++q)
        {
            s += pa.beta[m] * binomial(static_cast<unsigned>(q), static_cast<unsigned>(m)) *
                 factorial(static_cast<unsigned>(q) + 1) * p_pow;
            p_pow *= power;
        }
        return std::sqrt(1.0 / static_cast<double>(m + 1)) * s;
    };

    arma::cx_mat cd(nt, nt, arma::fill::zeros);
    for (arma::uword m = 1; m <= order; ++m)
    {
        arma::cx_vec gel(nt);
        for (arma::uword k = 0; k < nt; ++k)
            gel(k) = gamma_printed(p(k), m);
        const arma::cx_mat term = hadamard_power_term(cu.matrix(), m);
        for (arma::uword j = 0; j < nt; ++j)
            for (arma::uword i = 0; i < nt; ++i)
                cd(i, j) += gel(i) * std::conj(gel(j)) * term(i, j);
    }
    return cd;
}

bool ValidationReport::all_pass() const
{
    for (const auto &c : checks)
        if (!c.pass)
            return false;
    return true;
}

const CheckResult *ValidationReport::first_failure() const
{
    for (const auto &c : checks)
        if (!c.pass)
            return &c;
    return nullptr;
}

namespace
{

std::string fmt(double v)
{
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// Random rank-one constant-modulus covariance with total power p_total.
HermitianCov random_rank_one_cm(Rng &rng, arma::uword nt, double p_total)
{
    arma::cx_vec f(nt);
    for (arma::uword i = 0; i < nt; ++i)
        f(i) = std::polar(1.0 / std::sqrt(static_cast<double>(nt)),
                          rng.uniform(-pi, pi));
    return HermitianCov(p_total * f * f.t());
}

// Random full-rank covariance with average branch power near p_branch.
HermitianCov random_full_rank(Rng &rng, arma::uword nt, double p_branch)
{
    arma::cx_mat a(nt, nt);
    for (arma::uword j = 0; j < nt; ++j)
        for (arma::uword i = 0; i < nt; ++i)
            a(i, j) = rng.cgauss(1.0);
    arma::cx_mat c = a * a.t();
    const double mean_diag = arma::mean(arma::real(c.diag()));
    c *= p_branch / mean_diag;
    return HermitianCov(c);
}

// Equal branch powers with one common real correlation coefficient on
// every off-diagonal entry; PSD for rho in (-1/(n-1), 1].
HermitianCov constant_correlation(double p_branch, double rho, arma::uword nt)
{
    arma::cx_mat c(nt, nt);
    c.fill(cx(p_branch * rho, 0.0));
    c.diag().fill(cx(p_branch, 0.0));
    return HermitianCov(c);
}

PACoefficients truncated_pa(const PACoefficients &pa, arma::uword order)
{
    PACoefficients out = pa;
    out.beta.resize(std::min<std::size_t>(order + 1, pa.beta.size()));
    return out;
}

} // namespace

ValidationReport validate_all(const ValidationConfig &config)
{
    ValidationReport report;
    const PACoefficients &pa = config.pa;
    const double noise = config.budget.noise_power;

    // --- average linear gain vs Monte Carlo --------------------------------
    {
        const std::vector<double> powers{0.01, 0.1, 1.0, 4.0, 10.0};
        double worst = 0.0;
        for (std::size_t i = 0; i < powers.size(); ++i)
        {
            const HermitianCov cu(arma::cx_mat(1, 1, arma::fill::value(cx(powers[i], 0.0))));
            const McEstimate est = mc_bussgang(cu, pa, config.mc_samples,
                                               mix_seed(config.seed, 100 + i), config.n_threads);
            const cx exact = avg_linear_gain(powers[i], pa);
            worst = std::max(worst, std::abs(est.gain_hat(0) - exact) / std::abs(exact));
        }
        report.checks.push_back({"prop1_gain_mc", worst, 5e-3, worst < 5e-3,
                                 "max relative gain error over branch powers "
                                 "{0.01, 0.1, 1, 4, 10}"});
    }

    // --- distortion covariance vs Monte Carlo ------------------------------
    {
        Rng rng(mix_seed(config.seed, 200));
        double worst = 0.0;
        const arma::uword nts[3] = {2, 4, 8};
        for (int i = 0; i < 10; ++i)
        {
            // Mix of model orders and covariance classes (rank-one
            // constant-modulus, full-rank, constant-correlation), each
            // appearing for both M = 1 and M = 2.
            const arma::uword nt = nts[i % 3];
            const arma::uword order = (i < 5) ? 1 : 2;
            const PACoefficients pa_i = truncated_pa(pa, order);
            const double p_branch = (i % 4 == 3) ? 2.0 : 1.0;
            const HermitianCov cu =
                (i % 3 == 0)   ? random_rank_one_cm(rng, nt, p_branch * static_cast<double>(nt))
                : (i % 3 == 1) ? random_full_rank(rng, nt, p_branch)
                               : constant_correlation(p_branch, 0.3 + 0.15 * (i % 4), nt);

            const McEstimate est = mc_bussgang(cu, pa_i, config.mc_samples,
                                               mix_seed(config.seed, 300 + i), config.n_threads);
            const HermitianCov cd = distortion_covariance(cu, pa_i);
            const double denom = arma::norm(cd.matrix(), "fro");
            // A distortionless PA has C_d = 0; fall back to an absolute
            // check against the input scale so the suite stays meaningful.
            const double err = denom > 0.0
                                   ? arma::norm(est.cd_hat - cd.matrix(), "fro") / denom
                                   : arma::norm(est.cd_hat, "fro") /
                                         arma::norm(cu.matrix(), "fro");
            worst = std::max(worst, err);
        }
        report.checks.push_back({"prop2_covariance_mc", worst, 0.02, worst < 0.02,
                                 "max relative Frobenius error over 10 covariance instances, "
                                 "Nt in {2,4,8}, M in {1,2}"});
    }

    // --- closed-form cross-correlation vs pairing enumeration --------------
    {
        Rng rng(mix_seed(config.seed, 400));
        double worst_correct = 0.0;
        double worst_printed = 0.0;
        for (int draw = 0; draw < 50; ++draw)
        {
            const double sa = rng.uniform(0.2, 3.0);
            const double sb = rng.uniform(0.2, 3.0);
            const double rmax = std::sqrt(sa * sb);
            const cx rho = std::polar(rng.uniform(0.05, 0.95) * rmax, rng.uniform(-pi, pi));
            for (unsigned m = 0; m <= 3; ++m)
                for (unsigned n = 0; n <= 3; ++n)
                {
                    const cx exact = isserlis_moment(m, n, sa, sb, rho);
                    const double scale = std::max(std::abs(exact), 1e-300);
                    worst_correct = std::max(
                        worst_correct, std::abs(lemma1_closed_form(m, n, sa, sb, rho) - exact) / scale);
                    worst_printed = std::max(
                        worst_printed,
                        std::abs(lemma1_closed_form_from_q1(m, n, sa, sb, rho) - exact) / scale);
                }
        }
        report.checks.push_back({"lemma1_vs_enumeration", worst_correct, 1e-9,
                                 worst_correct < 1e-9,
                                 "closed form (q from 0) vs exhaustive pairing enumeration, "
                                 "all m,n <= 3, 50 random parameter draws"});
        report.checks.push_back({"lemma1_q1_negative_control", worst_printed, 0.5,
                                 worst_printed > 0.5,
                                 "the printed q-from-1 variant must fail the same enumeration "
                                 "check (measured error is its deviation)"});
    }

    // --- distortion kernel coefficient-index arbitration --------------------
    if (pa.order() >= 2)
    {
        Rng rng(mix_seed(config.seed, 500));
        const PACoefficients pa2 = truncated_pa(pa, 2);
        const HermitianCov cu = random_rank_one_cm(rng, 4, 4.0); // 1 mW per branch
        const arma::cx_mat oracle = distortion_covariance_by_enumeration(cu, pa2);
        const double denom = arma::norm(oracle, "fro");

        const HermitianCov cd = distortion_covariance(cu, pa2);
        const double err_correct = arma::norm(cd.matrix() - oracle, "fro") / denom;
        report.checks.push_back({"prop2_vs_enumeration", err_correct, 1e-10,
                                 err_correct < 1e-10,
                                 "distortion covariance closed form vs raw moment enumeration, "
                                 "M = 2 rank-one constant-modulus input"});

        const arma::cx_mat printed = distortion_covariance_beta_index_m(cu, pa2);
        const double err_printed = arma::norm(printed - oracle, "fro") / denom;
        report.checks.push_back({"gamma_beta_index_negative_control", err_printed, 0.10,
                                 err_printed > 0.10,
                                 "kernel with the coefficient index frozen at m must miss the "
                                 "enumeration oracle by more than 10% for M = 2"});
    }
    else
    {
        report.checks.push_back({"prop2_vs_enumeration", 0.0, 1e-10, true,
                                 "trivially satisfied: the kernel index is only observable for "
                                 "model order M >= 2"});
        report.checks.push_back({"gamma_beta_index_negative_control", 0.0, 0.10, true,
                                 "not applicable below model order 2 (no ambiguous kernels)"});
    }

    // --- rank-one constant-modulus collapse --------------------------------
    {
        Rng rng(mix_seed(config.seed, 600));
        double worst = 0.0;
        for (int i = 0; i < 20; ++i)
        {
            const arma::uword nt = 4 + 4 * (i % 3);
            const double p_total = rng.uniform(0.5, 8.0);
            arma::cx_vec f(nt);
            for (arma::uword k = 0; k < nt; ++k)
                f(k) = std::polar(1.0 / std::sqrt(static_cast<double>(nt)),
                                  rng.uniform(-pi, pi));
            const HermitianCov cu(p_total * f * f.t());
            const HermitianCov cd = distortion_covariance(cu, pa);
            const double gd = gbar_d(p_total / static_cast<double>(nt), pa);
            const arma::cx_mat expect = gd * p_total * f * f.t();
            const double scale = std::max(arma::abs(expect).max(), 1e-300);
            worst = std::max(worst, arma::abs(cd.matrix() - expect).max() / scale);
        }
        report.checks.push_back({"rank_one_hadamard_collapse", worst, 1e-12, worst < 1e-12,
                                 "C_d equals gbar_d(P/Nt) * P * F F^H for rank-one "
                                 "constant-modulus inputs"});
    }

    // --- two-route spectral efficiency consistency --------------------------
    {
        const ArrayGeometry tx{config.n_t, config.tx_spacing};
        const ArrayGeometry rx{config.n_r, config.rx_spacing};
        PathLossModel pl = config.pathloss;
        pl.shadowing_std_db = 0.0;

        double worst_consistency = 0.0;
        double worst_tight = 0.0;
        double worst_bound = 0.0;
        const double p_choices[3] = {0.1, 1.0, 10.0};

        for (arma::uword c = 0; c < config.consistency_channels; ++c)
        {
            const double p = p_choices[c % 3];

            const ChannelRealization ch =
                generate_channel(mix_seed(config.seed, 700 + c), config.n_paths, tx, rx, pl,
                                 config.angles);
            const Beamformer bf = analog_aod(ch, 1, 1, p);
            const double se14 = spectral_efficiency(ch.h, bf.covariance(), pa, noise);
            const double se15 = se_single_rf(p, ch, pa, noise);
            worst_consistency = std::max(worst_consistency, std::abs(se14 - se15));
            worst_bound = std::max(worst_bound, se_lower_bound(p, ch, pa, noise) - se15);

            const ChannelRealization ch1 = generate_channel(mix_seed(config.seed, 800000 + c), 1,
                                                            tx, rx, pl, config.angles);
            worst_tight = std::max(worst_tight, std::abs(se_lower_bound(p, ch1, pa, noise) -
                                                         se_single_rf(p, ch1, pa, noise)));
        }
        report.checks.push_back({"eq14_eq15_consistency", worst_consistency, 1e-9,
                                 worst_consistency < 1e-9,
                                 "general determinant form vs single-RF closed form with the "
                                 "rank-one beamformer"});
        report.checks.push_back({"corollary_tight_single_path", worst_tight, 1e-9,
                                 worst_tight < 1e-9,
                                 "lower bound equals the closed form for single-path channels"});
        report.checks.push_back({"corollary_bound_multipath", worst_bound, 1e-12,
                                 worst_bound < 1e-12,
                                 "lower bound never exceeds the closed form on multipath "
                                 "channels (measured: max excess)"});
    }

    // --- beampattern properties ---------------------------------------------
    {
        const ArrayGeometry tx{8, 0.5};
        const arma::vec grid = default_beampattern_grid();
        const std::vector<double> aods{0.0, -pi / 4.0, pi / 6.0, pi / 3.0, -pi / 12.0};

        arma::cx_mat f_rf(8, 1);
        f_rf.col(0) = array_response(aods[0], tx);
        const HermitianCov cu(f_rf * f_rf.t()); // P = 1, single stream
        const BussgangGain g = bussgang_gains(cu.branch_powers(), pa);
        arma::cx_mat ctu = cu.matrix();
        for (arma::uword j = 0; j < 8; ++j)
            for (arma::uword i = 0; i < 8; ++i)
                ctu(i, j) *= g.per_branch_gain(i) * std::conj(g.per_branch_gain(j));
        const BeampatternResult sig = beampattern(HermitianCov(ctu), tx, grid);
        const BeampatternResult dist = beampattern(distortion_covariance(cu, pa), tx, grid);
        if (dist.all_zero)
        {
            report.checks.push_back({"beampattern_coincidence_single_stream", 0.0, 1e-10, true,
                                     "trivially satisfied: a distortionless PA radiates no "
                                     "distortion pattern"});
            report.checks.push_back({"beampattern_flat_diagonal", 0.0, 1e-10, true,
                                     "trivially satisfied: a distortionless PA radiates no "
                                     "distortion pattern"});
        }
        else
        {
            const double coincide = arma::abs(sig.values - dist.values).max();
            report.checks.push_back({"beampattern_coincidence_single_stream", coincide, 1e-10,
                                     coincide < 1e-10,
                                     "normalized signal and distortion beampatterns match for a "
                                     "single transmitted stream"});

            const HermitianCov diag_cu(arma::cx_mat(arma::eye<arma::cx_mat>(8, 8) * cx(1.0, 0.0)));
            const BeampatternResult flat =
                beampattern(distortion_covariance(diag_cu, pa), tx, grid);
            const double flatness = arma::abs(flat.values - 1.0).max();
            report.checks.push_back({"beampattern_flat_diagonal", flatness, 1e-10,
                                     flatness < 1e-10,
                                     "distortion beampattern of a diagonal input covariance is "
                                     "omnidirectional"});
        }
    }

    // --- Bussgang orthogonality ----------------------------------------------
    {
        // Residuals against the closed-form average gain: if that gain were
        // wrong the residual would not vanish with the sample count. A
        // full-rank input exercises every (n, k) pair.
        Rng rng(mix_seed(config.seed, 900));
        const HermitianCov cu = random_full_rank(rng, 4, 1.0);
        const McEstimate est = mc_bussgang(cu, pa, config.mc_samples, mix_seed(config.seed, 901),
                                           config.n_threads);
        const BussgangGain g = bussgang_gains(cu.branch_powers(), pa);
        const arma::cx_mat resid = est.input_distortion_corr(g.per_branch_gain);
        const arma::vec p = cu.branch_powers();
        double worst = 0.0;
        if (pa.order() >= 1)
        {
            for (arma::uword k = 0; k < 4; ++k)
                for (arma::uword n = 0; n < 4; ++n)
                    worst = std::max(worst,
                                     std::abs(resid(k, n)) /
                                         std::sqrt(p(n) * std::real(est.cd_hat(k, k))));
        }
        else
        {
            // Distortionless PA: x = beta1 u holds per sample, so the raw
            // residual must vanish outright.
            worst = arma::abs(resid).max() / arma::abs(cu.matrix()).max();
        }
        report.checks.push_back({"bussgang_orthogonality", worst, 3e-3, worst < 3e-3,
                                 "normalized residual correlation between the input and the "
                                 "distortion under the closed-form gain"});
    }

    for (auto &c : report.checks)
        c.detail += " [measured " + fmt(c.measured) + " vs " +
                    (c.name.find("negative_control") != std::string::npos ? "required > "
                                                                          : "tolerance ") +
                    fmt(c.tolerance) + "]";

    return report;
}

} // namespace nlbeam
