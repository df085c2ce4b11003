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

#include <stdexcept>

namespace nlbeam
{

namespace
{
constexpr double hermitian_rel_tol = 1e-12;
constexpr double psd_trace_tol = 1e-10;
} // namespace

HermitianCov::HermitianCov(arma::cx_mat m)
{
    if (m.n_rows != m.n_cols)
        throw std::invalid_argument("HermitianCov: matrix must be square");
    if (!m.is_finite())
        throw std::invalid_argument("HermitianCov: matrix must be finite");

    const double scale = std::max(1e-300, arma::abs(m).max());
    const double asym = arma::abs(m - m.t()).max();
    if (asym > hermitian_rel_tol * scale)
        throw std::invalid_argument("HermitianCov: matrix is not Hermitian within tolerance");

    m_ = (m + m.t()) / 2.0;

    arma::vec eigs;
    if (!arma::eig_sym(eigs, m_))
        throw std::invalid_argument("HermitianCov: eigenvalue check failed");
    const double tr = arma::sum(eigs);
    if (eigs.min() < -psd_trace_tol * std::max(tr, 0.0) - 1e-300)
        throw std::invalid_argument("HermitianCov: matrix is not PSD within tolerance");
}

arma::cx_mat hadamard_power_term(const arma::cx_mat &cu, arma::uword m)
{
    if (m < 1)
        throw std::invalid_argument("hadamard_power_term: m must be >= 1");

    arma::cx_mat out(cu.n_rows, cu.n_cols);
    for (arma::uword j = 0; j < cu.n_cols; ++j)
        for (arma::uword i = 0; i < cu.n_rows; ++i)
        {
            const cx c = cu(i, j);
            out(i, j) = std::pow(std::norm(c), static_cast<double>(m)) * c;
        }
    return out;
}

HermitianCov distortion_covariance(const HermitianCov &cu, const PACoefficients &pa)
{
    validate(pa);
    const arma::uword n = cu.size();
    const arma::vec powers = cu.branch_powers();

    arma::cx_mat cd(n, n, arma::fill::zeros);
    for (arma::uword m = 1; m <= pa.order(); ++m)
    {
        arma::cx_vec gel(n);
        for (arma::uword k = 0; k < n; ++k)
            gel(k) = gamma_m(powers(k), m, pa);

        const arma::cx_mat term = hadamard_power_term(cu.matrix(), m);
        for (arma::uword j = 0; j < n; ++j)
            for (arma::uword i = 0; i < n; ++i)
                cd(i, j) += gel(i) * std::conj(gel(j)) * term(i, j);
    }

    return HermitianCov(cd);
}

HermitianCov apply_crosstalk(const HermitianCov &cu, const CrosstalkMatrix &b)
{
    if (b.matrix.n_rows != cu.size() || b.matrix.n_cols != cu.size())
        throw std::invalid_argument("apply_crosstalk: dimension mismatch");
    if (!b.matrix.is_finite())
        throw std::invalid_argument("apply_crosstalk: coupling matrix must be finite");

    return HermitianCov(b.matrix * cu.matrix() * b.matrix.t());
}

CrosstalkMatrix sample_crosstalk(std::uint64_t seed, arma::uword n_t, double sigma_ct_sq,
                                 CrosstalkModel model)
{
    if (sigma_ct_sq < 0.0 || !std::isfinite(sigma_ct_sq))
        throw std::invalid_argument("sample_crosstalk: sigma_ct_sq must be >= 0 and finite");
    if (n_t < 1)
        throw std::invalid_argument("sample_crosstalk: n_t must be >= 1");

    Rng rng(seed);
    CrosstalkMatrix b;
    b.matrix.set_size(n_t, n_t);

    for (arma::uword i = 0; i < n_t; ++i)
        for (arma::uword j = 0; j < n_t; ++j)
        {
            if (model == CrosstalkModel::identity_plus_offdiag && i == j)
                b.matrix(i, j) = cx(1.0, 0.0);
            else
                b.matrix(i, j) = rng.cgauss(sigma_ct_sq);
        }
    return b;
}

} // namespace nlbeam
