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

#ifndef NLBEAM_DISTORTION_HPP
#define NLBEAM_DISTORTION_HPP

#include "nlbeam/common.hpp"
#include "nlbeam/pa_model.hpp"

#include <cstdint>

namespace nlbeam
{

// Hermitian PSD covariance. Construction validates Hermitian symmetry to
// 1e-12 (relative to the largest entry) and eigenvalues >= -1e-10*trace,
// then stores the exactly symmetrized (C + C^H)/2. Eigenvalues are never
// clipped; a matrix outside tolerance is rejected rather than repaired.
class HermitianCov
{
  public:
    explicit HermitianCov(arma::cx_mat m);

    const arma::cx_mat &matrix() const { return m_; }
    arma::uword size() const { return m_.n_rows; }

    // Real diagonal; entry n is the branch power P_n.
    arma::vec branch_powers() const { return arma::real(m_.diag()); }

    double trace_real() const { return arma::trace(arma::real(m_)); }

  private:
    arma::cx_mat m_;
};

// Entry (i,j) of the Hadamard product chain with (m+1) copies of C and m
// copies of C^T, which collapses to |C_ij|^{2m} * C_ij.
arma::cx_mat hadamard_power_term(const arma::cx_mat &cu, arma::uword m);

// Closed-form covariance of the nonlinear distortion vector:
//   C_d = sum_{m=1}^{M} Gamma_m (C_u^{o(m+1)} o (C_u^T)^{o m}) Gamma_m^H
// with Gamma_m = diag(gamma_m(P_1), ..., gamma_m(P_N)). Zero for a linear PA.
HermitianCov distortion_covariance(const HermitianCov &cu, const PACoefficients &pa);

// Pre-PA antenna coupling matrix B_TX.
struct CrosstalkMatrix
{
    arma::cx_mat matrix;
};

enum class CrosstalkModel
{
    identity_plus_offdiag, // unit direct path, CN(0, sigma_ct^2) leakage
    literal_iid            // every entry CN(0, sigma_ct^2)
};

// Coupled input covariance B C_u B^H. Downstream consumers recompute the
// branch powers from the result and use it wherever C_u appeared.
HermitianCov apply_crosstalk(const HermitianCov &cu, const CrosstalkMatrix &b);

// Entries are drawn row by row, column-major within a row excluded as
// appropriate for the model; deterministic per seed.
CrosstalkMatrix sample_crosstalk(std::uint64_t seed, arma::uword n_t, double sigma_ct_sq,
                                 CrosstalkModel model);

} // namespace nlbeam

#endif
