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

#ifndef NLBEAM_BEAMFORMERS_HPP
#define NLBEAM_BEAMFORMERS_HPP

#include "nlbeam/channel.hpp"
#include "nlbeam/distortion.hpp"

namespace nlbeam
{

// Transmit filter pair. Analog entries are constant-modulus 1/sqrt(Nt)
// except for the fully digital scheme, which waives the constraint and
// says so via constant_modulus_waived.
struct Beamformer
{
    arma::cx_mat f_rf; // n_t x n_rf
    arma::cx_mat f_bb; // n_rf x n_s
    double total_input_power = 0.0;
    bool constant_modulus_waived = false;

    arma::uword n_t() const { return f_rf.n_rows; }
    arma::uword n_rf() const { return f_rf.n_cols; }
    arma::uword n_s() const { return f_bb.n_cols; }

    // C_u = F_RF F_BB F_BB^H F_RF^H with trace equal to total_input_power.
    HermitianCov covariance() const;
};

// Checks the constant-modulus invariant (unless waived) and the power
// accounting trace(C_u) == total_input_power.
void validate(const Beamformer &bf);

// RF columns matched to the AoDs of the n_rf strongest paths (by |psi|,
// ties to the lowest path index); scaled identity baseband so the total
// input power is p. Requires n_s <= n_rf <= L.
Beamformer analog_aod(const ChannelRealization &ch, arma::uword n_rf, arma::uword n_s, double p);

enum class PowerAllocation
{
    equal,
    waterfilling
};

// Fully digital: columns are the top-n_s right singular vectors of H with
// an equal power split (or linear-PA waterfilling against noise_power when
// selected). F_RF is the identity and the constant-modulus rule is waived.
Beamformer digital_eigen(const ChannelRealization &ch, arma::uword n_s, double p,
                         PowerAllocation alloc = PowerAllocation::equal,
                         double noise_power = 0.0);

// Rounds every F_RF phase to the nearest multiple of 2*pi/2^bits, keeping
// magnitudes, then rescales F_BB to restore the power accounting.
Beamformer quantize_phases(const Beamformer &bf, unsigned bits);

// Spatially sparse hybrid design: greedy orthogonal matching pursuit of the
// optimal digital precoder against an array-response dictionary, followed
// by a least-squares baseband fit. Supporting engineering, not a closed
// form from the analysis; the dictionary defaults to 256 sine-spaced beams.
Beamformer hybrid_omp(const ChannelRealization &ch, arma::uword n_rf, arma::uword n_s, double p,
                      const arma::vec &dictionary_angles_rad);

arma::vec default_dictionary(arma::uword n_points = 256);

} // namespace nlbeam

#endif
