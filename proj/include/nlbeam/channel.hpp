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

#ifndef NLBEAM_CHANNEL_HPP
#define NLBEAM_CHANNEL_HPP

#include "nlbeam/common.hpp"

#include <cstdint>
#include <vector>

namespace nlbeam
{

// Uniform linear array, element spacing normalized to the carrier wavelength.
struct ArrayGeometry
{
    arma::uword num_elements = 1;
    double spacing = 0.5;
};

void validate(const ArrayGeometry &g);

// Large-scale attenuation: fixed_db + slope_db_per_decade*log10(d) plus an
// optional log-normal shadowing term drawn at channel generation time.
struct PathLossModel
{
    double fixed_db = 86.6;
    double slope_db_per_decade = 24.5;
    double shadowing_std_db = 0.0;
    double distance_m = 15.0;

    double mean_path_loss_db() const
    {
        return fixed_db + slope_db_per_decade * std::log10(distance_m);
    }
};

void validate(const PathLossModel &pl);

struct AngleDistribution
{
    enum class Kind
    {
        uniform_angle, // angle uniform on [min_rad, max_rad)
        uniform_sine   // sin(angle) uniform on [sin(min_rad), sin(max_rad))
    };

    Kind kind = Kind::uniform_angle;
    double min_rad = -pi / 2.0;
    double max_rad = pi / 2.0;

    static AngleDistribution uniform(double lo = -pi / 2.0, double hi = pi / 2.0)
    {
        return AngleDistribution{Kind::uniform_angle, lo, hi};
    }
};

void validate(const AngleDistribution &dist);

// One multipath realization. h is assembled as
//   sqrt(Nt*Nr/L) * sum_l psi_l * a_r(aoa_l) * a_t(aod_l)^H
// and keeps the per-path quantities alongside so beamformers can match
// against individual paths.
struct ChannelRealization
{
    arma::cx_mat h;          // n_r x n_t
    arma::cx_vec path_gains; // psi, length L
    std::vector<double> aod; // radians, length L
    std::vector<double> aoa; // radians, length L
    ArrayGeometry tx_geometry;
    ArrayGeometry rx_geometry;
    arma::uword n_paths = 0;
    double shadowing_db = 0.0; // the zeta value actually drawn (0 when disabled)
    std::uint64_t seed = 0;
};

// Unit-norm steering vector; element k is exp(-j*2*pi*k*D*sin(angle))/sqrt(N).
arma::cx_vec array_response(double angle_rad, const ArrayGeometry &g);

// Deterministic per seed. Draw order within the stream is fixed:
// shadowing (when enabled), then path gains, then AoDs, then AoAs.
ChannelRealization generate_channel(std::uint64_t seed, arma::uword n_paths,
                                    const ArrayGeometry &tx, const ArrayGeometry &rx,
                                    const PathLossModel &pl, const AngleDistribution &angles);

// Standalone shadowing draw for callers that freeze large-scale fading
// across realizations (fold the value into PathLossModel::fixed_db and
// generate with shadowing_std_db = 0).
double draw_shadowing_db(std::uint64_t seed, double std_db);

struct DominantPath
{
    double aod = 0.0;
    double aoa = 0.0;
    arma::uword index = 0;
};

// Path with the largest |psi|; ties resolve to the lowest index.
DominantPath dominant_path(const ChannelRealization &ch);

// Effective single-RF channel H * a_t(aod_max), length n_r.
arma::cx_vec effective_channel(const ChannelRealization &ch);

// delta = |a_r(aoa_max)^H H a_t(aod_max)|^2
double effective_channel_gain(const ChannelRealization &ch);

} // namespace nlbeam

#endif
