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

#ifndef NLBEAM_SERIALIZE_HPP
#define NLBEAM_SERIALIZE_HPP

#include "nlbeam/beamformers.hpp"
#include "nlbeam/channel.hpp"
#include "nlbeam/distortion.hpp"

#include <json.hpp>

namespace nlbeam
{

// Complex values serialize as [re, im]; matrices as
// {"rows": r, "cols": c, "data": [[re, im], ...]} in row-major order, the
// shared wire format for channels, covariances and beamformers.
nlohmann::json to_json(cx z);
nlohmann::json to_json(const arma::cx_mat &m);
nlohmann::json to_json(const arma::cx_vec &v);

cx cx_from_json(const nlohmann::json &j);
arma::cx_mat cx_mat_from_json(const nlohmann::json &j);
arma::cx_vec cx_vec_from_json(const nlohmann::json &j);

nlohmann::json to_json(const ChannelRealization &ch);
ChannelRealization channel_from_json(const nlohmann::json &j);

nlohmann::json to_json(const Beamformer &bf);
Beamformer beamformer_from_json(const nlohmann::json &j);

nlohmann::json to_json(const HermitianCov &c);
HermitianCov cov_from_json(const nlohmann::json &j);

// PA coefficient sets load either as magnitude/phase pairs or re/im pairs:
//   {"format": "mag_phase" | "re_im", "unit": "milliwatt" | "watt",
//    "coefficients": [[a, b], ...]}
PACoefficients pa_from_json(const nlohmann::json &j);
nlohmann::json to_json(const PACoefficients &pa);

} // namespace nlbeam

#endif
