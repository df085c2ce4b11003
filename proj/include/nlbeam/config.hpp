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

#ifndef NLBEAM_CONFIG_HPP
#define NLBEAM_CONFIG_HPP

#include "nlbeam/ee_optimizer.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>

namespace nlbeam
{

// Schema violation with the path of the offending field ("budget.noise_dbm").
class ConfigError : public std::runtime_error
{
  public:
    ConfigError(std::string field_path, const std::string &message)
        : std::runtime_error(field_path + ": " + message), field_(std::move(field_path))
    {
    }

    const std::string &field_path() const { return field_; }

  private:
    std::string field_;
};

// Experiment description. Defaults encode the reference parameter set:
// 73 GHz carrier, 1 GHz bandwidth, -105 dBm noise, 86.6+24.5*log10(d) dB
// path loss at d = 15 m, the built-in fifth-order PA, eta_max = 0.3,
// P_max = 6 dBm, N_r = 16 and L = 5 paths.
struct ExperimentConfig
{
    // system
    arma::uword n_t = 16;
    arma::uword n_r = 16;
    arma::uword n_rf = 1;
    arma::uword n_s = 1;
    arma::uword n_paths = 5;
    double distance_m = 15.0;
    double tx_spacing = 0.5;
    double rx_spacing = 0.5;
    double carrier_hz = 73.0e9; // informational; geometry is wavelength-normalized

    // pa
    PACoefficients pa = default_pa();

    // budget (dBm at this boundary, converted once at use)
    double noise_dbm = -105.0;
    double bandwidth_hz = 1.0e9;
    double pa_max_output_dbm = 6.0;
    double pa_max_efficiency = 0.3;
    double consumed_power_cap_dbm = arma::datum::inf; // P_0 unconstrained by default

    // channel
    double pathloss_fixed_db = 86.6;
    double pathloss_slope_db_per_decade = 24.5;
    double shadowing_std_db = 8.0;
    ShadowingMode shadowing = ShadowingMode::disabled;
    AngleDistribution angles;

    // sweep axes
    std::vector<double> p_dbm;            // power axis (default -20..15 by 0.5)
    std::vector<arma::uword> n_t_values;  // antenna axis (default {4,8,16,32,64})
    double fixed_p_dbm = 10.0;            // power used by sweep-antennas
    std::vector<Scheme> schemes{Scheme::analog};

    // scheme knobs
    unsigned quantization_bits = 4;
    arma::uword dictionary_size = 256;
    PowerAllocation digital_allocation = PowerAllocation::equal;

    // optional crosstalk
    bool crosstalk_enabled = false;
    CrosstalkModel crosstalk_model = CrosstalkModel::identity_plus_offdiag;
    double crosstalk_sigma_db = -20.0;

    // seeds
    std::uint64_t base_seed = 1;
    arma::uword n_channels = 100;

    // P2 search bounds
    std::pair<double, double> ee_bounds_dbm{-40.0, 20.0};

    LinkBudget budget() const;
    PathLossModel pathloss() const;
    SweepSpec sweep_spec() const;
};

ExperimentConfig default_config();

// Strict parse: unknown keys, wrong types and out-of-range values all
// raise ConfigError with the field path. A missing section keeps defaults.
ExperimentConfig parse_config(const nlohmann::json &j);
ExperimentConfig load_config_file(const std::string &path);

// Canonical echo of the effective config (defaults filled in).
nlohmann::json config_to_json(const ExperimentConfig &cfg);

} // namespace nlbeam

#endif
