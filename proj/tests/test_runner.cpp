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

#include "nlbeam/runner.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

using namespace nlbeam;
using Catch::Matchers::WithinRel;
namespace fs = std::filesystem;

namespace
{

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

fs::path fresh_dir(const std::string &name)
{
    const fs::path dir = fs::temp_directory_path() / "nlbeam_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig tiny_config()
{
    ExperimentConfig cfg = default_config();
    cfg.p_dbm = {-10.0, 0.0, 10.0};
    cfg.n_t_values = {4, 8};
    cfg.n_channels = 2;
    return cfg;
}

} // namespace

TEST_CASE("defaults encode the reference parameter table")
{
    const ExperimentConfig cfg = default_config();
    REQUIRE(cfg.carrier_hz == 73.0e9);
    REQUIRE(cfg.bandwidth_hz == 1.0e9);
    REQUIRE(cfg.noise_dbm == -105.0);
    REQUIRE(cfg.pathloss_fixed_db == 86.6);
    REQUIRE(cfg.pathloss_slope_db_per_decade == 24.5);
    REQUIRE(cfg.distance_m == 15.0);
    REQUIRE(cfg.pa_max_efficiency == 0.3);
    REQUIRE(cfg.pa_max_output_dbm == 6.0);
    REQUIRE(cfg.n_r == 16);
    REQUIRE(cfg.n_paths == 5);

    const PACoefficients ref = default_pa();
    REQUIRE(cfg.pa.beta == ref.beta);
    REQUIRE_THAT(std::abs(cfg.pa.beta[0]), WithinRel(2.96, 1e-15));
    REQUIRE_THAT(std::abs(cfg.pa.beta[1]), WithinRel(0.1418, 1e-15));
    REQUIRE_THAT(std::arg(cfg.pa.beta[1]), WithinRel(-2.816, 1e-12));
    REQUIRE_THAT(std::abs(cfg.pa.beta[2]), WithinRel(0.003, 1e-15));
    REQUIRE_THAT(std::arg(cfg.pa.beta[2]), WithinRel(0.39, 1e-12));

    const LinkBudget b = cfg.budget();
    REQUIRE_THAT(b.noise_power, WithinRel(3.1622776601683793e-11, 1e-14));
    REQUIRE_THAT(b.pa_max_output, WithinRel(3.9810717055349725, 1e-14));
    REQUIRE(std::isinf(b.consumed_power_cap));

    // Power grid: -20..15 dBm in 0.5 dB steps, antenna axis 4..64.
    REQUIRE(cfg.p_dbm.size() == 71);
    REQUIRE(cfg.n_t_values == std::vector<arma::uword>{4, 8, 16, 32, 64});
}

TEST_CASE("unknown config fields are schema violations with a path")
{
    nlohmann::json j;
    j["system"]["n_tt"] = 8;
    try
    {
        parse_config(j);
        FAIL("expected ConfigError");
    }
    catch (const ConfigError &e)
    {
        REQUIRE(e.field_path() == "system.n_tt");
    }
}

TEST_CASE("type and range violations carry the field path")
{
    nlohmann::json j;
    j["budget"]["pa_max_efficiency"] = 1.7;
    REQUIRE_THROWS_AS(parse_config(j), ConfigError);

    nlohmann::json j2;
    j2["system"]["n_t"] = "many";
    try
    {
        parse_config(j2);
        FAIL("expected ConfigError");
    }
    catch (const ConfigError &e)
    {
        REQUIRE(e.field_path() == "system.n_t");
    }
}

TEST_CASE("config echo parses back to the same effective config")
{
    ExperimentConfig cfg = tiny_config();
    cfg.shadowing = ShadowingMode::per_channel;
    cfg.crosstalk_enabled = true;
    cfg.crosstalk_sigma_db = -15.0;
    cfg.schemes = {Scheme::digital, Scheme::hybrid};

    const ExperimentConfig back = parse_config(config_to_json(cfg));
    REQUIRE(back.p_dbm == cfg.p_dbm);
    REQUIRE(back.n_t_values == cfg.n_t_values);
    REQUIRE(back.schemes == cfg.schemes);
    REQUIRE(back.shadowing == ShadowingMode::per_channel);
    REQUIRE(back.crosstalk_enabled);
    REQUIRE(back.crosstalk_sigma_db == -15.0);
    REQUIRE(back.pa.beta == cfg.pa.beta);
    REQUIRE(back.base_seed == cfg.base_seed);
}

TEST_CASE("partial configs keep defaults for missing sections")
{
    nlohmann::json j;
    j["system"]["n_t"] = 32;
    const ExperimentConfig cfg = parse_config(j);
    REQUIRE(cfg.n_t == 32);
    REQUIRE(cfg.n_r == 16);
    REQUIRE(cfg.noise_dbm == -105.0);
}

TEST_CASE("sweep range specification expands to a grid")
{
    nlohmann::json j;
    j["sweep"]["p_dbm_min"] = -4.0;
    j["sweep"]["p_dbm_max"] = -2.0;
    j["sweep"]["p_dbm_step"] = 1.0;
    const ExperimentConfig cfg = parse_config(j);
    REQUIRE(cfg.p_dbm == std::vector<double>{-4.0, -3.0, -2.0});

    j["sweep"]["p_dbm"] = {0.0, 1.0};
    REQUIRE_THROWS_AS(parse_config(j), ConfigError);
}

TEST_CASE("numeric output is locale-free shortest round-trip")
{
    REQUIRE(format_double(0.5) == "0.5");
    REQUIRE(format_double(-20.0) == "-20");
    REQUIRE(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    const double v = 369.8506123;
    REQUIRE(std::stod(format_double(v)) == v);
}

TEST_CASE("sweep-power writes byte-stable CSV")
{
    const ExperimentConfig cfg = tiny_config();
    RunOptions opts;
    opts.out_dir = fresh_dir("sweep_a").string();
    REQUIRE(run_subcommand("sweep-power", cfg, opts) == exit_ok);

    const std::string first = slurp(fs::path(opts.out_dir) / "sweep-power.csv");
    REQUIRE(first.rfind("P_dBm,Nt,Ns,Nrf,scheme,SE,Pcons_mW,EE_bits_per_J,seed\r\n", 0) == 0);
    // 2 n_t values x 1 scheme x 3 powers + header
    REQUIRE(std::count(first.begin(), first.end(), '\n') == 7);

    RunOptions opts2;
    opts2.out_dir = fresh_dir("sweep_b").string();
    opts2.n_threads = 4;
    REQUIRE(run_subcommand("sweep-power", cfg, opts2) == exit_ok);
    REQUIRE(slurp(fs::path(opts2.out_dir) / "sweep-power.csv") == first);

    // Manifest carries the config echo and no row errors.
    const auto manifest =
        nlohmann::json::parse(slurp(fs::path(opts.out_dir) / "sweep-power_manifest.json"));
    REQUIRE(manifest["row_errors"].empty());
    REQUIRE(manifest["config"]["seeds"]["base_seed"] == 1);
}

TEST_CASE("beampattern output has coincident columns for one stream")
{
    ExperimentConfig cfg = tiny_config();
    cfg.n_t = 8;
    cfg.n_rf = 1;
    cfg.n_s = 1;
    RunOptions opts;
    opts.out_dir = fresh_dir("pattern").string();
    REQUIRE(run_subcommand("beampattern", cfg, opts) == exit_ok);

    std::ifstream in(fs::path(opts.out_dir) / "beampattern.csv", std::ios::binary);
    std::string line;
    std::getline(in, line); // header
    REQUIRE(line == "angle_rad,signal,distortion\r");
    std::size_t rows = 0;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double sig = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        const double dist = std::stod(line.substr(c2 + 1));
        REQUIRE(std::abs(sig - dist) <= 1e-10);
        ++rows;
    }
    REQUIRE(rows == 1024);
}

TEST_CASE("json output format replaces the csv")
{
    ExperimentConfig cfg = tiny_config();
    cfg.p_dbm = {0.0};
    cfg.n_t_values = {4};
    RunOptions opts;
    opts.out_dir = fresh_dir("json_out").string();
    opts.format = OutputFormat::json;
    REQUIRE(run_subcommand("sweep-power", cfg, opts) == exit_ok);
    REQUIRE(fs::exists(fs::path(opts.out_dir) / "sweep-power.json"));
    REQUIRE_FALSE(fs::exists(fs::path(opts.out_dir) / "sweep-power.csv"));

    const auto rows = nlohmann::json::parse(slurp(fs::path(opts.out_dir) / "sweep-power.json"));
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0]["scheme"] == "analog");
}

TEST_CASE("optimize-ee emits one row per channel")
{
    ExperimentConfig cfg = tiny_config();
    cfg.n_channels = 3;
    cfg.n_t = 8;
    RunOptions opts;
    opts.out_dir = fresh_dir("p2").string();
    REQUIRE(run_subcommand("optimize-ee", cfg, opts) == exit_ok);

    const std::string csv = slurp(fs::path(opts.out_dir) / "optimize-ee.csv");
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 4); // header + 3 channels
    REQUIRE(csv.find("on_boundary") != std::string::npos);
}

TEST_CASE("unknown subcommands are rejected")
{
    REQUIRE_FALSE(is_known_subcommand("sweep"));
    REQUIRE(is_known_subcommand("ee-sweep"));
    RunOptions opts;
    opts.out_dir = fresh_dir("bad").string();
    REQUIRE(run_subcommand("sweep", tiny_config(), opts) == exit_config_error);
}
