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

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
    CLI::App app{"nlbeam - mmWave MIMO link experiments with nonlinear power amplifiers"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    unsigned threads = 1;
    std::uint64_t seed_override = 0;
    bool seed_given = false;

    const std::vector<std::string> names{"sweep-power",  "sweep-antennas", "beampattern",
                                         "ee-sweep",     "optimize-ee",    "compare-schemes",
                                         "validate"};
    const std::vector<std::string> descriptions{
        "SE/EE over the input power grid",
        "SE/EE over the transmit antenna grid at a fixed power",
        "normalized signal and distortion beampatterns",
        "single-RF closed-form EE over the power grid",
        "solve the single-RF energy-efficiency problem per channel",
        "all beamforming schemes over the power grid",
        "run the closed-form-vs-oracle validation suite"};

    for (std::size_t i = 0; i < names.size(); ++i)
    {
        CLI::App *sub = app.add_subcommand(names[i], descriptions[i]);
        sub->add_option("--config", config_path, "JSON experiment config (defaults when omitted)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", format, "data file format: csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--threads", threads, "worker thread cap");
        sub->add_option("--seed", seed_override, "override seeds.base_seed")
            ->each([&](const std::string &) { seed_given = true; });
    }

    CLI11_PARSE(app, argc, argv);

    const std::string subcommand = app.get_subcommands().front()->get_name();

    nlbeam::ExperimentConfig cfg;
    try
    {
        cfg = config_path.empty() ? nlbeam::default_config()
                                  : nlbeam::load_config_file(config_path);
    }
    catch (const nlbeam::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return nlbeam::exit_config_error;
    }
    if (seed_given)
        cfg.base_seed = seed_override;

    nlbeam::RunOptions opts;
    opts.out_dir = out_dir;
    opts.format = format == "csv" ? nlbeam::OutputFormat::csv : nlbeam::OutputFormat::json;
    opts.n_threads = threads == 0 ? 1 : threads;

    try
    {
        return nlbeam::run_subcommand(subcommand, cfg, opts);
    }
    catch (const nlbeam::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return nlbeam::exit_config_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << subcommand << " failed: " << e.what() << "\n";
        return nlbeam::exit_numerical_error;
    }
}
