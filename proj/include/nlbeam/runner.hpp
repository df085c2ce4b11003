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

#ifndef NLBEAM_RUNNER_HPP
#define NLBEAM_RUNNER_HPP

#include "nlbeam/config.hpp"

#include <string>

namespace nlbeam
{

inline constexpr const char *code_version = "nlbeam 0.1.0";

enum class OutputFormat
{
    csv,
    json
};

struct RunOptions
{
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::csv;
    unsigned n_threads = 1;
};

// Exit codes shared by the runner and the CLI.
inline constexpr int exit_ok = 0;
inline constexpr int exit_validation_failed = 1;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_numerical_error = 3;

// Dispatch for one subcommand: sweep-power, sweep-antennas, beampattern,
// ee-sweep, optimize-ee, compare-schemes, validate. Writes the data file
// plus a JSON manifest (config echo, seeds, wall time, failures) into
// opts.out_dir and returns the process exit code. Identical config + seed
// produce byte-identical data files for any thread count.
int run_subcommand(const std::string &name, const ExperimentConfig &cfg, const RunOptions &opts);

bool is_known_subcommand(const std::string &name);

// Shortest-round-trip decimal rendering used for all numeric output so
// files are byte-stable across runs and locales.
std::string format_double(double v);

} // namespace nlbeam

#endif
