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

#include "nlbeam/validation.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace nlbeam
{

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace
{

std::uint64_t fnv1a(const std::string &s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double unit_to_mw(double pcons, const LinkBudget &budget)
{
    return budget.unit == PowerUnit::milliwatt ? pcons : pcons * 1e3;
}

// RFC 4180: CRLF records, header row, '.' decimal via to_chars.
class CsvWriter
{
  public:
    explicit CsvWriter(const fs::path &path) : out_(path, std::ios::binary)
    {
        if (!out_)
            throw std::runtime_error("cannot open output file " + path.string());
    }

    void row(const std::vector<std::string> &fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i)
        {
            if (i)
                out_ << ',';
            out_ << fields[i];
        }
        out_ << "\r\n";
    }

  private:
    std::ofstream out_;
};

struct RowFailure
{
    std::size_t index;
    std::string description;
    std::string message;
};

void write_sweep_rows(const std::vector<SweepRow> &rows, const LinkBudget &budget,
                      const fs::path &path, OutputFormat format)
{
    if (format == OutputFormat::csv)
    {
        CsvWriter csv(path);
        csv.row({"P_dBm", "Nt", "Ns", "Nrf", "scheme", "SE", "Pcons_mW", "EE_bits_per_J",
                 "seed"});
        for (const SweepRow &r : rows)
            csv.row({format_double(r.p_dbm), std::to_string(r.n_t), std::to_string(r.n_s),
                     std::to_string(r.n_rf), to_string(r.scheme), format_double(r.se),
                     format_double(unit_to_mw(r.pcons, budget)), format_double(r.ee),
                     std::to_string(r.seed)});
    }
    else
    {
        json arr = json::array();
        for (const SweepRow &r : rows)
            arr.push_back({{"P_dBm", r.p_dbm},
                           {"Nt", r.n_t},
                           {"Ns", r.n_s},
                           {"Nrf", r.n_rf},
                           {"scheme", to_string(r.scheme)},
                           {"SE", r.se},
                           {"Pcons_mW", unit_to_mw(r.pcons, budget)},
                           {"EE_bits_per_J", r.ee},
                           {"seed", r.seed}});
        std::ofstream out(path, std::ios::binary);
        out << arr.dump(2) << "\n";
    }
}

std::vector<RowFailure> collect_failures(const std::vector<SweepRow> &rows)
{
    std::vector<RowFailure> failures;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!rows[i].ok)
            failures.push_back({i,
                                "P=" + format_double(rows[i].p_dbm) + " dBm, Nt=" +
                                    std::to_string(rows[i].n_t) + ", scheme=" +
                                    to_string(rows[i].scheme),
                                rows[i].error});
    return failures;
}

void write_manifest(const fs::path &path, const std::string &subcommand,
                    const ExperimentConfig &cfg, const RunOptions &opts,
                    const std::vector<std::string> &outputs,
                    const std::vector<RowFailure> &failures, double wall_ms,
                    const json &extra = json::object())
{
    const json cfg_json = config_to_json(cfg);
    json m;
    m["subcommand"] = subcommand;
    m["code_version"] = code_version;
    m["config"] = cfg_json;
    m["config_hash"] = fnv1a(cfg_json.dump());
    m["base_seed"] = cfg.base_seed;
    m["n_threads"] = opts.n_threads;
    m["wall_time_ms"] = wall_ms;
    m["outputs"] = outputs;

    json fails = json::array();
    for (const RowFailure &f : failures)
        fails.push_back({{"row", f.index}, {"point", f.description}, {"error", f.message}});
    m["row_errors"] = fails;

    if (!extra.empty())
        m["details"] = extra;

    std::ofstream out(path, std::ios::binary);
    out << m.dump(2) << "\n";
}

std::string data_filename(const std::string &subcommand, OutputFormat format)
{
    return subcommand + (format == OutputFormat::csv ? ".csv" : ".json");
}

int finish_sweep(const std::string &subcommand, const ExperimentConfig &cfg,
                 const RunOptions &opts, const SweepSpec &spec,
                 std::chrono::steady_clock::time_point t0)
{
    const std::vector<SweepRow> rows = sweep(spec, opts.n_threads);
    const fs::path data_path = fs::path(opts.out_dir) / data_filename(subcommand, opts.format);
    write_sweep_rows(rows, spec.budget, data_path, opts.format);

    const auto failures = collect_failures(rows);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(fs::path(opts.out_dir) / (subcommand + "_manifest.json"), subcommand, cfg,
                   opts, {data_path.filename().string()}, failures, wall_ms);

    if (!failures.empty())
    {
        std::cerr << subcommand << ": " << failures.size() << " grid point(s) failed; first: "
                  << failures.front().description << ": " << failures.front().message << "\n";
        return exit_numerical_error;
    }
    return exit_ok;
}

int run_sweep_power(const ExperimentConfig &cfg, const RunOptions &opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    return finish_sweep("sweep-power", cfg, opts, cfg.sweep_spec(), t0);
}

int run_sweep_antennas(const ExperimentConfig &cfg, const RunOptions &opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    SweepSpec spec = cfg.sweep_spec();
    spec.p_dbm = {cfg.fixed_p_dbm};
    return finish_sweep("sweep-antennas", cfg, opts, spec, t0);
}

int run_compare_schemes(const ExperimentConfig &cfg, const RunOptions &opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    SweepSpec spec = cfg.sweep_spec();
    spec.n_t = {cfg.n_t};
    if (spec.schemes.size() == 1)
        spec.schemes = {Scheme::digital, Scheme::analog, Scheme::hybrid,
                        Scheme::quantized_analog};
    return finish_sweep("compare-schemes", cfg, opts, spec, t0);
}

int run_ee_sweep(const ExperimentConfig &cfg, const RunOptions &opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    SweepSpec spec = cfg.sweep_spec();
    spec.schemes = {Scheme::analog};
    spec.n_rf = 1;
    spec.n_s = 1;
    spec.single_rf_closed_form = true;
    spec.crosstalk.reset();
    return finish_sweep("ee-sweep", cfg, opts, spec, t0);
}

int run_beampattern(const ExperimentConfig &cfg, const RunOptions &opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    const SweepSpec spec = cfg.sweep_spec();

    const ChannelRealization ch = sweep_channel(spec, cfg.n_t, 0);
    const double p = dbm_to_mw(cfg.fixed_p_dbm) * (cfg.pa.unit == PowerUnit::watt ? 1e-3 : 1.0);

    Beamformer bf;
    switch (cfg.schemes.front())
    {
    case Scheme::analog:
        bf = analog_aod(ch, cfg.n_rf, cfg.n_s, p);
        break;
    case Scheme::quantized_analog:
        bf = quantize_phases(analog_aod(ch, cfg.n_rf, cfg.n_s, p), cfg.quantization_bits);
        break;
    case Scheme::digital:
        bf = digital_eigen(ch, cfg.n_s, p, cfg.digital_allocation, spec.budget.noise_power);
        break;
    case Scheme::hybrid:
        bf = hybrid_omp(ch, cfg.n_rf, cfg.n_s, p, default_dictionary(cfg.dictionary_size));
        break;
    }

    const HermitianCov cu = bf.covariance();
    const BussgangGain g = bussgang_gains(cu.branch_powers(), cfg.pa);
    arma::cx_mat ctu = cu.matrix();
    for (arma::uword j = 0; j < ctu.n_cols; ++j)
        for (arma::uword i = 0; i < ctu.n_rows; ++i)
            ctu(i, j) *= g.per_branch_gain(i) * std::conj(g.per_branch_gain(j));

    const arma::vec grid = default_beampattern_grid();
    const ArrayGeometry tx{cfg.n_t, cfg.tx_spacing};
    const BeampatternResult sig = beampattern(HermitianCov(ctu), tx, grid);
    const BeampatternResult dist = beampattern(distortion_covariance(cu, cfg.pa), tx, grid);

    const fs::path data_path = fs::path(opts.out_dir) / data_filename("beampattern", opts.format);
    if (opts.format == OutputFormat::csv)
    {
        CsvWriter csv(data_path);
        csv.row({"angle_rad", "signal", "distortion"});
        for (arma::uword i = 0; i < grid.n_elem; ++i)
            csv.row({format_double(grid(i)), format_double(sig.values(i)),
                     format_double(dist.values(i))});
    }
    else
    {
        json arr = json::array();
        for (arma::uword i = 0; i < grid.n_elem; ++i)
            arr.push_back({{"angle_rad", grid(i)},
                           {"signal", sig.values(i)},
                           {"distortion", dist.values(i)}});
        std::ofstream out(data_path, std::ios::binary);
        out << arr.dump(2) << "\n";
    }

    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(fs::path(opts.out_dir) / "beampattern_manifest.json", "beampattern", cfg, opts,
                   {data_path.filename().string()}, {}, wall_ms,
                   json{{"signal_all_zero", sig.all_zero}, {"distortion_all_zero", dist.all_zero},
                        {"scheme", to_string(cfg.schemes.front())}});
    return exit_ok;
}

int run_optimize_ee(const ExperimentConfig &cfg, const RunOptions &opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    const SweepSpec spec = cfg.sweep_spec();
    const LinkBudget budget = cfg.budget();

    struct Entry
    {
        P2Solution sol;
        std::uint64_t seed;
        bool ok = true;
        std::string error;
    };
    std::vector<Entry> entries(cfg.n_channels);

    parallel_for(cfg.n_channels, opts.n_threads, [&](std::size_t c) {
        Entry &e = entries[c];
        e.seed = mix_seed(cfg.base_seed, c);
        try
        {
            const ChannelRealization ch = sweep_channel(spec, cfg.n_t, c);
            e.sol = solve_p2(ch, cfg.pa, budget, cfg.ee_bounds_dbm);
        }
        catch (const std::exception &ex)
        {
            e.ok = false;
            e.error = ex.what();
        }
    });

    const fs::path data_path = fs::path(opts.out_dir) / data_filename("optimize-ee", opts.format);
    std::vector<RowFailure> failures;
    if (opts.format == OutputFormat::csv)
    {
        CsvWriter csv(data_path);
        csv.row({"channel", "seed", "p_star_dBm", "SE", "Pcons_mW", "EE_bits_per_J",
                 "on_boundary", "feasible"});
        for (std::size_t c = 0; c < entries.size(); ++c)
        {
            const Entry &e = entries[c];
            csv.row({std::to_string(c), std::to_string(e.seed),
                     format_double(e.ok && e.sol.feasible
                                       ? mw_to_dbm(unit_to_mw(e.sol.p_star, budget))
                                       : std::numeric_limits<double>::quiet_NaN()),
                     format_double(e.ok ? e.sol.se_at_star : std::numeric_limits<double>::quiet_NaN()),
                     format_double(e.ok ? unit_to_mw(e.sol.pcons_at_star, budget)
                                        : std::numeric_limits<double>::quiet_NaN()),
                     format_double(e.ok ? e.sol.ee_star : std::numeric_limits<double>::quiet_NaN()),
                     e.ok && e.sol.on_constraint_boundary ? "true" : "false",
                     e.ok && e.sol.feasible ? "true" : "false"});
            if (!e.ok)
                failures.push_back({c, "channel " + std::to_string(c), e.error});
        }
    }
    else
    {
        json arr = json::array();
        for (std::size_t c = 0; c < entries.size(); ++c)
        {
            const Entry &e = entries[c];
            arr.push_back({{"channel", c},
                           {"seed", e.seed},
                           {"p_star", e.sol.p_star},
                           {"SE", e.sol.se_at_star},
                           {"Pcons_mW", unit_to_mw(e.sol.pcons_at_star, budget)},
                           {"EE_bits_per_J", e.sol.ee_star},
                           {"on_boundary", e.sol.on_constraint_boundary},
                           {"feasible", e.sol.feasible}});
            if (!e.ok)
                failures.push_back({c, "channel " + std::to_string(c), e.error});
        }
        std::ofstream out(data_path, std::ios::binary);
        out << arr.dump(2) << "\n";
    }

    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(fs::path(opts.out_dir) / "optimize-ee_manifest.json", "optimize-ee", cfg, opts,
                   {data_path.filename().string()}, failures, wall_ms);
    return failures.empty() ? exit_ok : exit_numerical_error;
}

int run_validate(const ExperimentConfig &cfg, const RunOptions &opts)
{
    const auto t0 = std::chrono::steady_clock::now();

    ValidationConfig vc;
    vc.pa = cfg.pa;
    vc.budget = cfg.budget();
    vc.n_t = cfg.n_t;
    vc.n_r = cfg.n_r;
    vc.n_paths = cfg.n_paths;
    vc.tx_spacing = cfg.tx_spacing;
    vc.rx_spacing = cfg.rx_spacing;
    vc.pathloss = cfg.pathloss();
    vc.angles = cfg.angles;
    vc.seed = cfg.base_seed;
    vc.n_threads = opts.n_threads;

    const ValidationReport report = validate_all(vc);

    json checks = json::array();
    for (const CheckResult &c : report.checks)
    {
        checks.push_back({{"check", c.name},
                          {"measured_error", c.measured},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"detail", c.detail}});
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name
                  << " (measured " << format_double(c.measured) << ", tolerance "
                  << format_double(c.tolerance) << ")\n";
    }

    const fs::path report_path = fs::path(opts.out_dir) / "validate_report.json";
    {
        json j;
        j["checks"] = checks;
        j["all_pass"] = report.all_pass();
        std::ofstream out(report_path, std::ios::binary);
        out << j.dump(2) << "\n";
    }

    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(fs::path(opts.out_dir) / "validate_manifest.json", "validate", cfg, opts,
                   {"validate_report.json"}, {}, wall_ms);

    if (!report.all_pass())
    {
        std::cerr << "validate: FAILED check '" << report.first_failure()->name << "'\n";
        return exit_validation_failed;
    }
    return exit_ok;
}

} // namespace

bool is_known_subcommand(const std::string &name)
{
    return name == "sweep-power" || name == "sweep-antennas" || name == "beampattern" ||
           name == "ee-sweep" || name == "optimize-ee" || name == "compare-schemes" ||
           name == "validate";
}

int run_subcommand(const std::string &name, const ExperimentConfig &cfg, const RunOptions &opts)
{
    fs::create_directories(opts.out_dir);

    if (name == "sweep-power")
        return run_sweep_power(cfg, opts);
    if (name == "sweep-antennas")
        return run_sweep_antennas(cfg, opts);
    if (name == "beampattern")
        return run_beampattern(cfg, opts);
    if (name == "ee-sweep")
        return run_ee_sweep(cfg, opts);
    if (name == "optimize-ee")
        return run_optimize_ee(cfg, opts);
    if (name == "compare-schemes")
        return run_compare_schemes(cfg, opts);
    if (name == "validate")
        return run_validate(cfg, opts);

    std::cerr << "unknown subcommand '" << name << "'\n";
    return exit_config_error;
}

} // namespace nlbeam
