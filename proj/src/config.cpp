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

#include "nlbeam/config.hpp"

#include "nlbeam/serialize.hpp"

#include <fstream>
#include <set>

namespace nlbeam
{

using nlohmann::json;

LinkBudget ExperimentConfig::budget() const
{
    LinkBudget b;
    b.noise_power = dbm_to_mw(noise_dbm);
    b.bandwidth_hz = bandwidth_hz;
    b.pa_max_output = dbm_to_mw(pa_max_output_dbm);
    b.pa_max_efficiency = pa_max_efficiency;
    b.consumed_power_cap =
        std::isinf(consumed_power_cap_dbm) ? arma::datum::inf : dbm_to_mw(consumed_power_cap_dbm);
    b.unit = pa.unit;
    if (pa.unit == PowerUnit::watt)
    {
        b.noise_power *= 1e-3;
        b.pa_max_output *= 1e-3;
        if (!std::isinf(b.consumed_power_cap))
            b.consumed_power_cap *= 1e-3;
    }
    return b;
}

PathLossModel ExperimentConfig::pathloss() const
{
    PathLossModel pl;
    pl.fixed_db = pathloss_fixed_db;
    pl.slope_db_per_decade = pathloss_slope_db_per_decade;
    pl.shadowing_std_db = shadowing_std_db;
    pl.distance_m = distance_m;
    return pl;
}

SweepSpec ExperimentConfig::sweep_spec() const
{
    SweepSpec s;
    s.p_dbm = p_dbm;
    s.n_t = n_t_values;
    s.schemes = schemes;
    s.n_r = n_r;
    s.n_rf = n_rf;
    s.n_s = n_s;
    s.n_paths = n_paths;
    s.tx_spacing = tx_spacing;
    s.rx_spacing = rx_spacing;
    s.pathloss = pathloss();
    s.angles = angles;
    s.shadowing = shadowing;
    s.pa = pa;
    s.budget = budget();
    s.base_seed = base_seed;
    s.n_channels = n_channels;
    if (crosstalk_enabled)
        s.crosstalk = CrosstalkSpec{crosstalk_model, db_to_linear(crosstalk_sigma_db)};
    s.quantization_bits = quantization_bits;
    s.dictionary_size = dictionary_size;
    s.digital_allocation = digital_allocation;
    return s;
}

namespace
{

std::vector<double> dbm_grid(double lo, double hi, double step)
{
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i)
        grid[i] = lo + static_cast<double>(i) * step;
    return grid;
}

} // namespace

ExperimentConfig default_config()
{
    ExperimentConfig cfg;
    cfg.p_dbm = dbm_grid(-20.0, 15.0, 0.5);
    cfg.n_t_values = {4, 8, 16, 32, 64};
    return cfg;
}

namespace
{

class Reader
{
  public:
    Reader(const json &j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object())
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    ~Reader() = default;

    bool has(const char *key)
    {
        seen_.insert(key);
        return j_.contains(key);
    }

    const json &at(const char *key) { return j_.at(key); }

    template <typename T>
    void read_number(const char *key, T &out, double lo, double hi, bool integer = false)
    {
        if (!has(key))
            return;
        const json &v = j_.at(key);
        if (!v.is_number())
            throw ConfigError(field(key), "expected a number");
        const double d = v.get<double>();
        if (integer && d != std::floor(d))
            throw ConfigError(field(key), "expected an integer");
        if (d < lo || d > hi)
            throw ConfigError(field(key),
                              "out of range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                  "]");
        out = static_cast<T>(d);
    }

    void read_bool(const char *key, bool &out)
    {
        if (!has(key))
            return;
        if (!j_.at(key).is_boolean())
            throw ConfigError(field(key), "expected a boolean");
        out = j_.at(key).get<bool>();
    }

    void read_string(const char *key, std::string &out)
    {
        if (!has(key))
            return;
        if (!j_.at(key).is_string())
            throw ConfigError(field(key), "expected a string");
        out = j_.at(key).get<std::string>();
    }

    std::string field(const char *key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

    void reject_unknown() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(path_.empty() ? it.key() : path_ + "." + it.key(),
                                  "unknown field");
    }

  private:
    const json &j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::vector<double> read_number_list(const json &v, const std::string &path, double lo, double hi)
{
    if (!v.is_array() || v.empty())
        throw ConfigError(path, "expected a nonempty array of numbers");
    std::vector<double> out;
    for (const json &e : v)
    {
        if (!e.is_number())
            throw ConfigError(path, "expected numbers");
        const double d = e.get<double>();
        if (d < lo || d > hi)
            throw ConfigError(path, "entry out of range");
        out.push_back(d);
    }
    return out;
}

} // namespace

ExperimentConfig parse_config(const json &j)
{
    ExperimentConfig cfg = default_config();
    Reader root(j, "");

    if (root.has("system"))
    {
        Reader sys(root.at("system"), "system");
        sys.read_number("n_t", cfg.n_t, 1, 4096, true);
        sys.read_number("n_r", cfg.n_r, 1, 4096, true);
        sys.read_number("n_rf", cfg.n_rf, 1, 4096, true);
        sys.read_number("n_s", cfg.n_s, 1, 4096, true);
        sys.read_number("n_paths", cfg.n_paths, 1, 1024, true);
        sys.read_number("distance_m", cfg.distance_m, 1e-6, 1e9);
        sys.read_number("tx_spacing", cfg.tx_spacing, 1e-6, 1e3);
        sys.read_number("rx_spacing", cfg.rx_spacing, 1e-6, 1e3);
        sys.read_number("carrier_hz", cfg.carrier_hz, 1.0, 1e15);
        sys.reject_unknown();
    }

    if (root.has("pa"))
    {
        try
        {
            cfg.pa = pa_from_json(root.at("pa"));
        }
        catch (const std::exception &e)
        {
            throw ConfigError("pa", e.what());
        }
    }

    if (root.has("budget"))
    {
        Reader b(root.at("budget"), "budget");
        b.read_number("noise_dbm", cfg.noise_dbm, -300.0, 100.0);
        b.read_number("bandwidth_hz", cfg.bandwidth_hz, 1.0, 1e15);
        b.read_number("pa_max_output_dbm", cfg.pa_max_output_dbm, -100.0, 100.0);
        b.read_number("pa_max_efficiency", cfg.pa_max_efficiency, 1e-9, 1.0);
        if (b.has("consumed_power_cap_dbm"))
        {
            const json &v = b.at("consumed_power_cap_dbm");
            if (v.is_null())
                cfg.consumed_power_cap_dbm = arma::datum::inf;
            else if (v.is_number())
                cfg.consumed_power_cap_dbm = v.get<double>();
            else
                throw ConfigError("budget.consumed_power_cap_dbm", "expected a number or null");
        }
        b.reject_unknown();
    }

    if (root.has("channel"))
    {
        Reader c(root.at("channel"), "channel");
        c.read_number("pathloss_fixed_db", cfg.pathloss_fixed_db, -100.0, 400.0);
        c.read_number("pathloss_slope_db_per_decade", cfg.pathloss_slope_db_per_decade, 0.0,
                      200.0);
        c.read_number("shadowing_std_db", cfg.shadowing_std_db, 0.0, 100.0);

        std::string mode = "disabled";
        if (cfg.shadowing == ShadowingMode::per_channel)
            mode = "per_channel";
        if (cfg.shadowing == ShadowingMode::frozen)
            mode = "frozen";
        c.read_string("shadowing", mode);
        if (mode == "disabled")
            cfg.shadowing = ShadowingMode::disabled;
        else if (mode == "per_channel")
            cfg.shadowing = ShadowingMode::per_channel;
        else if (mode == "frozen")
            cfg.shadowing = ShadowingMode::frozen;
        else
            throw ConfigError("channel.shadowing",
                              "must be 'disabled', 'per_channel' or 'frozen'");

        std::string dist = "uniform";
        c.read_string("angle_distribution", dist);
        if (dist == "uniform")
            cfg.angles.kind = AngleDistribution::Kind::uniform_angle;
        else if (dist == "uniform_sine")
            cfg.angles.kind = AngleDistribution::Kind::uniform_sine;
        else
            throw ConfigError("channel.angle_distribution",
                              "must be 'uniform' or 'uniform_sine'");

        double min_deg = cfg.angles.min_rad * 180.0 / pi;
        double max_deg = cfg.angles.max_rad * 180.0 / pi;
        c.read_number("angle_min_deg", min_deg, -90.0, 90.0);
        c.read_number("angle_max_deg", max_deg, -90.0, 90.0);
        cfg.angles.min_rad = min_deg * pi / 180.0;
        cfg.angles.max_rad = max_deg * pi / 180.0;
        if (!(cfg.angles.min_rad < cfg.angles.max_rad))
            throw ConfigError("channel.angle_min_deg", "must be below angle_max_deg");
        c.reject_unknown();
    }

    if (root.has("sweep"))
    {
        Reader s(root.at("sweep"), "sweep");
        bool explicit_list = false;
        if (s.has("p_dbm"))
        {
            cfg.p_dbm = read_number_list(s.at("p_dbm"), "sweep.p_dbm", -300.0, 100.0);
            explicit_list = true;
        }
        double pmin = -20.0, pmax = 15.0, pstep = 0.5;
        bool have_range = s.has("p_dbm_min") || s.has("p_dbm_max") || s.has("p_dbm_step");
        s.read_number("p_dbm_min", pmin, -300.0, 100.0);
        s.read_number("p_dbm_max", pmax, -300.0, 100.0);
        s.read_number("p_dbm_step", pstep, 1e-6, 100.0);
        if (have_range)
        {
            if (explicit_list)
                throw ConfigError("sweep.p_dbm", "give either a list or a min/max/step range");
            if (!(pmin <= pmax))
                throw ConfigError("sweep.p_dbm_min", "must be <= p_dbm_max");
            cfg.p_dbm = dbm_grid(pmin, pmax, pstep);
        }
        if (s.has("n_t"))
        {
            const auto list = read_number_list(s.at("n_t"), "sweep.n_t", 1.0, 4096.0);
            cfg.n_t_values.clear();
            for (double v : list)
            {
                if (v != std::floor(v))
                    throw ConfigError("sweep.n_t", "expected integers");
                cfg.n_t_values.push_back(static_cast<arma::uword>(v));
            }
        }
        s.read_number("fixed_p_dbm", cfg.fixed_p_dbm, -300.0, 100.0);
        s.reject_unknown();
    }

    if (root.has("scheme"))
    {
        if (!root.at("scheme").is_string())
            throw ConfigError("scheme", "expected a string");
        const auto s = scheme_from_string(root.at("scheme").get<std::string>());
        if (!s)
            throw ConfigError("scheme",
                              "must be 'digital', 'analog', 'hybrid' or 'quantized_analog'");
        cfg.schemes = {*s};
    }

    if (root.has("schemes"))
    {
        const json &arr = root.at("schemes");
        if (!arr.is_array() || arr.empty())
            throw ConfigError("schemes", "expected a nonempty array of scheme names");
        cfg.schemes.clear();
        for (const json &e : arr)
        {
            if (!e.is_string())
                throw ConfigError("schemes", "expected strings");
            const auto s = scheme_from_string(e.get<std::string>());
            if (!s)
                throw ConfigError("schemes", "unknown scheme '" + e.get<std::string>() + "'");
            cfg.schemes.push_back(*s);
        }
    }

    {
        unsigned bits = cfg.quantization_bits;
        root.read_number("quantization_bits", bits, 1, 32, true);
        cfg.quantization_bits = bits;
        root.read_number("hybrid_dictionary_size", cfg.dictionary_size, 1, 65536, true);

        std::string alloc =
            cfg.digital_allocation == PowerAllocation::equal ? "equal" : "waterfilling";
        root.read_string("digital_power_allocation", alloc);
        if (alloc == "equal")
            cfg.digital_allocation = PowerAllocation::equal;
        else if (alloc == "waterfilling")
            cfg.digital_allocation = PowerAllocation::waterfilling;
        else
            throw ConfigError("digital_power_allocation", "must be 'equal' or 'waterfilling'");
    }

    if (root.has("crosstalk"))
    {
        Reader c(root.at("crosstalk"), "crosstalk");
        cfg.crosstalk_enabled = true;
        std::string model = "identity_plus_offdiag";
        c.read_string("model", model);
        if (model == "identity_plus_offdiag")
            cfg.crosstalk_model = CrosstalkModel::identity_plus_offdiag;
        else if (model == "literal_iid")
            cfg.crosstalk_model = CrosstalkModel::literal_iid;
        else
            throw ConfigError("crosstalk.model",
                              "must be 'identity_plus_offdiag' or 'literal_iid'");
        c.read_number("sigma_ct_db", cfg.crosstalk_sigma_db, -300.0, 100.0);
        c.reject_unknown();
    }

    if (root.has("seeds"))
    {
        Reader s(root.at("seeds"), "seeds");
        double seed = static_cast<double>(cfg.base_seed);
        s.read_number("base_seed", seed, 0.0, 9.007199254740992e15, true);
        cfg.base_seed = static_cast<std::uint64_t>(seed);
        s.read_number("n_channels", cfg.n_channels, 1, 10000000, true);
        s.reject_unknown();
    }

    if (root.has("ee_bounds_dbm"))
    {
        const auto v = read_number_list(root.at("ee_bounds_dbm"), "ee_bounds_dbm", -300.0, 100.0);
        if (v.size() != 2 || !(v[0] < v[1]))
            throw ConfigError("ee_bounds_dbm", "expected [lower, upper] with lower < upper");
        cfg.ee_bounds_dbm = {v[0], v[1]};
    }

    root.reject_unknown();

    if (cfg.n_s > cfg.n_rf)
        throw ConfigError("system.n_s", "must not exceed n_rf");

    return cfg;
}

ExperimentConfig load_config_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("<config>", "cannot open '" + path + "'");
    json j;
    try
    {
        in >> j;
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError("<config>", std::string("JSON parse error: ") + e.what());
    }
    return parse_config(j);
}

json config_to_json(const ExperimentConfig &cfg)
{
    json j;
    j["system"] = {{"n_t", cfg.n_t},           {"n_r", cfg.n_r},
                   {"n_rf", cfg.n_rf},         {"n_s", cfg.n_s},
                   {"n_paths", cfg.n_paths},   {"distance_m", cfg.distance_m},
                   {"tx_spacing", cfg.tx_spacing}, {"rx_spacing", cfg.rx_spacing},
                   {"carrier_hz", cfg.carrier_hz}};
    j["pa"] = to_json(cfg.pa);
    j["budget"] = {{"noise_dbm", cfg.noise_dbm},
                   {"bandwidth_hz", cfg.bandwidth_hz},
                   {"pa_max_output_dbm", cfg.pa_max_output_dbm},
                   {"pa_max_efficiency", cfg.pa_max_efficiency},
                   {"consumed_power_cap_dbm", std::isinf(cfg.consumed_power_cap_dbm)
                                                  ? json(nullptr)
                                                  : json(cfg.consumed_power_cap_dbm)}};

    const char *shadowing = "disabled";
    if (cfg.shadowing == ShadowingMode::per_channel)
        shadowing = "per_channel";
    if (cfg.shadowing == ShadowingMode::frozen)
        shadowing = "frozen";
    j["channel"] = {{"pathloss_fixed_db", cfg.pathloss_fixed_db},
                    {"pathloss_slope_db_per_decade", cfg.pathloss_slope_db_per_decade},
                    {"shadowing_std_db", cfg.shadowing_std_db},
                    {"shadowing", shadowing},
                    {"angle_distribution",
                     cfg.angles.kind == AngleDistribution::Kind::uniform_angle ? "uniform"
                                                                               : "uniform_sine"},
                    {"angle_min_deg", cfg.angles.min_rad * 180.0 / pi},
                    {"angle_max_deg", cfg.angles.max_rad * 180.0 / pi}};

    j["sweep"] = {{"p_dbm", cfg.p_dbm}, {"n_t", cfg.n_t_values}, {"fixed_p_dbm", cfg.fixed_p_dbm}};

    json schemes = json::array();
    for (Scheme s : cfg.schemes)
        schemes.push_back(to_string(s));
    j["schemes"] = schemes;

    j["quantization_bits"] = cfg.quantization_bits;
    j["hybrid_dictionary_size"] = cfg.dictionary_size;
    j["digital_power_allocation"] =
        cfg.digital_allocation == PowerAllocation::equal ? "equal" : "waterfilling";

    if (cfg.crosstalk_enabled)
        j["crosstalk"] = {{"model", cfg.crosstalk_model == CrosstalkModel::identity_plus_offdiag
                                        ? "identity_plus_offdiag"
                                        : "literal_iid"},
                          {"sigma_ct_db", cfg.crosstalk_sigma_db}};

    j["seeds"] = {{"base_seed", cfg.base_seed}, {"n_channels", cfg.n_channels}};
    j["ee_bounds_dbm"] = {cfg.ee_bounds_dbm.first, cfg.ee_bounds_dbm.second};
    return j;
}

} // namespace nlbeam
