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

#include "nlbeam/serialize.hpp"

#include <stdexcept>

namespace nlbeam
{

using nlohmann::json;

json to_json(cx z) { return json::array({z.real(), z.imag()}); }

cx cx_from_json(const json &j)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw std::invalid_argument("complex value must be a [re, im] pair");
    return cx(j[0].get<double>(), j[1].get<double>());
}

json to_json(const arma::cx_mat &m)
{
    json data = json::array();
    for (arma::uword i = 0; i < m.n_rows; ++i)
        for (arma::uword j = 0; j < m.n_cols; ++j)
            data.push_back(to_json(m(i, j)));
    return json{{"rows", m.n_rows}, {"cols", m.n_cols}, {"data", std::move(data)}};
}

json to_json(const arma::cx_vec &v)
{
    return to_json(arma::cx_mat(v));
}

arma::cx_mat cx_mat_from_json(const json &j)
{
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
        throw std::invalid_argument("complex matrix must carry rows/cols/data");
    const arma::uword rows = j.at("rows").get<arma::uword>();
    const arma::uword cols = j.at("cols").get<arma::uword>();
    const json &data = j.at("data");
    if (!data.is_array() || data.size() != rows * cols)
        throw std::invalid_argument("complex matrix data length mismatch");

    arma::cx_mat m(rows, cols);
    std::size_t k = 0;
    for (arma::uword i = 0; i < rows; ++i)
        for (arma::uword jj = 0; jj < cols; ++jj)
            m(i, jj) = cx_from_json(data[k++]);
    return m;
}

arma::cx_vec cx_vec_from_json(const json &j)
{
    const arma::cx_mat m = cx_mat_from_json(j);
    if (m.n_cols != 1)
        throw std::invalid_argument("expected a column vector");
    return m.col(0);
}

json to_json(const ChannelRealization &ch)
{
    json j;
    j["n_paths"] = ch.n_paths;
    j["seed"] = ch.seed;
    j["shadowing_db"] = ch.shadowing_db;
    j["tx"] = {{"num_elements", ch.tx_geometry.num_elements}, {"spacing", ch.tx_geometry.spacing}};
    j["rx"] = {{"num_elements", ch.rx_geometry.num_elements}, {"spacing", ch.rx_geometry.spacing}};
    j["path_gains"] = to_json(arma::cx_mat(ch.path_gains));
    j["aod"] = ch.aod;
    j["aoa"] = ch.aoa;
    j["h"] = to_json(ch.h);
    return j;
}

ChannelRealization channel_from_json(const json &j)
{
    ChannelRealization ch;
    ch.n_paths = j.at("n_paths").get<arma::uword>();
    ch.seed = j.value("seed", std::uint64_t{0});
    ch.shadowing_db = j.value("shadowing_db", 0.0);
    ch.tx_geometry.num_elements = j.at("tx").at("num_elements").get<arma::uword>();
    ch.tx_geometry.spacing = j.at("tx").at("spacing").get<double>();
    ch.rx_geometry.num_elements = j.at("rx").at("num_elements").get<arma::uword>();
    ch.rx_geometry.spacing = j.at("rx").at("spacing").get<double>();
    ch.path_gains = cx_vec_from_json(j.at("path_gains"));
    ch.aod = j.at("aod").get<std::vector<double>>();
    ch.aoa = j.at("aoa").get<std::vector<double>>();
    ch.h = cx_mat_from_json(j.at("h"));

    if (ch.path_gains.n_elem != ch.n_paths || ch.aod.size() != ch.n_paths ||
        ch.aoa.size() != ch.n_paths)
        throw std::invalid_argument("channel: per-path array length mismatch");
    if (ch.h.n_rows != ch.rx_geometry.num_elements || ch.h.n_cols != ch.tx_geometry.num_elements)
        throw std::invalid_argument("channel: matrix dimensions do not match the geometry");
    return ch;
}

json to_json(const Beamformer &bf)
{
    json j;
    j["f_rf"] = to_json(bf.f_rf);
    j["f_bb"] = to_json(bf.f_bb);
    j["total_input_power"] = bf.total_input_power;
    j["constant_modulus_waived"] = bf.constant_modulus_waived;
    return j;
}

Beamformer beamformer_from_json(const json &j)
{
    Beamformer bf;
    bf.f_rf = cx_mat_from_json(j.at("f_rf"));
    bf.f_bb = cx_mat_from_json(j.at("f_bb"));
    bf.total_input_power = j.at("total_input_power").get<double>();
    bf.constant_modulus_waived = j.value("constant_modulus_waived", false);
    return bf;
}

json to_json(const HermitianCov &c)
{
    return json{{"matrix", to_json(c.matrix())}};
}

HermitianCov cov_from_json(const json &j)
{
    return HermitianCov(cx_mat_from_json(j.at("matrix")));
}

PACoefficients pa_from_json(const json &j)
{
    if (!j.is_object())
        throw std::invalid_argument("pa: expected an object");

    PACoefficients pa;
    const std::string format = j.value("format", std::string("mag_phase"));
    const std::string unit = j.value("unit", std::string("milliwatt"));

    if (unit == "milliwatt")
        pa.unit = PowerUnit::milliwatt;
    else if (unit == "watt")
        pa.unit = PowerUnit::watt;
    else
        throw std::invalid_argument("pa.unit: must be 'milliwatt' or 'watt'");

    const json &coeffs = j.at("coefficients");
    if (!coeffs.is_array() || coeffs.empty())
        throw std::invalid_argument("pa.coefficients: expected a nonempty array of pairs");

    pa.beta.clear();
    for (const json &c : coeffs)
    {
        if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
            throw std::invalid_argument("pa.coefficients: each entry must be a pair of numbers");
        const double a = c[0].get<double>();
        const double b = c[1].get<double>();
        if (format == "mag_phase")
            pa.beta.push_back(std::polar(a, b));
        else if (format == "re_im")
            pa.beta.push_back(cx(a, b));
        else
            throw std::invalid_argument("pa.format: must be 'mag_phase' or 're_im'");
    }

    validate(pa);
    return pa;
}

json to_json(const PACoefficients &pa)
{
    json coeffs = json::array();
    for (const cx &b : pa.beta)
        coeffs.push_back(json::array({b.real(), b.imag()}));
    return json{{"format", "re_im"}, {"unit", to_string(pa.unit)}, {"coefficients", coeffs}};
}

} // namespace nlbeam
