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

#include "nlbeam/pa_model.hpp"

#include <stdexcept>

namespace nlbeam
{

const char *to_string(PowerUnit u)
{
    return u == PowerUnit::milliwatt ? "milliwatt" : "watt";
}

void validate(const PACoefficients &pa)
{
    if (pa.beta.empty())
        throw std::invalid_argument("PACoefficients: empty coefficient list");
    if (pa.beta[0] == cx(0.0, 0.0))
        throw std::invalid_argument("PACoefficients: linear gain beta1 must be nonzero");
    for (const cx &b : pa.beta)
        if (!std::isfinite(b.real()) || !std::isfinite(b.imag()))
            throw std::invalid_argument("PACoefficients: coefficients must be finite");
}

PACoefficients linear_pa(cx beta1)
{
    PACoefficients pa;
    pa.beta = {beta1};
    return pa;
}

PACoefficients default_pa()
{
    PACoefficients pa;
    pa.beta = {cx(2.96, 0.0), std::polar(0.1418, -2.816), std::polar(0.003, 0.39)};
    pa.unit = PowerUnit::milliwatt;
    return pa;
}

cx pa_transfer(cx u, const PACoefficients &pa)
{
    return instantaneous_gain(u, pa) * u;
}

cx instantaneous_gain(cx u, const PACoefficients &pa)
{
    // Horner in |u|^2; at u = 0 only beta1 survives.
    const double r2 = std::norm(u);
    cx g(0.0, 0.0);
    for (auto it = pa.beta.rbegin(); it != pa.beta.rend(); ++it)
        g = g * r2 + *it;
    return g;
}

static double factorial(arma::uword n)
{
    double f = 1.0;
    for (arma::uword k = 2; k <= n; ++k)
        f *= static_cast<double>(k);
    return f;
}

static double binomial(arma::uword n, arma::uword k)
{
    if (k > n)
        return 0.0;
    double b = 1.0;
    for (arma::uword i = 0; i < k; ++i)
        b = b * static_cast<double>(n - i) / static_cast<double>(i + 1);
    return b;
}

cx avg_linear_gain(double power, const PACoefficients &pa)
{
    if (power < 0.0 || !std::isfinite(power))
        throw std::invalid_argument("avg_linear_gain: branch power must be >= 0 and finite");

    cx g(0.0, 0.0);
    double p_pow = 1.0;
    for (arma::uword m = 0; m < pa.beta.size(); ++m)
    {
        g += pa.beta[m] * p_pow * factorial(m + 1);
        p_pow *= power;
    }
    return g;
}

cx gamma_m(double power, arma::uword m, const PACoefficients &pa)
{
    const arma::uword order = pa.order();
    if (m < 1)
        throw std::invalid_argument("gamma_m: kernel index m must be >= 1");
    if (power < 0.0 || !std::isfinite(power))
        throw std::invalid_argument("gamma_m: branch power must be >= 0 and finite");
    if (m > order) // no kernels above the model order (empty sum)
        return cx(0.0, 0.0);

    // The coefficient inside the sum is indexed by the running q, so the
    // top-order coefficient enters every kernel it can reach. Tying it to
    // m instead breaks the covariance oracle for M >= 2 (see validation).
    cx s(0.0, 0.0);
    double p_pow = 1.0;
    for (arma::uword q = m; q <= order; ++q)
    {
        s += pa.beta[q] * binomial(q, m) * factorial(q + 1) * p_pow;
        p_pow *= power;
    }
    return std::sqrt(1.0 / static_cast<double>(m + 1)) * s;
}

double gbar_s(double power, const PACoefficients &pa)
{
    return std::norm(avg_linear_gain(power, pa));
}

double gbar_d(double power, const PACoefficients &pa)
{
    double total = 0.0;
    double p_2m = 1.0;
    for (arma::uword m = 1; m <= pa.order(); ++m)
    {
        p_2m *= power * power;
        total += std::norm(gamma_m(power, m, pa)) * p_2m;
    }
    return total;
}

BussgangGain bussgang_gains(const arma::vec &branch_powers, const PACoefficients &pa)
{
    BussgangGain g;
    g.per_branch_gain.set_size(branch_powers.n_elem);
    for (arma::uword n = 0; n < branch_powers.n_elem; ++n)
        g.per_branch_gain(n) = avg_linear_gain(branch_powers(n), pa);
    return g;
}

} // namespace nlbeam
