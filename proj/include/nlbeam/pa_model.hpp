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

#ifndef NLBEAM_PA_MODEL_HPP
#define NLBEAM_PA_MODEL_HPP

#include "nlbeam/common.hpp"

#include <vector>

namespace nlbeam
{

// Unit in which |u|^2 enters the PA polynomial. The default coefficient
// set is calibrated for milliwatts; using it with powers expressed in
// watts would place the compression knee three decades too low, so the
// convention travels with the coefficients and is checked at the config
// boundary.
enum class PowerUnit
{
    milliwatt,
    watt
};

const char *to_string(PowerUnit u);

// Memoryless odd-order polynomial PA of order 2M+1:
//   f(u) = sum_{m=0}^{M} beta[m] |u|^{2m} u
// beta[0] is the small-signal (linear) gain and must be nonzero.
struct PACoefficients
{
    std::vector<cx> beta; // beta_{2m+1}, m = 0..M
    PowerUnit unit = PowerUnit::milliwatt;

    arma::uword order() const { return beta.empty() ? 0 : beta.size() - 1; } // M
};

void validate(const PACoefficients &pa);

// Ideal PA with constant gain beta1.
PACoefficients linear_pa(cx beta1);

// Built-in fifth-order measured-amplifier coefficient set (|u|^2 in mW):
// beta1 = 2.96, beta3 = 0.1418 e^{-j2.816}, beta5 = 0.003 e^{j0.39}.
PACoefficients default_pa();

// Per-sample transfer f(u).
cx pa_transfer(cx u, const PACoefficients &pa);

// f(u) / u extended continuously to u = 0 (value beta1 there).
cx instantaneous_gain(cx u, const PACoefficients &pa);

// Bussgang average linear gain for a CN(0, power) input:
//   gbar(P) = sum_m beta[m] P^m (m+1)!
// Throws on negative power.
cx avg_linear_gain(double power, const PACoefficients &pa);

// Distortion kernel, m >= 1 (zero above the model order, so a linear PA
// has no distortion kernels at all):
//   gamma_m(P) = sqrt(1/(m+1)) sum_{q=m}^{M} beta[q] C(q,m) (q+1)! P^{q-m}
// The coefficient index inside the sum follows q, not m; see the
// moment-enumeration checks in the validation module which arbitrate this.
cx gamma_m(double power, arma::uword m, const PACoefficients &pa);

// |gbar(P)|^2 -- desired-signal power gain of the single-RF closed form.
double gbar_s(double power, const PACoefficients &pa);

// sum_{m>=1} |gamma_m(P)|^2 P^{2m} -- distortion power gain of the same form.
double gbar_d(double power, const PACoefficients &pa);

// Diagonal of the average linear gain matrix, entry n = gbar(P_n).
struct BussgangGain
{
    arma::cx_vec per_branch_gain;

    arma::cx_mat as_matrix() const { return arma::diagmat(per_branch_gain); }
};

BussgangGain bussgang_gains(const arma::vec &branch_powers, const PACoefficients &pa);

} // namespace nlbeam

#endif
