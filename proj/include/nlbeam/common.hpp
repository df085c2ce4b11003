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

#ifndef NLBEAM_COMMON_HPP
#define NLBEAM_COMMON_HPP

#include <armadillo>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>

namespace nlbeam
{

using cx = std::complex<double>;

constexpr double pi = 3.14159265358979323846;

// dBm <-> milliwatt. All internal powers are linear in the PA unit
// convention; dBm appears only at config boundaries.
inline double dbm_to_mw(double dbm) { return std::pow(10.0, 0.1 * dbm); }
inline double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }
inline double db_to_linear(double db) { return std::pow(10.0, 0.1 * db); }

// SplitMix64 finalizer. Derived seed streams for sweep grid points and
// Monte Carlo blocks are produced as mix_seed(base, k); the mixing is part
// of the reproducibility contract (same base seed -> same streams,
// independent of execution order).
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream)
{
    std::uint64_t z = base + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic random stream. Uniform doubles are formed from the top 53
// bits of the mt19937_64 output and Gaussians via Box-Muller, so a given
// seed yields the same sequence on every standard library implementation.
class Rng
{
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() // [0, 1)
    {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal, one value per two uniform draws (cosine branch).
    double gaussian()
    {
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log1p(u1 - 1.0)); // log(1-u1), u1 < 1
        return r * std::cos(2.0 * pi * u2);
    }

    // Circularly symmetric complex Gaussian CN(0, variance).
    cx cgauss(double variance)
    {
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-variance * std::log1p(u1 - 1.0));
        return cx(r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2));
    }

    arma::cx_vec cgauss_vec(arma::uword n, double variance)
    {
        arma::cx_vec v(n);
        for (arma::uword i = 0; i < n; ++i)
            v(i) = cgauss(variance);
        return v;
    }

  private:
    std::mt19937_64 gen_;
};

// Compensated accumulation so block reductions do not depend on how the
// work was split across threads.
struct KahanSum
{
    double sum = 0.0;
    double carry = 0.0;

    void add(double x)
    {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

struct KahanSumCx
{
    KahanSum re, im;

    void add(cx x)
    {
        re.add(x.real());
        im.add(x.imag());
    }

    cx value() const { return cx(re.sum, im.sum); }
};

// Static-chunk parallel loop. Results must be written to disjoint,
// index-addressed slots by the callable; the schedule carries no ordering
// guarantees beyond that.
void parallel_for(std::size_t n, unsigned n_threads, const std::function<void(std::size_t)> &fn);

} // namespace nlbeam

#endif
