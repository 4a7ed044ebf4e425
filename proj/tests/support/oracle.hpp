// SPDX-License-Identifier: Apache-2.0
//
// iaqsmpa: importance-aware quantization, subcarrier mapping and power allocation
// Copyright (C) 2026 The iaqsmpa authors
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

// Reference implementations used only by the tests. They deliberately avoid the library's
// solvers so that agreement means something.

#ifndef IAQSMPA_TESTS_ORACLE_HPP
#define IAQSMPA_TESTS_ORACLE_HPP

#include "iaqsmpa/allocator_fbl.hpp"
#include "iaqsmpa/allocator_ideal.hpp"
#include "iaqsmpa/rng.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace iaqsmpa::testing
{

// Minimum worst-case latency for fixed bits under the Shannon rate, by plain bisection on y
// in log space. sum_i sigma2/lambda^2 (2^{D B/(y df)} - 1) is decreasing in y.
inline double oracle_latency(const std::vector<double> &bits, const std::vector<double> &gains, int d, double df,
                             double sigma2, double budget)
{
    auto spend = [&](double y) {
        double s = 0.0;
        for (std::size_t i = 0; i < bits.size(); ++i)
            s += sigma2 / (gains[i] * gains[i]) * std::expm1(std::numbers::ln2 * d * bits[i] / (y * df));
        return s;
    };
    double lo = 1e-12;
    double hi = 1.0;
    for (int k = 0; k < 2000 && spend(hi) > budget; ++k)
        hi *= 2.0;
    if (spend(hi) > budget)
        return std::numeric_limits<double>::infinity();
    for (int k = 0; k < 2000 && spend(lo) <= budget; ++k)
        lo *= 0.5;
    for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it)
    {
        const double mid = std::sqrt(lo * hi);
        (spend(mid) > budget ? lo : hi) = mid;
    }
    return hi;
}

inline double oracle_error_bound(const std::vector<int> &bits, const std::vector<double> &weights, int d,
                                 double range)
{
    double s = 0.0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        s += weights[i] * d * range * range / 4.0 * std::pow(4.0, -bits[i]);
    return s;
}

struct OracleOptimum
{
    std::vector<int> bits;
    double objective = std::numeric_limits<double>::infinity();
    double latency = 0.0;
    double error_bound = 0.0;
};

// Enumerates every integer bit vector in [b_min, b_max]^G with the required sum.
inline OracleOptimum exhaustive_oracle(const AllocProblem &pb)
{
    const int g = pb.g();
    const long long total = pb.bits_total();
    OracleOptimum best;
    std::vector<int> b(static_cast<std::size_t>(g), pb.b_min);
    std::function<void(int, long long)> rec = [&](int i, long long left) {
        if (i == g - 1)
        {
            if (left < pb.b_min || left > pb.b_max)
                return;
            b[i] = static_cast<int>(left);
            std::vector<double> bd(b.begin(), b.end());
            const double y = oracle_latency(bd, pb.gains, pb.d, pb.df, pb.sigma2, pb.power_budget);
            const double eq = oracle_error_bound(b, pb.weights, pb.d, pb.u_max - pb.u_min);
            if (y + eq < best.objective)
                best = {b, y + eq, y, eq};
            return;
        }
        for (int v = pb.b_min; v <= pb.b_max; ++v)
        {
            b[i] = v;
            rec(i + 1, left - v);
        }
    };
    rec(0, total);
    return best;
}

// Random G-patch instance in the oracle family: lambda in [lam_lo, lam_hi], weights in (0, 1].
inline AllocProblem random_small_problem(Rng &rng, int g, int d = 2, double lam_lo = 0.2, double lam_hi = 3.0)
{
    AllocProblem pb;
    pb.d = d;
    pb.b_min = 1;
    pb.b_max = 8;
    pb.df = 1000.0;
    pb.block_size = 1;
    pb.sigma2 = 1.0;
    pb.power_budget = 10.0 * g;
    pb.gains.resize(static_cast<std::size_t>(g));
    pb.weights.resize(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i)
    {
        pb.gains[i] = lam_lo + (lam_hi - lam_lo) * rng.uniform();
        pb.weights[i] = 0.01 + 0.99 * rng.uniform();
    }
    pb.scores = pb.weights;
    const long long sum_bits = g * pb.b_min + static_cast<long long>(rng.below(static_cast<std::uint64_t>(g * (pb.b_max - pb.b_min) + 1)));
    pb.b_target = sum_bits * d;
    return pb;
}

// Central difference of the ideal fixed-bit latency with respect to the power budget.
inline double latency_budget_slope(const std::vector<double> &bits, const AllocProblem &pb, double rel_step = 1e-4)
{
    const double h = rel_step * pb.power_budget;
    const double up = oracle_latency(bits, pb.gains, pb.d, pb.df, pb.sigma2, pb.power_budget + h);
    const double dn = oracle_latency(bits, pb.gains, pb.d, pb.df, pb.sigma2, pb.power_budget - h);
    return (up - dn) / (2.0 * h);
}

// Multipliers of the per-block latency constraints reconstructed from the power stationarity
// condition: rho_i = tau / (-d latency_i / d P_i), with tau = -dy/dbudget.
inline std::vector<double> ideal_latency_multipliers(const std::vector<double> &bits,
                                                     const std::vector<double> &powers, double y, double slope,
                                                     const AllocProblem &pb)
{
    std::vector<double> rho(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
    {
        const double gamma = powers[i] * pb.gains[i] * pb.gains[i] / pb.sigma2;
        rho[i] = -slope * pb.sigma2 * std::numbers::ln2 * pb.d * bits[i] * (1.0 + gamma) /
                 (pb.df * pb.gains[i] * pb.gains[i] * y * y);
    }
    return rho;
}

// Linearized latency of a block at its power, using the branch fixed by `high`.
inline double linearized_latency(double bits, double power, double gain, double alpha, bool high, int d, double df,
                                 double sigma2)
{
    const double gamma = power * gain * gain / sigma2;
    const double se = high ? (gamma - 2.0 * (1.0 - alpha)) / std::numbers::ln2
                           : (alpha * gamma - (1.0 - alpha)) / std::numbers::ln2;
    return d * bits / (df * se);
}

// Minimum worst linearized latency with every block pinned to its branch: each block's power is the
// one that makes its linearized latency exactly y, and y is bisected so the powers spend the budget.
inline double oracle_fbl_latency(const std::vector<double> &bits, const std::vector<double> &gains,
                                 const std::vector<double> &alpha, const std::vector<int> &high, int d, double df,
                                 double sigma2, double budget)
{
    auto spend = [&](double y) {
        double s = 0.0;
        for (std::size_t i = 0; i < bits.size(); ++i)
        {
            const double need = std::numbers::ln2 * d * bits[i] / (df * y);
            const double gamma = high[i] ? need + 2.0 * (1.0 - alpha[i]) : (need + 1.0 - alpha[i]) / alpha[i];
            s += sigma2 * gamma / (gains[i] * gains[i]);
        }
        return s;
    };
    double lo = 1e-12;
    double hi = 1.0;
    for (int k = 0; k < 2000 && spend(hi) > budget; ++k)
        hi *= 2.0;
    if (spend(hi) > budget)
        return std::numeric_limits<double>::infinity();
    for (int k = 0; k < 2000 && spend(lo) <= budget; ++k)
        lo *= 0.5;
    for (int it = 0; it < 400 && hi - lo > 1e-15 * hi; ++it)
    {
        const double mid = std::sqrt(lo * hi);
        (spend(mid) > budget ? lo : hi) = mid;
    }
    return hi;
}

// Finite-blocklength counterpart: rho_i = tau * D B / (y^2 df dse/dP).
inline std::vector<double> fbl_latency_multipliers(const std::vector<double> &bits, const std::vector<int> &high,
                                                   const std::vector<double> &alpha, double y, double slope,
                                                   const AllocProblem &pb)
{
    std::vector<double> rho(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
    {
        const double dse = (high[i] ? 1.0 : alpha[i]) * pb.gains[i] * pb.gains[i] / (pb.sigma2 * std::numbers::ln2);
        rho[i] = -slope * pb.d * bits[i] / (y * y * pb.df * dse);
    }
    return rho;
}

} // namespace iaqsmpa::testing

#endif
