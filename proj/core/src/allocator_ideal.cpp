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

#include "iaqsmpa/allocator_ideal.hpp"
#include "iaqsmpa/importance.hpp"
#include "iaqsmpa/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace iaqsmpa
{

namespace
{

constexpr double kLn2 = std::numbers::ln2;

void require(bool ok, const std::string &msg)
{
    if (!ok)
        throw std::invalid_argument(msg);
}

// Latency that block i needs at power p, in seconds.
double block_latency(double bits, double gain, double power, int d, double df, double sigma2)
{
    if (bits <= 0.0)
        return 0.0;
    const double rate = std::log2(1.0 + power * gain * gain / sigma2);
    return rate > 0.0 ? d * bits / (df * rate) : std::numeric_limits<double>::infinity();
}

// Newton polish of the power-sum equation in y; keeps the step only when it improves the residual.
double polish_latency(std::span<const double> bits, std::span<const double> gains, int d, double df,
                      double sigma2, double budget, double y)
{
    auto residual = [&](double yy, double *slope) {
        double sum = 0.0;
        double ds = 0.0;
        for (std::size_t i = 0; i < bits.size(); ++i)
        {
            const double e = d * bits[i] / (yy * df);
            const double c = sigma2 / (gains[i] * gains[i]);
            const double pw = std::exp2(e);
            sum += c * (pw - 1.0);
            ds -= c * pw * kLn2 * e / yy;
        }
        if (slope)
            *slope = ds;
        return sum - budget;
    };
    for (int it = 0; it < 3; ++it)
    {
        double slope = 0.0;
        const double r = residual(y, &slope);
        if (r == 0.0 || slope == 0.0 || !std::isfinite(slope))
            break;
        const double next = y - r / slope;
        if (!(next > 0.0) || std::abs(residual(next, nullptr)) >= std::abs(r))
            break;
        y = next;
    }
    return y;
}

} // namespace

void AllocProblem::validate() const
{
    const int n = g();
    require(n >= 1, "AllocProblem: at least one block required.");
    require(weights.size() == gains.size(), "AllocProblem: weights and gains differ in length.");
    require(scores.size() == gains.size(), "AllocProblem: scores and gains differ in length.");
    require(d >= 1, "AllocProblem: d must be positive.");
    require(b_min >= 0 && b_min <= b_max && b_max <= kMaxBitDepth, "AllocProblem: need 0 <= b_min <= b_max <= 24.");
    require(b_target % d == 0, "AllocProblem: b_target " + std::to_string(b_target) +
                                   " is not a multiple of d=" + std::to_string(d) + ".");
    require(static_cast<long long>(b_min) * n * d <= b_target && b_target <= static_cast<long long>(b_max) * n * d,
            "AllocProblem: b_target outside [b_min G D, b_max G D].");
    require(df > 0.0 && block_size >= 1 && sigma2 > 0.0 && power_budget > 0.0,
            "AllocProblem: df, block_size, sigma2 and power_budget must be positive.");
    require(u_max > u_min, "AllocProblem: u_max must exceed u_min.");
    require(k_iters >= 1, "AllocProblem: k_iters must be >= 1.");
    for (int i = 0; i < n; ++i)
    {
        require(std::isfinite(gains[i]) && gains[i] > 0.0,
                "AllocProblem: gain of block " + std::to_string(i) + " must be positive.");
        require(weights[i] > 0.0 && weights[i] <= 1.0,
                "AllocProblem: weight " + std::to_string(i) + " outside (0, 1].");
        require(std::isfinite(scores[i]), "AllocProblem: non-finite score.");
    }
}

std::vector<double> powers_for_latency(std::span<const double> bits, std::span<const double> gains, int d,
                                       double df, double sigma2, double y)
{
    std::vector<double> p(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        p[i] = sigma2 / (gains[i] * gains[i]) * std::expm1(kLn2 * d * bits[i] / (y * df));
    return p;
}

PowerSolution power_solve_fixed_bits(std::span<const double> bits, std::span<const double> gains, int d,
                                     double df, double sigma2, double power_budget, const SolverSettings &settings)
{
    if (bits.size() != gains.size() || bits.empty())
        throw std::invalid_argument("power_solve_fixed_bits: bits and gains differ in length.");
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (!(gains[i] > 0.0) || bits[i] < 0.0)
            throw std::invalid_argument("power_solve_fixed_bits: gains must be positive and bits non-negative.");
    if (!(power_budget > 0.0))
        throw std::invalid_argument("power_solve_fixed_bits: power budget must be positive.");

    PowerSolution out;
    if (std::all_of(bits.begin(), bits.end(), [](double b) { return b == 0.0; }))
    {
        out.powers.assign(bits.size(), power_budget / static_cast<double>(bits.size()));
        return out;
    }

    // Worst latency at uniform power is a feasible starting guess.
    double guess = 0.0;
    const double uniform = power_budget / static_cast<double>(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        guess = std::max(guess, block_latency(bits[i], gains[i], uniform, d, df, sigma2));

    auto excess = [&](double y) {
        double sum = 0.0;
        for (std::size_t i = 0; i < bits.size(); ++i)
            sum += sigma2 / (gains[i] * gains[i]) * std::expm1(kLn2 * d * bits[i] / (y * df));
        return sum - power_budget;
    };
    const Bracket br = bisect_decreasing_positive(excess, guess, settings, "power_solve_fixed_bits");
    out.y = polish_latency(bits, gains, d, df, sigma2, power_budget, br.hi);
    out.powers = powers_for_latency(bits, gains, d, df, sigma2, out.y);
    return out;
}

PowerSolution power_solve_fixed_bits(std::span<const int> bits, std::span<const double> gains, int d, double df,
                                     double sigma2, double power_budget, const SolverSettings &settings)
{
    const std::vector<double> b(bits.begin(), bits.end());
    return power_solve_fixed_bits(b, gains, d, df, sigma2, power_budget, settings);
}

double power_multiplier(std::span<const double> bits, std::span<const double> gains, int d, double df,
                        double df0, double sigma2, double y)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        sum += sigma2 * d * bits[i] * kLn2 / (df0 * gains[i] * gains[i] * y * y) *
               std::exp2(d * bits[i] / (y * df));
    return 1.0 / sum;
}

BitFill importance_water_fill(std::span<const double> weights, std::span<const double> caps, double b_min,
                              double bits_total, double u_min, double u_max, const SolverSettings &settings)
{
    const std::size_t n = weights.size();
    if (caps.size() != n || n == 0)
        throw std::invalid_argument("importance_water_fill: weights and caps differ in length.");
    const double range = u_max - u_min;
    if (!(range > 0.0))
        throw std::invalid_argument("importance_water_fill: empty value range.");

    // Unconstrained level of patch i is w[i] + s with nu = 2^{-2 s}.
    std::vector<double> w(n);
    double cap_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (!(weights[i] > 0.0))
            throw std::invalid_argument("importance_water_fill: weights must be positive.");
        if (caps[i] < b_min)
            throw InfeasibleError("importance_water_fill: cap of patch " + std::to_string(i) + " below b_min.");
        w[i] = 0.5 * std::log2(weights[i] * kLn2 * range * range / 2.0);
        cap_sum += caps[i];
    }
    if (cap_sum < bits_total * (1.0 - 1e-12) || b_min * static_cast<double>(n) > bits_total * (1.0 + 1e-12))
        throw InfeasibleError("importance_water_fill: bit total outside [n b_min, sum caps].");

    auto fill = [&](double s, std::vector<double> &b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            b[i] = std::min(caps[i], std::max(b_min, w[i] + s));
            sum += b[i];
        }
        return sum;
    };

    const auto [wlo, whi] = std::minmax_element(w.begin(), w.end());
    const double cap_max = *std::max_element(caps.begin(), caps.end());
    double lo = b_min - *whi - 1.0;
    double hi = cap_max - *wlo + 1.0;
    std::vector<double> b(n);
    const Bracket br = bisect_increasing([&](double s) { return fill(s, b) - bits_total; }, lo, hi, settings);

    // The sum is piecewise linear in s; solve exactly on the active set at the bracket midpoint.
    double s = 0.5 * (br.lo + br.hi);
    fill(s, b);
    double fixed = 0.0;
    double free_w = 0.0;
    int n_free = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (w[i] + s > b_min && w[i] + s < caps[i])
        {
            free_w += w[i];
            ++n_free;
        }
        else
            fixed += b[i];
    }
    if (n_free > 0)
    {
        const double exact = (bits_total - fixed - free_w) / n_free;
        std::vector<double> trial(n);
        if (std::abs(fill(exact, trial) - bits_total) <= std::abs(fill(s, b) - bits_total))
        {
            s = exact;
            b.swap(trial);
        }
    }
    fill(s, b);
    return {std::move(b), std::exp2(-2.0 * s)};
}

std::vector<int> integerize(std::span<const double> bits_cont, std::span<const double> scores, int b_min, int b_max,
                            long long b_target, int d)
{
    const std::size_t n = bits_cont.size();
    if (scores.size() != n)
        throw std::invalid_argument("integerize: bits and scores differ in length.");
    if (d < 1 || b_target % d != 0)
        throw std::invalid_argument("integerize: b_target must be a multiple of d.");
    const long long total = b_target / d;
    if (total < static_cast<long long>(b_min) * static_cast<long long>(n) ||
        total > static_cast<long long>(b_max) * static_cast<long long>(n))
        throw std::invalid_argument("integerize: b_target not reachable within [b_min, b_max].");

    std::vector<int> out(n);
    long long sum = 0;
    for (std::size_t i = 0; i < n; ++i)
    {
        // std::round rounds halfway cases away from zero.
        out[i] = static_cast<int>(std::clamp(std::round(bits_cont[i]), static_cast<double>(b_min),
                                             static_cast<double>(b_max)));
        sum += out[i];
    }

    const auto order = importance_order(scores);
    while (sum < total)
        for (int p : order)
            if (sum < total && out[p] < b_max)
            {
                ++out[p];
                ++sum;
            }
    while (sum > total)
        for (auto it = order.rbegin(); it != order.rend(); ++it)
            if (sum > total && out[*it] > b_min)
            {
                --out[*it];
                --sum;
            }
    return out;
}

namespace
{

// Smallest latency y' >= y for which the caps admit a feasible bit allocation.
double feasible_latency(std::span<const double> rates, double y, int d, double bits_total, int b_min, int b_max,
                        const SolverSettings &settings)
{
    double y_floor = y;
    double y_all_max = 0.0;
    for (double r : rates)
    {
        if (!(r > 0.0))
            throw InfeasibleError("bcd: a block has zero rate; no latency can carry its bits.");
        y_floor = std::max(y_floor, d * b_min / r);
        y_all_max = std::max(y_all_max, d * b_max / r);
    }
    auto cap_sum = [&](double yy) {
        double s = 0.0;
        for (double r : rates)
            s += std::min(yy * r / d, static_cast<double>(b_max));
        return s - bits_total;
    };
    if (cap_sum(y_floor) >= 0.0)
        return y_floor;
    return bisect_increasing(cap_sum, y_floor, std::max(y_all_max, y_floor), settings).hi;
}

} // namespace

AllocationResult bcd_solve(const AllocProblem &problem)
{
    problem.validate();
    const int n = problem.g();
    const double total = static_cast<double>(problem.bits_total());
    const int d = problem.d;

    std::vector<double> bits(n, total / n);
    std::vector<double> powers(n, problem.power_budget / n);
    double y = 0.0;
    for (int i = 0; i < n; ++i)
        y = std::max(y, block_latency(bits[i], problem.gains[i], powers[i], d, problem.df, problem.sigma2));

    AllocationResult res;
    std::vector<double> rates(n);
    std::vector<double> caps(n);
    for (int k = 1; k <= problem.k_iters; ++k)
    {
        // Bit step under the latency caps of the previous iterate.
        for (int i = 0; i < n; ++i)
            rates[i] = problem.df * std::log2(1.0 + powers[i] * problem.gains[i] * problem.gains[i] / problem.sigma2);
        const double y_ok = feasible_latency(rates, y, d, total, problem.b_min, problem.b_max, problem.solver);
        if (y_ok > y * (1.0 + 1e-9))
            ++res.cap_relaxations;
        y = std::max(y, y_ok);
        for (int i = 0; i < n; ++i)
            caps[i] = std::clamp(y * rates[i] / d, static_cast<double>(problem.b_min), static_cast<double>(problem.b_max));
        BitFill fill = importance_water_fill(problem.weights, caps, problem.b_min, total, problem.u_min,
                                             problem.u_max, problem.solver);
        bits = std::move(fill.bits);
        res.nu = fill.nu;

        // Power and latency step.
        PowerSolution ps = power_solve_fixed_bits(bits, problem.gains, d, problem.df, problem.sigma2,
                                                  problem.power_budget, problem.solver);
        powers = std::move(ps.powers);
        y = ps.y;
        res.tau = power_multiplier(bits, problem.gains, d, problem.df, problem.df0(), problem.sigma2, y);

        IterationRecord rec;
        rec.k = k;
        rec.y = y;
        rec.e_q = weighted_error_bound(std::span<const double>(bits), problem.weights, d, problem.u_min, problem.u_max);
        rec.objective = rec.y + rec.e_q;
        if (!res.trace.empty() && rec.objective > res.trace.back().objective * (1.0 + 1e-9))
            ++res.non_monotone_steps;
        res.trace.push_back(rec);
    }

    res.bits_cont = bits;
    res.powers_cont = powers;
    res.y_cont = y;

    const auto bits_int = integerize(bits, problem.scores, problem.b_min, problem.b_max, problem.b_target, d);
    AllocationResult fixed = solve_fixed_bits(problem, bits_int);
    res.bits_int = std::move(fixed.bits_int);
    res.powers = std::move(fixed.powers);
    res.y = fixed.y;
    res.e_q = fixed.e_q;
    res.objective = fixed.objective;
    return res;
}

AllocationResult solve_fixed_bits(const AllocProblem &problem, std::span<const int> bits)
{
    problem.validate();
    if (static_cast<int>(bits.size()) != problem.g())
        throw std::invalid_argument("solve_fixed_bits: one bit depth per patch required.");
    long long sum = 0;
    for (int b : bits)
    {
        if (b < problem.b_min || b > problem.b_max)
            throw std::invalid_argument("solve_fixed_bits: bit depth outside [b_min, b_max].");
        sum += b;
    }
    if (sum * problem.d != problem.b_target)
        throw std::invalid_argument("solve_fixed_bits: bits do not spend b_target.");

    AllocationResult res;
    res.bits_int.assign(bits.begin(), bits.end());
    PowerSolution ps = power_solve_fixed_bits(bits, problem.gains, problem.d, problem.df, problem.sigma2,
                                              problem.power_budget, problem.solver);
    res.powers = std::move(ps.powers);
    res.y = ps.y;
    res.e_q = weighted_error_bound(bits, problem.weights, problem.d, problem.u_min, problem.u_max);
    res.objective = res.y + res.e_q;
    res.bits_cont.assign(bits.begin(), bits.end());
    res.powers_cont = res.powers;
    res.y_cont = res.y;
    res.tau = power_multiplier(res.bits_cont, problem.gains, problem.d, problem.df, problem.df0(), problem.sigma2,
                               res.y);
    return res;
}

} // namespace iaqsmpa
