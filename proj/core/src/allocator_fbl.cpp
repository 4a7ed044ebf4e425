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

#include "iaqsmpa/allocator_fbl.hpp"
#include "iaqsmpa/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace iaqsmpa
{

namespace
{
constexpr double kLn2 = std::numbers::ln2;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Acklam's rational approximation of the standard normal quantile (relative error ~1.15e-9).
double normal_quantile_rough(double p)
{
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                   1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                   6.680131188771972e+01,  -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                   -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                   3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low)
    {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low)
    {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

} // namespace

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double q_inverse(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("q_inverse: probability must lie in (0, 1).");
    if (p == 0.5)
        return 0.0;
    // Q^-1(p) = -Phi^-1(p); refine with Newton steps on Q(x) - p, Q'(x) = -phi(x).
    double x = -normal_quantile_rough(p);
    for (int it = 0; it < 3; ++it)
    {
        const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
        if (phi == 0.0)
            break;
        x += (q_function(x) - p) / phi;
    }
    return x;
}

double dispersion_exact(double gamma)
{
    if (gamma < 0.0)
        throw std::invalid_argument("dispersion_exact: gamma must be non-negative.");
    const double inv = 1.0 / (1.0 + gamma);
    return std::sqrt(1.0 - inv * inv);
}

double dispersion_approx(double gamma)
{
    if (gamma < 0.0)
        throw std::invalid_argument("dispersion_approx: gamma must be non-negative.");
    return std::min((gamma + 1.0) / 2.0, 1.0);
}

FblParams FblParams::uniform(double bler, double l_c, int g)
{
    if (g < 1)
        throw std::invalid_argument("FblParams: g must be positive.");
    const std::vector<double> v(static_cast<std::size_t>(g), bler);
    return per_block(v, l_c);
}

FblParams FblParams::per_block(std::span<const double> bler, double l_c)
{
    if (!(l_c >= 1.0))
        throw std::invalid_argument("FblParams: l_c must be >= 1.");
    FblParams out;
    out.l_c = l_c;
    out.bler.assign(bler.begin(), bler.end());
    for (double mu : bler)
    {
        if (!(mu > 0.0 && mu < 1.0))
            throw std::invalid_argument("FblParams: BLER must lie in (0, 1).");
        const double q = q_inverse(mu);
        out.qinv.push_back(q);
        out.alpha.push_back(1.0 - 0.5 * q / std::sqrt(l_c));
    }
    return out;
}

FblParams FblParams::from_alpha(std::span<const double> alpha, double l_c)
{
    if (!(l_c >= 1.0))
        throw std::invalid_argument("FblParams: l_c must be >= 1.");
    FblParams out;
    out.l_c = l_c;
    out.alpha.assign(alpha.begin(), alpha.end());
    for (double a : alpha)
    {
        const double q = 2.0 * (1.0 - a) * std::sqrt(l_c);
        out.qinv.push_back(q);
        out.bler.push_back(q_function(q));
    }
    return out;
}

void FblParams::validate(int g) const
{
    if (static_cast<int>(alpha.size()) != g || qinv.size() != alpha.size())
        throw std::invalid_argument("FblParams: expected " + std::to_string(g) + " blocks, got " +
                                    std::to_string(alpha.size()) + ".");
    if (!(l_c >= 1.0))
        throw std::invalid_argument("FblParams: l_c must be >= 1.");
    for (double a : alpha)
        if (!(a > 0.0) || !std::isfinite(a))
            throw std::invalid_argument("FblParams: alpha must be positive; BLER too small for this l_c.");
}

double FblParams::penalty_coefficient(int i) const { return qinv[i] / (kLn2 * std::sqrt(l_c)); }

double dispersion_penalty(double gamma, double coefficient) { return coefficient * dispersion_exact(gamma); }

double fbl_spectral_efficiency(double gamma, double coefficient)
{
    return std::log2(1.0 + gamma) - dispersion_penalty(gamma, coefficient);
}

double linearized_spectral_efficiency(double gamma, double alpha)
{
    return (gamma - 2.0 * (1.0 - alpha) * dispersion_approx(gamma)) / kLn2;
}

std::string to_string(NormalizerScope scope)
{
    return scope == NormalizerScope::SameRegime ? "same_regime" : "all_blocks";
}

NormalizerScope normalizer_scope_from_string(const std::string &name)
{
    if (name == "same_regime")
        return NormalizerScope::SameRegime;
    if (name == "all_blocks")
        return NormalizerScope::AllBlocks;
    throw std::invalid_argument("Unknown normalizer scope: " + name);
}

namespace
{

struct BcdContext
{
    const AllocProblem &pb;
    const FblParams &fbl;
    double theta;
};

// Latency of block i in the given branch of the linearized rate; infinite when the rate is <= 0.
double branch_latency(double bits, double gamma, double alpha, bool high, int d, double df)
{
    if (bits <= 0.0)
        return 0.0;
    const double eff = high ? gamma - 2.0 + 2.0 * alpha : gamma * alpha + alpha - 1.0;
    return eff > 0.0 ? d * bits * kLn2 / (df * eff) : kInf;
}

[[noreturn]] void throw_deficit(std::span<const double> floor_power, double budget, const std::string &who)
{
    double sum = 0.0;
    for (double a : floor_power)
        sum += a;
    std::ostringstream msg;
    msg << who << ": power budget " << budget << " cannot reach positive rate on every block; zero-rate powers sum to "
        << sum << ". Per-block minimum:";
    for (std::size_t i = 0; i < floor_power.size() && i < 16; ++i)
        msg << ' ' << floor_power[i];
    if (floor_power.size() > 16)
        msg << " ...";
    throw InfeasibleError(msg.str(), sum, budget);
}

// Power step of the finite-blocklength BCD for fixed bits and regimes. In both branches the
// power is affine in t = 1 / sqrt(tau), so the budget equation is solved in closed form.
std::vector<double> regime_powers(const BcdContext &cx, std::span<const double> bits, std::span<const int> high,
                                  NormalizerScope scope, double *t_out)
{
    const auto &pb = cx.pb;
    const int n = pb.g();
    double sum_low = 0.0;
    double sum_high = 0.0;
    for (int j = 0; j < n; ++j)
    {
        const double l2 = pb.gains[j] * pb.gains[j];
        const bool all = scope == NormalizerScope::AllBlocks;
        if (all || !high[j])
            sum_low += bits[j] / (cx.fbl.alpha[j] * l2);
        if (all || high[j])
            sum_high += bits[j] / l2;
    }
    const double phi = sum_low > 0.0 ? 1.0 / std::sqrt(sum_low) : 0.0;
    const double xi = sum_high > 0.0 ? 1.0 / std::sqrt(sum_high) : 0.0;

    std::vector<double> a(n);
    std::vector<double> b(n);
    double sa = 0.0;
    double sb = 0.0;
    for (int i = 0; i < n; ++i)
    {
        const double l2 = pb.gains[i] * pb.gains[i];
        const double al = cx.fbl.alpha[i];
        if (high[i])
        {
            a[i] = 2.0 * pb.sigma2 * (1.0 - al) / l2;
            b[i] = pb.sigma2 * kLn2 * pb.d * cx.theta * xi * bits[i] / (l2 * pb.df);
        }
        else
        {
            a[i] = pb.sigma2 * (1.0 - al) / (al * l2);
            b[i] = pb.sigma2 * kLn2 * pb.d * cx.theta * phi * bits[i] / (al * l2 * pb.df);
        }
        sa += a[i];
        sb += b[i];
    }
    if (sa >= pb.power_budget || !(sb > 0.0))
        throw_deficit(a, pb.power_budget, "bcd_solve_fbl");
    const double t = (pb.power_budget - sa) / sb;
    std::vector<double> p(n);
    for (int i = 0; i < n; ++i)
        p[i] = a[i] + b[i] * t;
    if (t_out)
        *t_out = t;
    return p;
}

double worst_branch_latency(const BcdContext &cx, std::span<const double> bits, std::span<const double> powers,
                            std::span<const int> high)
{
    double y = 0.0;
    for (int i = 0; i < cx.pb.g(); ++i)
    {
        const double gamma = powers[i] * cx.pb.gains[i] * cx.pb.gains[i] / cx.pb.sigma2;
        y = std::max(y, branch_latency(bits[i], gamma, cx.fbl.alpha[i], high[i] != 0, cx.pb.d, cx.pb.df));
    }
    return y;
}

// Exact finite-blocklength block rates [bit/s] at the given powers.
std::vector<double> exact_rates(const BcdContext &cx, std::span<const double> powers)
{
    std::vector<double> r(cx.pb.g());
    for (int i = 0; i < cx.pb.g(); ++i)
    {
        const double gamma = powers[i] * cx.pb.gains[i] * cx.pb.gains[i] / cx.pb.sigma2;
        r[i] = cx.pb.df * fbl_spectral_efficiency(gamma, cx.fbl.penalty_coefficient(i));
    }
    return r;
}

// Smallest latency y' >= y whose caps admit a feasible bit allocation (see the ideal solver).
double widen_latency(std::span<const double> rates, double y, const AllocProblem &pb)
{
    const double total = static_cast<double>(pb.bits_total());
    double y_floor = y;
    double y_top = 0.0;
    for (std::size_t i = 0; i < rates.size(); ++i)
    {
        if (!(rates[i] > 0.0))
            throw InfeasibleError("bcd_solve_fbl: block " + std::to_string(i) +
                                  " has a non-positive finite-blocklength rate.");
        y_floor = std::max(y_floor, pb.d * pb.b_min / rates[i]);
        y_top = std::max(y_top, pb.d * pb.b_max / rates[i]);
    }
    auto surplus = [&](double yy) {
        double s = 0.0;
        for (double r : rates)
            s += std::min(yy * r / pb.d, static_cast<double>(pb.b_max));
        return s - total;
    };
    if (surplus(y_floor) >= 0.0)
        return y_floor;
    return bisect_increasing(surplus, y_floor, std::max(y_top, y_floor), pb.solver).hi;
}

} // namespace

AllocationResult bcd_solve_fbl(const AllocProblem &problem, const FblParams &fbl, NormalizerScope scope)
{
    problem.validate();
    fbl.validate(problem.g());
    const int n = problem.g();
    const int d = problem.d;
    const double total = static_cast<double>(problem.bits_total());
    const BcdContext cx{problem, fbl, std::sqrt(problem.df0() / (problem.sigma2 * d * kLn2))};

    AllocationResult res;
    res.alpha = fbl.alpha;

    std::vector<double> bits(n, total / n);
    std::vector<double> powers(n, problem.power_budget / n);
    auto rates = exact_rates(cx, powers);
    if (std::any_of(rates.begin(), rates.end(), [](double r) { return !(r > 0.0); }))
    {
        powers = lc_power_fbl(bits, problem.gains, fbl, d, problem.df, problem.df0(), problem.sigma2,
                              problem.power_budget, problem.solver)
                     .powers;
        rates = exact_rates(cx, powers);
    }
    double y = 0.0;
    for (int i = 0; i < n; ++i)
        y = std::max(y, rates[i] > 0.0 ? d * bits[i] / rates[i] : kInf);
    if (!std::isfinite(y))
        throw InfeasibleError("bcd_solve_fbl: no initial power allocation gives every block a positive rate.");

    std::vector<int> high(n, 0);
    std::vector<double> caps(n);
    for (int k = 1; k <= problem.k_iters; ++k)
    {
        rates = exact_rates(cx, powers);
        const double y_ok = widen_latency(rates, y, problem);
        if (y_ok > y * (1.0 + 1e-9))
            ++res.cap_relaxations;
        y = std::max(y, y_ok);
        for (int i = 0; i < n; ++i)
            caps[i] = std::clamp(y * rates[i] / d, static_cast<double>(problem.b_min), static_cast<double>(problem.b_max));
        BitFill fill = importance_water_fill(problem.weights, caps, problem.b_min, total, problem.u_min,
                                             problem.u_max, problem.solver);
        bits = std::move(fill.bits);
        res.nu = fill.nu;

        for (int i = 0; i < n; ++i)
            high[i] = powers[i] * problem.gains[i] * problem.gains[i] / problem.sigma2 >= 1.0 ? 1 : 0;
        double t = 0.0;
        powers = regime_powers(cx, bits, high, scope, &t);
        y = worst_branch_latency(cx, bits, powers, high);
        res.tau = 1.0 / (t * t);

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
    res.regimes = high;

    res.bits_int = integerize(bits, problem.scores, problem.b_min, problem.b_max, problem.b_target, d);
    const std::vector<double> bits_int(res.bits_int.begin(), res.bits_int.end());
    res.powers = regime_powers(cx, bits_int, high, scope, nullptr);
    res.y = worst_branch_latency(cx, bits_int, res.powers, high);
    res.e_q = weighted_error_bound(std::span<const int>(res.bits_int), problem.weights, d, problem.u_min,
                                   problem.u_max);
    res.objective = res.y + res.e_q;
    return res;
}

PowerSolution lc_power_fbl(std::span<const double> bits, std::span<const double> gains, const FblParams &fbl, int d,
                           double df, double df0, double sigma2, double power_budget, const SolverSettings &settings)
{
    const int n = static_cast<int>(bits.size());
    if (static_cast<int>(gains.size()) != n || n == 0)
        throw std::invalid_argument("lc_power_fbl: bits and gains differ in length.");
    fbl.validate(n);
    if (!(df > 0.0 && df0 > 0.0 && sigma2 > 0.0 && power_budget > 0.0))
        throw std::invalid_argument("lc_power_fbl: df, df0, sigma2 and budget must be positive.");

    const double theta = std::sqrt(df0 / (sigma2 * d * kLn2));
    double sum_low = 0.0;
    double sum_high = 0.0;
    for (int j = 0; j < n; ++j)
    {
        if (!(gains[j] > 0.0))
            throw std::invalid_argument("lc_power_fbl: gains must be positive.");
        sum_low += bits[j] / (fbl.alpha[j] * gains[j] * gains[j]);
        sum_high += bits[j] / (gains[j] * gains[j]);
    }
    const double phi = sum_low > 0.0 ? 1.0 / std::sqrt(sum_low) : 0.0;
    const double xi = sum_high > 0.0 ? 1.0 / std::sqrt(sum_high) : 0.0;

    // t = 1 / sqrt(tau). The low branch applies while its own SNR stays below one.
    auto powers_at = [&](double t, std::vector<double> &p) {
        double sum = 0.0;
        for (int i = 0; i < n; ++i)
        {
            const double l2 = gains[i] * gains[i];
            const double al = fbl.alpha[i];
            const double g_low = (kLn2 / al) * (d * bits[i] * theta * phi * t / df + (1.0 - al) / kLn2);
            if (g_low < 1.0)
                p[i] = sigma2 / l2 * g_low;
            else
                p[i] = sigma2 * kLn2 / l2 * (d * bits[i] * theta * xi * t / df + 2.0 * (1.0 - al) / kLn2);
            sum += p[i];
        }
        return sum;
    };

    std::vector<double> p(n);
    std::vector<double> floor_power(n);
    if (powers_at(0.0, floor_power) >= power_budget)
        throw_deficit(floor_power, power_budget, "lc_power_fbl");

    double hi = 1.0;
    int expansions = 0;
    while (powers_at(hi, p) < power_budget)
    {
        hi *= settings.expand_factor;
        if (++expansions > settings.max_expansions)
            throw InfeasibleError("lc_power_fbl: power sum never reaches the budget.", 0.0, hi);
    }
    const Bracket br = bisect_increasing([&](double t) { return powers_at(t, p) - power_budget; }, 0.0, hi, settings);

    // A branch switch makes the sum jump; when the budget falls inside the jump, blend the two
    // sides so the budget is met exactly.
    std::vector<double> p_lo(n);
    std::vector<double> p_hi(n);
    const double s_lo = powers_at(br.lo, p_lo);
    const double s_hi = powers_at(br.hi, p_hi);
    PowerSolution out;
    out.powers.resize(n);
    const double w = s_hi > s_lo ? std::clamp((power_budget - s_lo) / (s_hi - s_lo), 0.0, 1.0) : 1.0;
    for (int i = 0; i < n; ++i)
        out.powers[i] = (1.0 - w) * p_lo[i] + w * p_hi[i];

    out.y = 0.0;
    for (int i = 0; i < n; ++i)
    {
        if (bits[i] <= 0.0)
            continue;
        const double gamma = out.powers[i] * gains[i] * gains[i] / sigma2;
        const double eff = linearized_spectral_efficiency(gamma, fbl.alpha[i]);
        out.y = std::max(out.y, eff > 0.0 ? d * bits[i] / (df * eff) : kInf);
    }
    return out;
}

AllocationResult solve_fixed_bits_fbl(const AllocProblem &problem, const FblParams &fbl, std::span<const int> bits)
{
    // Same bit-vector checks as solve_fixed_bits.
    problem.validate();
    fbl.validate(problem.g());
    long long sum = 0;
    for (int b : bits)
    {
        if (b < problem.b_min || b > problem.b_max)
            throw std::invalid_argument("solve_fixed_bits_fbl: bit depth outside [b_min, b_max].");
        sum += b;
    }
    if (static_cast<int>(bits.size()) != problem.g() || sum * problem.d != problem.b_target)
        throw std::invalid_argument("solve_fixed_bits_fbl: bits do not spend b_target.");

    AllocationResult res;
    res.alpha = fbl.alpha;
    res.bits_int.assign(bits.begin(), bits.end());
    res.bits_cont.assign(bits.begin(), bits.end());
    PowerSolution ps = lc_power_fbl(res.bits_cont, problem.gains, fbl, problem.d, problem.df, problem.df0(),
                                    problem.sigma2, problem.power_budget, problem.solver);
    res.powers = std::move(ps.powers);
    res.powers_cont = res.powers;
    res.y = res.y_cont = ps.y;
    res.e_q = weighted_error_bound(bits, problem.weights, problem.d, problem.u_min, problem.u_max);
    res.objective = res.y + res.e_q;
    res.regimes.resize(problem.g());
    for (int i = 0; i < problem.g(); ++i)
        res.regimes[i] = res.powers[i] * problem.gains[i] * problem.gains[i] / problem.sigma2 >= 1.0 ? 1 : 0;
    return res;
}

} // namespace iaqsmpa
