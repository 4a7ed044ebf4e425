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

#include "iaqsmpa/baselines.hpp"
#include "iaqsmpa/allocator_ideal.hpp"
#include "iaqsmpa/importance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace iaqsmpa
{

namespace
{

void check_budget(std::size_t g, long long bits_total, int b_min, int b_max)
{
    const auto n = static_cast<long long>(g);
    if (g == 0 || b_min > b_max || bits_total < n * b_min || bits_total > n * b_max)
        throw std::invalid_argument("bit budget " + std::to_string(bits_total) + " not reachable with " +
                                    std::to_string(g) + " patches in [" + std::to_string(b_min) + ", " +
                                    std::to_string(b_max) + "].");
}

} // namespace

std::vector<int> uniform_bits(std::span<const double> scores, long long bits_total, int b_min, int b_max)
{
    check_budget(scores.size(), bits_total, b_min, b_max);
    const auto g = static_cast<long long>(scores.size());
    const std::vector<double> flat(scores.size(), static_cast<double>(bits_total / g));
    return integerize(flat, scores, b_min, b_max, bits_total, 1);
}

std::vector<int> iaq_bits(std::span<const double> weights, std::span<const double> scores, long long bits_total,
                          int b_min, int b_max, double u_min, double u_max)
{
    check_budget(scores.size(), bits_total, b_min, b_max);
    const std::vector<double> caps(scores.size(), static_cast<double>(b_max));
    const BitFill fill = importance_water_fill(weights, caps, b_min, static_cast<double>(bits_total), u_min, u_max);
    return integerize(fill.bits, scores, b_min, b_max, bits_total, 1);
}

std::vector<int> topbeta_bits_for_budget(std::span<const double> scores, long long bits_total, int b_min, int b_max)
{
    check_budget(scores.size(), bits_total, b_min, b_max);
    const int g = static_cast<int>(scores.size());
    const double beta = std::clamp(topbeta_beta_for_budget(g, bits_total, b_min, b_max), 0.0, 100.0);
    const int k = topbeta_count(g, beta);
    const auto order = importance_order(scores);
    std::vector<double> bits(scores.size(), b_min);
    for (int n = 0; n < k; ++n)
        bits[order[n]] = b_max;
    return integerize(bits, scores, b_min, b_max, bits_total, 1);
}

WaterFillingResult classical_water_filling(const ChannelRealization &channel, double p_tot, double sigma2)
{
    channel.validate();
    if (!(p_tot > 0.0 && sigma2 > 0.0))
        throw std::invalid_argument("classical_water_filling: p_tot and sigma2 must be positive.");
    const std::size_t n = channel.gains.size();

    // Noise-to-gain floors, ascending; the first m subchannels are active for the right m.
    std::vector<double> floor_level(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        const double l = channel.gains[k];
        floor_level[k] = l > 0.0 ? sigma2 / (l * l) : std::numeric_limits<double>::infinity();
    }
    std::vector<double> sorted = floor_level;
    std::sort(sorted.begin(), sorted.end());

    double level = 0.0;
    double prefix = 0.0;
    for (std::size_t m = 1; m <= n; ++m)
    {
        if (!std::isfinite(sorted[m - 1]))
            break;
        prefix += sorted[m - 1];
        const double mu = (p_tot + prefix) / static_cast<double>(m);
        if (m == n || !(mu > sorted[m]))
        {
            level = mu;
            break;
        }
        level = mu;
    }

    WaterFillingResult out;
    out.level = level;
    out.powers.resize(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k)
    {
        out.powers[k] = std::max(level - floor_level[k], 0.0);
        sum += out.powers[k];
    }
    // Remove rounding drift so the budget holds to machine precision.
    for (double &p : out.powers)
        p *= p_tot / sum;
    for (std::size_t k = 0; k < n; ++k)
    {
        const double l = channel.gains[k];
        out.capacity += std::log2(1.0 + out.powers[k] * l * l / sigma2);
    }
    return out;
}

} // namespace iaqsmpa
