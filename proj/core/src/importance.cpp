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

#include "iaqsmpa/importance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace iaqsmpa
{

void ImportanceProfile::validate() const
{
    if (g < 1)
        throw std::invalid_argument("ImportanceProfile: g must be >= 1.");
    if (scores.size() != static_cast<std::size_t>(g))
        throw std::invalid_argument("ImportanceProfile: expected " + std::to_string(g) + " scores, got " +
                                    std::to_string(scores.size()) + ".");
    for (double s : scores)
        if (!std::isfinite(s))
            throw std::invalid_argument("ImportanceProfile: scores must be finite.");
    if (patch_grid[0] != 0 || patch_grid[1] != 0)
        if (patch_grid[0] * patch_grid[1] != g)
            throw std::invalid_argument("ImportanceProfile: patch_grid rows * cols must equal g.");
}

WeightVector compute_weights(const ImportanceProfile &profile, double delta, double d_c)
{
    profile.validate();
    if (!(delta > 0.0))
        throw std::invalid_argument("compute_weights: delta must be positive.");
    if (!(d_c > 0.0 && d_c < 1.0))
        throw std::invalid_argument("compute_weights: d_c must lie in (0, 1).");

    const auto [lo, hi] = std::minmax_element(profile.scores.begin(), profile.scores.end());
    const double a_min = *lo;
    const double range = *hi - a_min;

    WeightVector out{.weights = std::vector<double>(profile.scores.size(), 1.0), .delta = delta, .d_c = d_c};
    if (range <= 0.0)
        return out; // constant profile: 0/0 resolved to equal (maximal) importance

    for (std::size_t i = 0; i < profile.scores.size(); ++i)
    {
        const double normalized = (profile.scores[i] - a_min) / range;
        out.weights[i] = std::clamp((1.0 - d_c) * std::pow(normalized, delta) + d_c, d_c, 1.0);
    }
    return out;
}

WeightVector constant_weights(int g, double value)
{
    if (g < 1)
        throw std::invalid_argument("constant_weights: g must be >= 1.");
    if (!(value > 0.0 && value <= 1.0))
        throw std::invalid_argument("constant_weights: value must lie in (0, 1].");
    return {.weights = std::vector<double>(static_cast<std::size_t>(g), value), .delta = 0.0, .d_c = value};
}

std::vector<int> importance_order(std::span<const double> scores)
{
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return scores[a] > scores[b]; });
    return order;
}

int topbeta_count(int g, double beta_percent)
{
    if (!(beta_percent >= 0.0 && beta_percent <= 100.0))
        throw std::invalid_argument("topbeta: beta must lie in [0, 100].");
    // The small slack keeps exact ratios such as 196 * (100/7) / 100 = 28 from flooring to 27.
    const double exact = static_cast<double>(g) * beta_percent / 100.0;
    return std::clamp(static_cast<int>(std::floor(exact + 1e-9)), 0, g);
}

std::vector<int> topbeta_bits(const ImportanceProfile &profile, double beta_percent, int b_min, int b_max)
{
    profile.validate();
    if (b_min > b_max)
        throw std::invalid_argument("topbeta_bits: b_min must not exceed b_max.");
    const int k = topbeta_count(profile.g, beta_percent);
    std::vector<int> bits(static_cast<std::size_t>(profile.g), b_min);
    const auto order = importance_order(profile);
    for (int n = 0; n < k; ++n)
        bits[order[n]] = b_max;
    return bits;
}

double topbeta_beta_for_budget(int g, long long bits_per_patch_total, int b_min, int b_max)
{
    if (b_max <= b_min)
        return 0.0;
    const double spare = static_cast<double>(bits_per_patch_total) - static_cast<double>(g) * b_min;
    return 100.0 * spare / (static_cast<double>(g) * (b_max - b_min));
}

ImportanceProfile profile_from_json(const nlohmann::json &j)
{
    ImportanceProfile p;
    p.scores = j.at("scores").get<std::vector<double>>();
    p.g = j.contains("g") ? j.at("g").get<int>() : static_cast<int>(p.scores.size());
    if (j.contains("patch_grid"))
    {
        const auto grid = j.at("patch_grid").get<std::vector<int>>();
        if (grid.size() != 2)
            throw std::invalid_argument("ImportanceProfile: patch_grid must have two entries.");
        p.patch_grid = {grid[0], grid[1]};
    }
    p.source = j.value("source", std::string{});
    p.validate();
    return p;
}

nlohmann::json to_json(const ImportanceProfile &profile)
{
    return {{"g", profile.g},
            {"patch_grid", {profile.patch_grid[0], profile.patch_grid[1]}},
            {"scores", profile.scores},
            {"source", profile.source}};
}

ImportanceProfile load_profile(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("Cannot open importance profile: " + path);
    return profile_from_json(nlohmann::json::parse(in));
}

void save_profile(const std::string &path, const ImportanceProfile &profile)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("Cannot write importance profile: " + path);
    out << to_json(profile).dump(2) << '\n';
}

} // namespace iaqsmpa
