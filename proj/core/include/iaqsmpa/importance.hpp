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

#ifndef IAQSMPA_IMPORTANCE_HPP
#define IAQSMPA_IMPORTANCE_HPP

#include <nlohmann/json.hpp>

#include <array>
#include <span>
#include <string>
#include <vector>

namespace iaqsmpa
{

// Per-patch mean attention scores a_i. Patch indices are 0-based, row-major over the patch grid.
struct ImportanceProfile
{
    int g = 0;
    std::array<int, 2> patch_grid{0, 0}; // rows, cols; {0, 0} when unknown
    std::vector<double> scores;
    std::string source;

    void validate() const;
};

struct WeightVector
{
    std::vector<double> weights; // I[i] in [d_c, 1]
    double delta = 1.0;
    double d_c = 1e-7;
};

inline constexpr double kDefaultDelta = 1.0;
inline constexpr double kDefaultWeightFloor = 1e-7;

// I[i] = (1 - d_c) (a_i - a_min)^delta / (a_max - a_min)^delta + d_c.
// A constant profile maps to all-ones weights.
WeightVector compute_weights(const ImportanceProfile &profile, double delta = kDefaultDelta,
                             double d_c = kDefaultWeightFloor);

// Uniform override (e.g. I[i] = 0.01), bypassing the score-to-weight map.
WeightVector constant_weights(int g, double value);

// Patch indices by descending score; equal scores keep ascending index order.
std::vector<int> importance_order(std::span<const double> scores);
inline std::vector<int> importance_order(const ImportanceProfile &profile) { return importance_order(profile.scores); }

// Number of patches floor(g * beta / 100) that receive b_max under Top-beta.
int topbeta_count(int g, double beta_percent);

std::vector<int> topbeta_bits(const ImportanceProfile &profile, double beta_percent, int b_min, int b_max);

// Beta (percent) whose Top-beta allocation spends exactly `bits_per_patch_total` = sum_i B[i] bits,
// i.e. the inverse of the compression-ratio formula. Not clamped.
double topbeta_beta_for_budget(int g, long long bits_per_patch_total, int b_min, int b_max);

// Importance-profile file: {"g": int, "patch_grid": [rows, cols], "scores": [...], "source": str}.
ImportanceProfile profile_from_json(const nlohmann::json &j);
nlohmann::json to_json(const ImportanceProfile &profile);
ImportanceProfile load_profile(const std::string &path);
void save_profile(const std::string &path, const ImportanceProfile &profile);

} // namespace iaqsmpa

#endif
