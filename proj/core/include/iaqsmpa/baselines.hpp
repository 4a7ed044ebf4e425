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

#ifndef IAQSMPA_BASELINES_HPP
#define IAQSMPA_BASELINES_HPP

#include "iaqsmpa/link_model.hpp"

#include <span>
#include <vector>

namespace iaqsmpa
{

// floor(bits_total / g) bits per patch, the remainder one bit at a time to the most important patches.
std::vector<int> uniform_bits(std::span<const double> scores, long long bits_total, int b_min, int b_max);

// Importance-weighted bits with no latency coupling: the water-fill with every cap at b_max, then integerized.
std::vector<int> iaq_bits(std::span<const double> weights, std::span<const double> scores, long long bits_total,
                          int b_min, int b_max, double u_min, double u_max);

// Top-beta bits with beta derived from the budget. When floor(g beta / 100) does not spend the budget
// exactly, the integerization fix-up closes the gap.
std::vector<int> topbeta_bits_for_budget(std::span<const double> scores, long long bits_total, int b_min, int b_max);

struct WaterFillingResult
{
    std::vector<double> powers; // row-major F x N_s, sums to p_tot
    double level = 0.0;         // water level mu; powers are max(mu - sigma2 / lambda^2, 0)
    double capacity = 0.0;      // sum of log2(1 + p lambda^2 / sigma2) over all subchannels
};

// Capacity-maximizing power over all N_s F subchannels of one channel realization.
WaterFillingResult classical_water_filling(const ChannelRealization &channel, double p_tot, double sigma2);

} // namespace iaqsmpa

#endif
