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

#ifndef IAQSMPA_ALLOCATOR_FBL_HPP
#define IAQSMPA_ALLOCATOR_FBL_HPP

#include "iaqsmpa/allocator_ideal.hpp"

#include <span>
#include <string>
#include <vector>

namespace iaqsmpa
{

// Gaussian tail Q(x) = P[N(0,1) > x].
double q_function(double x);
// Inverse of Q on (0, 1), accurate to about 1e-12 absolute. Throws outside (0, 1).
double q_inverse(double p);

// sqrt(1 - (1 + gamma)^-2)
double dispersion_exact(double gamma);
// Segment-wise linear upper bound min((gamma + 1) / 2, 1), tangent to the exact form at gamma = sqrt(2) - 1.
double dispersion_approx(double gamma);

// Per-block reliability parameters of the finite-blocklength link.
struct FblParams
{
    std::vector<double> bler;  // target block error rate per block, in (0, 1)
    double l_c = 800.0;        // maximum semantic symbol length in channel uses
    std::vector<double> alpha; // 1 - Q^-1(bler) / (2 sqrt(l_c))
    std::vector<double> qinv;  // Q^-1(bler)

    // One BLER broadcast to all g blocks, or one per block.
    static FblParams uniform(double bler, double l_c, int g);
    static FblParams per_block(std::span<const double> bler, double l_c);
    // Direct slope specification, used when alpha is given rather than a BLER.
    static FblParams from_alpha(std::span<const double> alpha, double l_c);

    void validate(int g) const;
    int g() const { return static_cast<int>(alpha.size()); }
    // Coefficient of the dispersion term: Q^-1 / (ln2 sqrt(l_c)) = 2 (1 - alpha) / ln2.
    double penalty_coefficient(int i) const;
};

// Shared dispersion penalty in bits per channel use: coefficient * sqrt(U(gamma)).
double dispersion_penalty(double gamma, double coefficient);

// Achievable rate per unit bandwidth, log2(1 + gamma) - penalty. May be negative.
double fbl_spectral_efficiency(double gamma, double coefficient);

// Linearized rate per unit bandwidth used by the convexified solver,
// (gamma - 2 (1 - alpha) min((gamma + 1) / 2, 1)) / ln2.
double linearized_spectral_efficiency(double gamma, double alpha);

enum class NormalizerScope
{
    SameRegime, // Phi sums over low-SNR blocks only, Xi over high-SNR blocks only
    AllBlocks,  // both sums run over every block
};

std::string to_string(NormalizerScope scope);
NormalizerScope normalizer_scope_from_string(const std::string &name);

// Joint bit/power block coordinate descent under the finite-blocklength rate.
AllocationResult bcd_solve_fbl(const AllocProblem &problem, const FblParams &fbl,
                               NormalizerScope scope = NormalizerScope::SameRegime);

// Closed-form-per-tau power allocation for fixed bits; y is the worst linearized latency.
PowerSolution lc_power_fbl(std::span<const double> bits, std::span<const double> gains, const FblParams &fbl, int d,
                           double df, double df0, double sigma2, double power_budget,
                           const SolverSettings &settings = {});

// Fixed bits plus lc_power_fbl; fills the deployed fields of the result.
AllocationResult solve_fixed_bits_fbl(const AllocProblem &problem, const FblParams &fbl, std::span<const int> bits);

} // namespace iaqsmpa

#endif
