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

#ifndef IAQSMPA_ALLOCATOR_IDEAL_HPP
#define IAQSMPA_ALLOCATOR_IDEAL_HPP

#include "iaqsmpa/bisection.hpp"

#include <span>
#include <string>
#include <vector>

namespace iaqsmpa
{

// One joint bit/power allocation instance. Vectors are indexed by patch; gains[i] is the
// equivalent gain of the block that carries patch i.
struct AllocProblem
{
    std::vector<double> gains;   // lambda[i] > 0
    std::vector<double> weights; // I[i] in (0, 1]
    std::vector<double> scores;  // attention scores; only their order is used (integerization)
    int d = 768;                 // elements per patch
    long long b_target = 0;      // total bits, multiple of d
    int b_min = 1;
    int b_max = 8;
    double df = 240e3;          // block bandwidth N_s F / G * df0 [Hz]
    int block_size = 16;         // subchannels per block, N_s F / G
    double sigma2 = 1.0;
    double power_budget = 196.0; // sum_i P[i] = P_tot G / (N_s F)
    double u_min = 0.0;
    double u_max = 1.0;
    int k_iters = 5;
    SolverSettings solver;

    void validate() const;
    int g() const { return static_cast<int>(gains.size()); }
    long long bits_total() const { return b_target / d; } // sum_i B[i]
    double df0() const { return df / block_size; }
};

struct IterationRecord
{
    int k = 0;
    double y = 0.0;
    double e_q = 0.0;
    double objective = 0.0;
};

struct AllocationResult
{
    // Continuous BCD solution.
    std::vector<double> bits_cont;
    std::vector<double> powers_cont;
    double y_cont = 0.0;
    double nu = 0.0;
    double tau = 0.0;

    // Deployed solution: integer bits and the powers re-solved for them.
    std::vector<int> bits_int;
    std::vector<double> powers; // per-subchannel power of each block
    double y = 0.0;             // design worst-case latency [s]
    double e_q = 0.0;
    double objective = 0.0; // y + e_q

    std::vector<IterationRecord> trace;
    int cap_relaxations = 0;    // iterations whose bit caps had to be widened to stay feasible
    int non_monotone_steps = 0; // objective increases beyond 1e-9 relative
    bool feasible = true;
    std::string message;

    // Finite-blocklength extras; empty for the ideal solver.
    std::vector<int> regimes; // 1 for blocks in the high-SNR branch
    std::vector<double> alpha;
};

struct PowerSolution
{
    std::vector<double> powers;
    double y = 0.0;
};

// P[i] = sigma2 / lambda^2 (2^{D B[i] / (y df)} - 1)
std::vector<double> powers_for_latency(std::span<const double> bits, std::span<const double> gains, int d,
                                       double df, double sigma2, double y);

// Minimum worst-case latency for fixed bits: bisection on y so that the powers above spend
// exactly the budget. Throws InfeasibleError when no bracket is found.
PowerSolution power_solve_fixed_bits(std::span<const double> bits, std::span<const double> gains, int d,
                                     double df, double sigma2, double power_budget,
                                     const SolverSettings &settings = {});
PowerSolution power_solve_fixed_bits(std::span<const int> bits, std::span<const double> gains, int d, double df,
                                     double sigma2, double power_budget, const SolverSettings &settings = {});

// Power-constraint multiplier implied by the bits, y and the subcarrier spacing.
double power_multiplier(std::span<const double> bits, std::span<const double> gains, int d, double df,
                        double df0, double sigma2, double y);

struct BitFill
{
    std::vector<double> bits;
    double nu = 0.0;
};

// B[i] = min(cap[i], max(b_min, 0.5 log2(I[i] ln2 (u_max - u_min)^2 / (2 nu)))) with nu chosen so
// that sum_i B[i] = bits_total. Requires b_min <= cap[i] and sum cap >= bits_total.
BitFill importance_water_fill(std::span<const double> weights, std::span<const double> caps, double b_min,
                              double bits_total, double u_min, double u_max, const SolverSettings &settings = {});

// Round half away from zero, clip to [b_min, b_max], then add bits to the most important patches
// (or remove from the least important) one at a time until sum_i d B[i] == b_target.
std::vector<int> integerize(std::span<const double> bits_cont, std::span<const double> scores, int b_min, int b_max,
                            long long b_target, int d);

// Joint bit/power block coordinate descent for the ideal (Shannon-rate) link.
AllocationResult bcd_solve(const AllocProblem &problem);

// Power-only allocation for given integer bits; fills the deployed fields of the result.
AllocationResult solve_fixed_bits(const AllocProblem &problem, std::span<const int> bits);

} // namespace iaqsmpa

#endif
