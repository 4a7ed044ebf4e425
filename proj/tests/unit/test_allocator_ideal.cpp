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
#include "iaqsmpa/metrics.hpp"
#include "iaqsmpa/quantizer.hpp"

#include "support/oracle.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <numeric>

using namespace iaqsmpa;
using namespace iaqsmpa::testing;

namespace
{

AllocProblem four_patch_example()
{
    AllocProblem pb;
    pb.gains = {0.5, 1.0, 1.5, 2.0};
    pb.scores = {0.1, 0.2, 0.3, 0.4};
    ImportanceProfile prof;
    prof.g = 4;
    prof.scores = pb.scores;
    pb.weights = compute_weights(prof, 1.0).weights;
    pb.d = 2;
    pb.b_target = 24;
    pb.df = 1000.0;
    pb.block_size = 1;
    pb.sigma2 = 1.0;
    pb.power_budget = 40.0;
    return pb;
}

double sum_of(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0);
}

} // namespace

TEST_CASE("fixed-bit power solve, two blocks", "[ideal]")
{
    const std::vector<double> bits{1.0, 1.0};
    const std::vector<double> gains{1.0, 2.0};
    const auto ps = power_solve_fixed_bits(bits, gains, 1, 1.0, 1.0, 2.0);
    CHECK(ps.y == Catch::Approx(0.725420071279253).epsilon(1e-10));
    REQUIRE(ps.powers.size() == 2);
    CHECK(ps.powers[0] == Catch::Approx(1.6).epsilon(1e-9));
    CHECK(ps.powers[1] == Catch::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("fixed-bit power solve equalizes latencies and spends the budget", "[ideal]")
{
    Rng rng(21);
    for (int t = 0; t < 50; ++t)
    {
        const auto pb = random_small_problem(rng, 8, 16);
        std::vector<double> bits(8);
        for (auto &b : bits)
            b = 1.0 + 7.0 * rng.uniform();
        const auto ps = power_solve_fixed_bits(bits, pb.gains, pb.d, pb.df, pb.sigma2, pb.power_budget);
        CHECK(sum_of(ps.powers) == Catch::Approx(pb.power_budget).epsilon(1e-10));
        for (std::size_t i = 0; i < bits.size(); ++i)
        {
            const double rate = pb.df * std::log2(1.0 + ps.powers[i] * pb.gains[i] * pb.gains[i] / pb.sigma2);
            CHECK(pb.d * bits[i] / rate == Catch::Approx(ps.y).epsilon(1e-9));
        }
        CHECK(ps.y == Catch::Approx(oracle_latency(bits, pb.gains, pb.d, pb.df, pb.sigma2, pb.power_budget))
                          .epsilon(1e-9));
    }
}

TEST_CASE("powers_for_latency inverts the Shannon latency", "[ideal]")
{
    const std::vector<double> bits{2.0, 3.0};
    const std::vector<double> gains{0.7, 1.3};
    const auto p = powers_for_latency(bits, gains, 4, 10.0, 0.5, 0.9);
    for (int i = 0; i < 2; ++i)
        CHECK(4 * bits[i] / (10.0 * std::log2(1.0 + p[i] * gains[i] * gains[i] / 0.5)) ==
              Catch::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("integerization follows the documented rule", "[ideal]")
{
    const std::vector<double> cont{2.5, 2.5};
    const std::vector<double> scores{0.2, 0.8};
    CHECK(integerize(cont, scores, 1, 8, 6, 1) == std::vector<int>{3, 3});
    // 2.4 + 2.4 rounds to 4; the missing bit goes to the more important patch.
    CHECK(integerize(std::vector<double>{2.4, 2.4}, scores, 1, 8, 5, 1) == std::vector<int>{2, 3});
    // 2.6 + 2.6 rounds to 6; the extra bit leaves the less important patch.
    CHECK(integerize(std::vector<double>{2.6, 2.6}, scores, 1, 8, 5, 1) == std::vector<int>{2, 3});
    // Clipping before the fix-up.
    CHECK(integerize(std::vector<double>{0.2, 9.7}, scores, 1, 8, 9, 1) == std::vector<int>{1, 8});
    CHECK_THROWS_AS(integerize(cont, scores, 1, 8, 7, 2), std::invalid_argument);
    CHECK_THROWS_AS(integerize(cont, scores, 1, 8, 20, 1), std::invalid_argument);
}

TEST_CASE("importance water-fill", "[ideal]")
{
    const std::vector<double> w{0.1, 0.5, 1.0, 0.9};
    const std::vector<double> caps(4, 8.0);
    const auto fill = importance_water_fill(w, caps, 1.0, 14.0, 0.0, 1.0);
    CHECK(sum_of(fill.bits) == Catch::Approx(14.0).epsilon(1e-12));
    for (std::size_t i = 0; i < w.size(); ++i)
    {
        CHECK(fill.bits[i] >= 1.0 - 1e-12);
        CHECK(fill.bits[i] <= 8.0 + 1e-12);
        for (std::size_t j = 0; j < w.size(); ++j)
            if (w[i] < w[j])
                CHECK(fill.bits[i] <= fill.bits[j] + 1e-12);
    }
    // Interior patches sit at the unconstrained level for the returned nu.
    for (std::size_t i = 0; i < w.size(); ++i)
        if (fill.bits[i] > 1.0 + 1e-9 && fill.bits[i] < 8.0 - 1e-9)
            CHECK(fill.bits[i] ==
                  Catch::Approx(0.5 * std::log2(w[i] * std::log(2.0) / (2.0 * fill.nu))).epsilon(1e-9));

    const std::vector<double> tight{1.5, 8.0, 2.0, 8.0};
    const auto capped = importance_water_fill(w, tight, 1.0, 14.0, 0.0, 1.0);
    for (std::size_t i = 0; i < w.size(); ++i)
        CHECK(capped.bits[i] <= tight[i] + 1e-12);
    CHECK(sum_of(capped.bits) == Catch::Approx(14.0).epsilon(1e-12));

    CHECK_THROWS_AS(importance_water_fill(w, std::vector<double>(4, 2.0), 1.0, 14.0, 0.0, 1.0), InfeasibleError);
    CHECK_THROWS_AS(importance_water_fill(w, std::vector<double>{0.5, 8, 8, 8}, 1.0, 14.0, 0.0, 1.0),
                    InfeasibleError);
}

TEST_CASE("four-patch example is within 5% of the exhaustive optimum", "[ideal]")
{
    const auto pb = four_patch_example();
    const auto best = exhaustive_oracle(pb);
    CHECK(best.objective == Catch::Approx(0.007452748077214364).epsilon(1e-9));
    CHECK(best.bits == std::vector<int>{1, 3, 4, 4});
    const auto res = bcd_solve(pb);
    CHECK(res.objective <= 1.05 * best.objective);
    CHECK(res.objective >= best.objective * (1.0 - 1e-9));
}

TEST_CASE("BCD output satisfies both budgets exactly", "[ideal]")
{
    Rng rng(31);
    for (int t = 0; t < 30; ++t)
    {
        auto pb = random_small_problem(rng, 16, 64);
        const auto res = bcd_solve(pb);
        const long long bits = std::accumulate(res.bits_int.begin(), res.bits_int.end(), 0LL) * pb.d;
        CHECK(bits == pb.b_target);
        CHECK(sum_of(res.powers) == Catch::Approx(pb.power_budget).epsilon(1e-9));
        for (int b : res.bits_int)
        {
            CHECK(b >= pb.b_min);
            CHECK(b <= pb.b_max);
        }
        CHECK(res.y == Catch::Approx(latency_bound(std::span<const int>(res.bits_int), res.powers, pb.gains, pb.d,
                                                   pb.df, pb.sigma2))
                           .epsilon(1e-9));
        CHECK(res.e_q == Catch::Approx(weighted_error_bound(std::span<const int>(res.bits_int), pb.weights, pb.d,
                                                            pb.u_min, pb.u_max))
                             .epsilon(1e-12));
    }
}

TEST_CASE("BCD objective trace is non-increasing", "[ideal]")
{
    Rng rng(41);
    for (int t = 0; t < 40; ++t)
    {
        const auto pb = random_small_problem(rng, 16, 64);
        const auto res = bcd_solve(pb);
        REQUIRE(res.trace.size() == static_cast<std::size_t>(pb.k_iters));
        for (std::size_t k = 1; k < res.trace.size(); ++k)
            CHECK(res.trace[k].objective <= res.trace[k - 1].objective * (1.0 + 1e-9));
        CHECK(res.non_monotone_steps == 0);
    }
}

TEST_CASE("continuous solution meets the stationarity conditions", "[ideal]")
{
    Rng rng(51);
    for (int t = 0; t < 20; ++t)
    {
        auto pb = random_small_problem(rng, 16, 64);
        pb.block_size = 4;
        const auto res = bcd_solve(pb);
        for (int i = 0; i < pb.g(); ++i)
        {
            const double rate =
                pb.df * std::log2(1.0 + res.powers_cont[i] * pb.gains[i] * pb.gains[i] / pb.sigma2);
            CHECK(pb.d * res.bits_cont[i] / rate == Catch::Approx(res.y_cont).epsilon(1e-6));
        }
        const double slope = latency_budget_slope(res.bits_cont, pb);
        const auto rho = ideal_latency_multipliers(res.bits_cont, res.powers_cont, res.y_cont, slope, pb);
        CHECK(sum_of(rho) == Catch::Approx(1.0).epsilon(1e-6));
        // The reported multiplier is per subchannel: -dy/dbudget divided by the block size.
        CHECK(res.tau == Catch::Approx(-slope / pb.block_size).epsilon(1e-5));
    }
}

TEST_CASE("solve_fixed_bits validates its input", "[ideal]")
{
    const auto pb = four_patch_example();
    CHECK_THROWS_AS(solve_fixed_bits(pb, std::vector<int>{1, 3, 4}), std::invalid_argument);
    CHECK_THROWS_AS(solve_fixed_bits(pb, std::vector<int>{1, 3, 4, 5}), std::invalid_argument);
    CHECK_THROWS_AS(solve_fixed_bits(pb, std::vector<int>{0, 4, 4, 4}), std::invalid_argument);
    const auto ok = solve_fixed_bits(pb, std::vector<int>{1, 3, 4, 4});
    CHECK(ok.objective == Catch::Approx(0.007452748077214364).epsilon(1e-9));
}

TEST_CASE("problem validation", "[ideal]")
{
    auto pb = four_patch_example();
    pb.b_target = 25;
    CHECK_THROWS_AS(pb.validate(), std::invalid_argument);
    pb = four_patch_example();
    pb.b_target = 2 * 40;
    CHECK_THROWS_AS(pb.validate(), std::invalid_argument);
    pb = four_patch_example();
    pb.gains[0] = 0.0;
    CHECK_THROWS_AS(pb.validate(), std::invalid_argument);
    pb = four_patch_example();
    pb.power_budget = -1.0;
    CHECK_THROWS_AS(pb.validate(), std::invalid_argument);
}
