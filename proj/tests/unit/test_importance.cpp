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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>

using namespace iaqsmpa;

namespace
{

ImportanceProfile profile_of(std::vector<double> scores)
{
    ImportanceProfile p;
    p.g = static_cast<int>(scores.size());
    p.scores = std::move(scores);
    return p;
}

} // namespace

TEST_CASE("weights follow the shaped min-max map", "[importance]")
{
    const auto w = compute_weights(profile_of({0.0, 0.5, 1.0}), 2.0, 1e-7);
    REQUIRE(w.weights.size() == 3);
    CHECK(w.weights[0] == Catch::Approx(1e-7).epsilon(1e-12));
    CHECK(w.weights[1] == Catch::Approx(0.25 * (1.0 - 1e-7) + 1e-7).epsilon(1e-12));
    CHECK(w.weights[2] == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("weights are monotone in the score", "[importance]")
{
    const auto p = profile_of({0.3, 0.1, 0.9, 0.2, 0.5});
    for (double delta : {0.5, 1.0, 3.0})
    {
        const auto w = compute_weights(p, delta);
        for (std::size_t i = 0; i < p.scores.size(); ++i)
            for (std::size_t j = 0; j < p.scores.size(); ++j)
                if (p.scores[i] < p.scores[j])
                    CHECK(w.weights[i] <= w.weights[j]);
    }
}

TEST_CASE("weights are invariant under affine score maps", "[importance]")
{
    const auto p = profile_of({0.3, 0.1, 0.9, 0.2});
    auto q = p;
    for (auto &v : q.scores)
        v = 4.0 * v - 7.0;
    const auto a = compute_weights(p, 1.5);
    const auto b = compute_weights(q, 1.5);
    for (std::size_t i = 0; i < a.weights.size(); ++i)
        CHECK(a.weights[i] == Catch::Approx(b.weights[i]).epsilon(1e-12));
}

TEST_CASE("constant profile gives equal weights", "[importance]")
{
    const auto w = compute_weights(profile_of({0.4, 0.4, 0.4}));
    for (double v : w.weights)
        CHECK(v == 1.0);
}

TEST_CASE("weight parameters are validated", "[importance]")
{
    const auto p = profile_of({0.1, 0.2});
    CHECK_THROWS_AS(compute_weights(p, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(compute_weights(p, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(constant_weights(3, 0.0), std::invalid_argument);
    CHECK(constant_weights(3, 0.01).weights == std::vector<double>(3, 0.01));
}

TEST_CASE("profile validation", "[importance]")
{
    CHECK_THROWS_AS(profile_of({0.1, std::nan("")}).validate(), std::invalid_argument);
    CHECK_NOTHROW(profile_of({0.1, -0.2}).validate());
    auto p = profile_of({0.1, 0.2});
    p.g = 3;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("importance order is descending with stable ties", "[importance]")
{
    const std::vector<double> s{0.2, 0.9, 0.2, 0.5};
    CHECK(importance_order(s) == std::vector<int>{1, 3, 0, 2});
}

TEST_CASE("Top-beta small cases", "[importance]")
{
    const auto p = profile_of({0.1, 0.4, 0.2, 0.3});
    CHECK(topbeta_bits(p, 50.0, 1, 8) == std::vector<int>{1, 8, 1, 8});
    CHECK(topbeta_bits(p, 0.0, 1, 8) == std::vector<int>(4, 1));
    CHECK(topbeta_bits(p, 100.0, 1, 8) == std::vector<int>(4, 8));
}

TEST_CASE("Top-beta budget arithmetic", "[importance]")
{
    CHECK(topbeta_count(196, 25.0) == 49);
    ImportanceProfile p;
    p.g = 196;
    for (int i = 0; i < 196; ++i)
        p.scores.push_back(static_cast<double>(i));
    const auto bits = topbeta_bits(p, 25.0, 1, 8);
    int sum = 0;
    for (int b : bits)
        sum += b;
    CHECK(sum == 49 * 8 + 147);
    const double rho = sum * 768.0 / (8.0 * 224 * 224 * 3);
    CHECK(rho == Catch::Approx(0.34375).epsilon(1e-12));
    CHECK(bits[195] == 8);
    CHECK(bits[0] == 1);
    CHECK(topbeta_beta_for_budget(196, 539, 1, 8) == Catch::Approx(25.0));
    CHECK(topbeta_count(196, topbeta_beta_for_budget(196, 392, 1, 8)) == 28);
    CHECK_THROWS_AS(topbeta_count(196, 101.0), std::invalid_argument);
}

TEST_CASE("profile JSON round trip", "[importance]")
{
    ImportanceProfile p = profile_of({0.1, 0.7, 0.3, 0.2});
    p.patch_grid = {2, 2};
    p.source = "unit";
    const auto back = profile_from_json(to_json(p));
    CHECK(back.g == 4);
    CHECK(back.scores == p.scores);
    CHECK(back.patch_grid == p.patch_grid);
    CHECK(back.source == "unit");

    const auto path = std::filesystem::temp_directory_path() / "iaqsmpa_profile_test.json";
    save_profile(path.string(), p);
    CHECK(load_profile(path.string()).scores == p.scores);
    std::filesystem::remove(path);
}

TEST_CASE("profile JSON schema errors", "[importance]")
{
    CHECK_THROWS(profile_from_json(nlohmann::json{{"g", 2}}));
    CHECK_THROWS(profile_from_json(nlohmann::json{{"scores", {0.1, 0.2}}, {"patch_grid", {1, 2, 3}}}));
    CHECK_THROWS(profile_from_json(nlohmann::json{{"scores", {0.1, 0.2}}, {"g", 3}}));
    CHECK_THROWS(load_profile("/nonexistent/profile.json"));
}

TEST_CASE("shipped synthetic profiles load", "[importance]")
{
    for (const char *name : {"ramp_196.json", "heavytail_196.json"})
    {
        const auto p = load_profile(std::string(IAQSMPA_DATA_DIR) + "/profiles/" + name);
        CHECK(p.g == 196);
        CHECK(p.patch_grid == std::array<int, 2>{14, 14});
    }
}
