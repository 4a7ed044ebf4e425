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

#include "iaqsmpa/link_model.hpp"
#include "iaqsmpa/subcarrier_mapping.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

using namespace iaqsmpa;

namespace
{

ChannelRealization single_stream(std::vector<double> gains)
{
    ChannelRealization ch;
    ch.f = static_cast<int>(gains.size());
    ch.n_s = 1;
    ch.gains = std::move(gains);
    return ch;
}

ImportanceProfile profile_of(std::vector<double> scores)
{
    ImportanceProfile p;
    p.g = static_cast<int>(scores.size());
    p.scores = std::move(scores);
    return p;
}

bool is_permutation_of_range(std::vector<int> v)
{
    std::sort(v.begin(), v.end());
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != static_cast<int>(i))
            return false;
    return true;
}

} // namespace

TEST_CASE("sort-and-slice blocks", "[mapping]")
{
    const auto blocks = build_blocks(single_stream({1, 4, 2, 3}), 2);
    REQUIRE(blocks.g() == 2);
    CHECK(blocks.eq_gains == std::vector<double>{1.5, 3.5});
    CHECK(blocks.members[0] == std::vector<Subchannel>{{0, 0}, {2, 0}});
    CHECK(blocks.members[1] == std::vector<Subchannel>{{3, 0}, {1, 0}});
}

TEST_CASE("degenerate block partitions", "[mapping]")
{
    const auto flat = build_blocks(single_stream({2, 2, 2, 2}), 2);
    CHECK(flat.eq_gains == std::vector<double>{2, 2});
    const auto singles = build_blocks(single_stream({3, 1, 4, 2}), 4);
    CHECK(singles.eq_gains == std::vector<double>{1, 2, 3, 4});
    CHECK_THROWS_AS(build_blocks(single_stream({1, 2, 3}), 2), std::invalid_argument);
}

TEST_CASE("blocks cover every subchannel once", "[mapping]")
{
    LinkConfig cfg;
    const auto ch = generate_channel(cfg, 2);
    const auto blocks = build_blocks(ch, 196);
    std::set<std::pair<int, int>> seen;
    for (const auto &b : blocks.members)
    {
        CHECK(b.size() == 16);
        for (const auto &s : b)
            seen.insert({s.f, s.r});
    }
    CHECK(seen.size() == static_cast<std::size_t>(cfg.subchannels()));
    CHECK(std::is_sorted(blocks.eq_gains.begin(), blocks.eq_gains.end()));
}

TEST_CASE("patch assignment policies", "[mapping]")
{
    const std::vector<double> eq{1.5, 3.5};
    const auto p = profile_of({0.9, 0.1});
    CHECK(assign_patches(eq, p, MappingPolicy::Iasm, 0) == std::vector<int>{1, 0});
    CHECK(assign_patches(eq, p, MappingPolicy::Inverse, 0) == std::vector<int>{0, 1});
}

TEST_CASE("random mapping is a seeded bijection", "[mapping]")
{
    std::vector<double> eq(196);
    std::vector<double> scores(196);
    for (int i = 0; i < 196; ++i)
    {
        eq[i] = i;
        scores[i] = 0.5 + 0.001 * i;
    }
    const auto p = profile_of(scores);
    const auto a = assign_patches(eq, p, MappingPolicy::Random, 1);
    const auto b = assign_patches(eq, p, MappingPolicy::Random, 1);
    const auto c = assign_patches(eq, p, MappingPolicy::Random, 2);
    CHECK(is_permutation_of_range(a));
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("IASM pairs importance rank with gain rank", "[mapping]")
{
    LinkConfig cfg;
    const auto ch = generate_channel(cfg, 4);
    ImportanceProfile p;
    p.g = 196;
    for (int i = 0; i < 196; ++i)
        p.scores.push_back(std::sin(0.37 * i));
    const auto m = make_mapping(ch, p, MappingPolicy::Iasm, 4);
    const auto gains = m.patch_gains();
    for (int i = 0; i < 196; ++i)
        for (int j = 0; j < 196; ++j)
            if (p.scores[i] > p.scores[j])
                CHECK(gains[i] >= gains[j]);
    const auto inv = make_mapping(ch, p, MappingPolicy::Inverse, 4).patch_gains();
    for (int i = 0; i < 196; ++i)
        for (int j = 0; j < 196; ++j)
            if (p.scores[i] > p.scores[j])
                CHECK(inv[i] <= inv[j]);
}

TEST_CASE("symbol placement permutes block members", "[mapping]")
{
    const auto ch = single_stream({1, 4, 2, 3, 5, 6, 7, 8});
    SubcarrierMapping m;
    m.blocks = build_blocks(ch, 2);
    m.patch_to_block = {0, 1};
    const auto a = symbol_placement(m, 1, 5, 9);
    const auto b = symbol_placement(m, 1, 5, 9);
    REQUIRE(a.size() == 5);
    CHECK(a == b);
    auto members = m.blocks.members[1];
    auto by_key = [](const Subchannel &x, const Subchannel &y) { return std::tie(x.f, x.r) < std::tie(y.f, y.r); };
    std::sort(members.begin(), members.end(), by_key);
    for (auto placement : a)
    {
        std::sort(placement.begin(), placement.end(), by_key);
        CHECK(placement == members);
    }
    SubcarrierMapping single;
    single.blocks = build_blocks(single_stream({1, 2}), 2);
    single.patch_to_block = {0, 1};
    CHECK(symbol_placement(single, 0, 3, 1)[2] == single.blocks.members[0]);
    CHECK_THROWS_AS(symbol_placement(m, 2, 1, 0), std::out_of_range);
}

TEST_CASE("mapping policy names", "[mapping]")
{
    for (auto p : {MappingPolicy::Iasm, MappingPolicy::Random, MappingPolicy::Inverse})
        CHECK(mapping_policy_from_string(to_string(p)) == p);
    CHECK_THROWS_AS(mapping_policy_from_string("greedy"), std::invalid_argument);
}
