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

#include "iaqsmpa/subcarrier_mapping.hpp"
#include "iaqsmpa/rng.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace iaqsmpa
{

std::string to_string(MappingPolicy policy)
{
    switch (policy)
    {
    case MappingPolicy::Iasm:
        return "IASM";
    case MappingPolicy::Random:
        return "RANDOM";
    case MappingPolicy::Inverse:
        return "INVERSE";
    }
    return "UNKNOWN";
}

MappingPolicy mapping_policy_from_string(const std::string &name)
{
    if (name == "IASM")
        return MappingPolicy::Iasm;
    if (name == "RANDOM")
        return MappingPolicy::Random;
    if (name == "INVERSE")
        return MappingPolicy::Inverse;
    throw std::invalid_argument("Unknown mapping policy: " + name);
}

std::vector<double> SubcarrierMapping::patch_gains() const
{
    std::vector<double> out(patch_to_block.size());
    for (std::size_t p = 0; p < patch_to_block.size(); ++p)
        out[p] = blocks.eq_gains[patch_to_block[p]];
    return out;
}

BlockPartition build_blocks(const ChannelRealization &channel, int g)
{
    channel.validate();
    const int total = channel.f * channel.n_s;
    if (g < 1 || total % g != 0)
        throw std::invalid_argument("build_blocks: g=" + std::to_string(g) + " does not divide n_s*f=" +
                                    std::to_string(total) + ".");
    const int size = total / g;

    // Flat index k = f * n_s + r is already (f, r)-lexicographic, so a stable sort on gain
    // breaks ties the documented way.
    std::vector<int> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return channel.gains[a] < channel.gains[b]; });

    BlockPartition out;
    out.members.resize(static_cast<std::size_t>(g));
    out.eq_gains.resize(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i)
    {
        auto &block = out.members[i];
        block.reserve(static_cast<std::size_t>(size));
        double sum = 0.0;
        for (int k = 0; k < size; ++k)
        {
            const int flat = order[static_cast<std::size_t>(i) * size + k];
            block.push_back({flat / channel.n_s, flat % channel.n_s});
            sum += channel.gains[flat];
        }
        out.eq_gains[i] = sum / size;
    }
    return out;
}

std::vector<int> assign_patches(std::span<const double> eq_gains, const ImportanceProfile &profile,
                                MappingPolicy policy, std::uint64_t seed)
{
    profile.validate();
    const int g = static_cast<int>(eq_gains.size());
    if (g != profile.g)
        throw std::invalid_argument("assign_patches: profile has " + std::to_string(profile.g) +
                                    " patches but there are " + std::to_string(g) + " blocks.");

    std::vector<int> patch_to_block(static_cast<std::size_t>(g));
    if (policy == MappingPolicy::Random)
    {
        std::iota(patch_to_block.begin(), patch_to_block.end(), 0);
        Rng rng = Rng(seed).split(streams::mapping);
        rng.shuffle(std::span<int>(patch_to_block));
        return patch_to_block;
    }

    // Blocks ranked strongest first; equal gains keep the higher block index first, matching
    // the ascending storage order read from the top.
    std::vector<int> blocks_desc(static_cast<std::size_t>(g));
    std::iota(blocks_desc.begin(), blocks_desc.end(), 0);
    std::stable_sort(blocks_desc.begin(), blocks_desc.end(), [&](int a, int b) {
        if (eq_gains[a] != eq_gains[b])
            return eq_gains[a] > eq_gains[b];
        return a > b;
    });

    const auto patches = importance_order(profile);
    for (int k = 0; k < g; ++k)
    {
        const int block = policy == MappingPolicy::Iasm ? blocks_desc[k] : blocks_desc[g - 1 - k];
        patch_to_block[patches[k]] = block;
    }
    return patch_to_block;
}

SubcarrierMapping make_mapping(const ChannelRealization &channel, const ImportanceProfile &profile,
                               MappingPolicy policy, std::uint64_t seed)
{
    SubcarrierMapping out;
    out.blocks = build_blocks(channel, profile.g);
    out.patch_to_block = assign_patches(out.blocks.eq_gains, profile, policy, seed);
    out.policy = policy;
    return out;
}

std::vector<std::vector<Subchannel>> symbol_placement(const SubcarrierMapping &mapping, int block, int n_symbols,
                                                     std::uint64_t seed)
{
    if (block < 0 || block >= mapping.g())
        throw std::out_of_range("symbol_placement: block index out of range.");
    if (n_symbols < 0)
        throw std::invalid_argument("symbol_placement: n_symbols must be non-negative.");

    Rng rng = Rng(seed).split(streams::placement).split(static_cast<std::uint64_t>(block));
    const auto &members = mapping.blocks.members[block];
    std::vector<std::vector<Subchannel>> out;
    out.reserve(static_cast<std::size_t>(n_symbols));
    for (int t = 0; t < n_symbols; ++t)
    {
        auto placement = members;
        rng.shuffle(std::span<Subchannel>(placement));
        out.push_back(std::move(placement));
    }
    return out;
}

nlohmann::json to_json(const SubcarrierMapping &mapping)
{
    return {{"policy", to_string(mapping.policy)},
            {"block_size", mapping.blocks.block_size()},
            {"eq_gains", mapping.blocks.eq_gains},
            {"patch_to_block", mapping.patch_to_block}};
}

} // namespace iaqsmpa
