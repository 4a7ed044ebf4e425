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

#ifndef IAQSMPA_SUBCARRIER_MAPPING_HPP
#define IAQSMPA_SUBCARRIER_MAPPING_HPP

#include "iaqsmpa/importance.hpp"
#include "iaqsmpa/link_model.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace iaqsmpa
{

enum class MappingPolicy
{
    Iasm,    // k-th most important patch -> k-th strongest block
    Random,  // seeded uniform bijection
    Inverse, // k-th most important patch -> k-th weakest block
};

std::string to_string(MappingPolicy policy);
MappingPolicy mapping_policy_from_string(const std::string &name);

struct Subchannel
{
    int f = 0; // subcarrier
    int r = 0; // stream
    bool operator==(const Subchannel &) const = default;
};

// Sort-and-slice partition of all N_s F subchannels. Blocks are stored in ascending
// equivalent-gain order, so eq_gains is non-decreasing in block index.
struct BlockPartition
{
    std::vector<std::vector<Subchannel>> members;
    std::vector<double> eq_gains; // arithmetic mean of member gains

    int g() const { return static_cast<int>(eq_gains.size()); }
    int block_size() const { return members.empty() ? 0 : static_cast<int>(members.front().size()); }
};

struct SubcarrierMapping
{
    BlockPartition blocks;
    std::vector<int> patch_to_block; // bijection, 0-based
    MappingPolicy policy = MappingPolicy::Iasm;

    int g() const { return blocks.g(); }
    // Equivalent gain seen by each patch, i.e. eq_gains[patch_to_block[p]].
    std::vector<double> patch_gains() const;
};

// Ties in gain are broken by (f, r) lexicographic order. Throws if g does not divide N_s F.
BlockPartition build_blocks(const ChannelRealization &channel, int g);

std::vector<int> assign_patches(std::span<const double> eq_gains, const ImportanceProfile &profile,
                                MappingPolicy policy, std::uint64_t seed);

SubcarrierMapping make_mapping(const ChannelRealization &channel, const ImportanceProfile &profile,
                               MappingPolicy policy, std::uint64_t seed);

// Random placement of a block's symbols onto its member subchannels: entry t is a permutation
// of blocks.members[block] used in OFDM symbol t.
std::vector<std::vector<Subchannel>> symbol_placement(const SubcarrierMapping &mapping, int block, int n_symbols,
                                                     std::uint64_t seed);

nlohmann::json to_json(const SubcarrierMapping &mapping);

} // namespace iaqsmpa

#endif
