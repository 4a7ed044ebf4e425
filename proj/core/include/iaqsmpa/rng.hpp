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

#ifndef IAQSMPA_RNG_HPP
#define IAQSMPA_RNG_HPP

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace iaqsmpa
{

// Portable pseudo-random generator: xoshiro256** (Blackman & Vigna, 2018) seeded through
// SplitMix64. Every draw used by the library (uniform doubles, normals, integer ranges,
// shuffles) is derived here from the raw 64-bit stream, so a seed reproduces the same
// numbers on any platform or in any other language that implements the same two
// published generators. std:: distributions are deliberately not used; their output is
// implementation defined.
class Rng
{
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next(); }
    std::uint64_t next();

    // Uniform in [0, 1) with 53 random mantissa bits.
    double uniform();

    // Standard normal via Box-Muller; the second variate of each pair is cached.
    double normal();

    // Uniform integer in [0, n), unbiased (rejection sampling). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    // Fisher-Yates shuffle driven by below().
    template <typename T>
    void shuffle(std::span<T> values)
    {
        for (std::size_t i = values.size(); i > 1; --i)
        {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

    // Independent child stream. Children of the same parent with different ids do not overlap
    // in practice; the child state is SplitMix64(seed ^ mix(stream_id)).
    Rng split(std::uint64_t stream_id) const;

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::array<std::uint64_t, 4> s_{};
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

std::uint64_t splitmix64(std::uint64_t &state);

// Stream ids used throughout the library, so results do not depend on call order.
namespace streams
{
inline constexpr std::uint64_t channel = 0x01;
inline constexpr std::uint64_t mapping = 0x02;
inline constexpr std::uint64_t placement = 0x03;
inline constexpr std::uint64_t bit_errors = 0x04;
inline constexpr std::uint64_t test_data = 0x10;
} // namespace streams

} // namespace iaqsmpa

#endif
