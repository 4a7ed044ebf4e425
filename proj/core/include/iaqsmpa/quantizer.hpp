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

#ifndef IAQSMPA_QUANTIZER_HPP
#define IAQSMPA_QUANTIZER_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace iaqsmpa
{

// H x W x C tensor, row-major with channels innermost, split into P x P patches.
// Patches are numbered row-major over the patch grid; within a patch, elements run
// row by row, then column, then channel.
struct PatchImage
{
    int height = 0;
    int width = 0;
    int channels = 0;
    int patch = 16;
    std::vector<double> values;
    double u_min = 0.0;
    double u_max = 0.0;

    int grid_rows() const { return height / patch; }
    int grid_cols() const { return width / patch; }
    int g() const { return grid_rows() * grid_cols(); }
    int d() const { return patch * patch * channels; }

    void validate() const;
    // Recomputes u_min / u_max from the values.
    void refresh_range();
    // Flat index into `values` of element e of patch p.
    std::size_t element_index(int p, int e) const;
};

// Builds a PatchImage and fills the value range.
PatchImage make_patch_image(int height, int width, int channels, int patch, std::vector<double> values);

// Packed bit string, most significant bit first inside each byte.
class BitString
{
public:
    BitString() = default;
    explicit BitString(std::size_t n_bits) : bytes_((n_bits + 7) / 8, 0), size_(n_bits) {}
    BitString(std::vector<std::uint8_t> bytes, std::size_t n_bits);

    std::size_t size() const { return size_; }
    bool get(std::size_t i) const { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1U; }
    void set(std::size_t i, bool bit)
    {
        const auto mask = static_cast<std::uint8_t>(1U << (7 - (i & 7)));
        if (bit)
            bytes_[i >> 3] |= mask;
        else
            bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
    }
    void flip(std::size_t i) { bytes_[i >> 3] ^= static_cast<std::uint8_t>(1U << (7 - (i & 7))); }
    const std::vector<std::uint8_t> &bytes() const { return bytes_; }
    std::size_t count_differences(const BitString &other) const;

    bool operator==(const BitString &) const = default;

private:
    std::vector<std::uint8_t> bytes_;
    std::size_t size_ = 0;
};

struct QuantizedImage
{
    int height = 0;
    int width = 0;
    int channels = 0;
    int patch = 16;
    std::vector<int> bits;                    // B[i] per patch
    std::vector<std::vector<std::uint32_t>> codes; // D codes per patch
    double u_min = 0.0;
    double u_max = 0.0;

    int g() const { return static_cast<int>(bits.size()); }
    int d() const { return patch * patch * channels; }
    std::size_t total_bits() const; // D * sum_i B[i]
};

inline constexpr int kMaxBitDepth = 24;

QuantizedImage quantize(const PatchImage &image, std::span<const int> bits);
PatchImage dequantize(const QuantizedImage &q);

// Patch-major, element-major, MSB-first packing of the codes.
BitString pack_codes(const QuantizedImage &q);
// Inverse of pack_codes: replaces q.codes with the codes decoded from `packed`.
void unpack_codes(const BitString &packed, QuantizedImage &q);

// Bit offset of each patch in the packed string, plus the total as the last entry.
std::vector<std::size_t> patch_bit_offsets(std::span<const int> bits, int d);

// E_Q = sum_i I[i] D (u_max - u_min)^2 / 4 * 4^{-B[i]}; accepts fractional B.
double weighted_error_bound(std::span<const double> bits, std::span<const double> weights, int d, double u_min,
                            double u_max);
double weighted_error_bound(std::span<const int> bits, std::span<const double> weights, int d, double u_min,
                            double u_max);

// Flips every bit of span i = [offsets[i], offsets[i+1]) independently with probability ber[i].
BitString inject_bit_errors(const BitString &packed, std::span<const double> per_block_ber,
                            std::span<const std::size_t> offsets, std::uint64_t seed);

// sum_i I[i] * sum_{e in patch i} (u - u_hat)^2
double weighted_distortion(const PatchImage &reference, const PatchImage &reconstructed,
                           std::span<const double> weights);
double mean_squared_error(const PatchImage &reference, const PatchImage &reconstructed);
// Peak is the reference's dynamic range u_max - u_min. Infinite for an exact match.
double psnr(const PatchImage &reference, const PatchImage &reconstructed);

} // namespace iaqsmpa

#endif
