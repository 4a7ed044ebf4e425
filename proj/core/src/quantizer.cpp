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

#include "iaqsmpa/quantizer.hpp"
#include "iaqsmpa/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace iaqsmpa
{

void PatchImage::validate() const
{
    if (height < 1 || width < 1 || channels < 1 || patch < 1)
        throw std::invalid_argument("PatchImage: dimensions must be positive.");
    if (height % patch != 0 || width % patch != 0)
        throw std::invalid_argument("PatchImage: patch size " + std::to_string(patch) + " does not divide " +
                                    std::to_string(height) + "x" + std::to_string(width) + ".");
    if (values.size() != static_cast<std::size_t>(height) * width * channels)
        throw std::invalid_argument("PatchImage: value count does not match H*W*C.");
    if (!(u_min <= u_max))
        throw std::invalid_argument("PatchImage: u_min > u_max.");
    for (double v : values)
        if (!std::isfinite(v) || v < u_min || v > u_max)
            throw std::invalid_argument("PatchImage: value outside [u_min, u_max] or not finite.");
}

void PatchImage::refresh_range()
{
    if (values.empty())
    {
        u_min = u_max = 0.0;
        return;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    u_min = *lo;
    u_max = *hi;
}

std::size_t PatchImage::element_index(int p, int e) const
{
    const int cols = grid_cols();
    const int pr = p / cols;
    const int pc = p % cols;
    const int c = e % channels;
    const int x = (e / channels) % patch;
    const int y = e / (channels * patch);
    const std::size_t row = static_cast<std::size_t>(pr) * patch + y;
    const std::size_t col = static_cast<std::size_t>(pc) * patch + x;
    return (row * width + col) * channels + c;
}

PatchImage make_patch_image(int height, int width, int channels, int patch, std::vector<double> values)
{
    PatchImage img;
    img.height = height;
    img.width = width;
    img.channels = channels;
    img.patch = patch;
    img.values = std::move(values);
    img.refresh_range();
    img.validate();
    return img;
}

BitString::BitString(std::vector<std::uint8_t> bytes, std::size_t n_bits) : bytes_(std::move(bytes)), size_(n_bits)
{
    if (bytes_.size() != (n_bits + 7) / 8)
        throw std::invalid_argument("BitString: byte count does not match bit count.");
    // Keep padding bits zero so equality is well defined.
    if (n_bits % 8 != 0)
        bytes_.back() &= static_cast<std::uint8_t>(0xFFU << (8 - n_bits % 8));
}

std::size_t BitString::count_differences(const BitString &other) const
{
    if (other.size_ != size_)
        throw std::invalid_argument("BitString: size mismatch.");
    std::size_t n = 0;
    for (std::size_t k = 0; k < bytes_.size(); ++k)
        n += static_cast<std::size_t>(std::popcount(static_cast<unsigned>(bytes_[k] ^ other.bytes_[k])));
    return n;
}

std::size_t QuantizedImage::total_bits() const
{
    std::size_t sum = 0;
    for (int b : bits)
        sum += static_cast<std::size_t>(b);
    return sum * static_cast<std::size_t>(d());
}

static void check_depths(std::span<const int> bits)
{
    for (int b : bits)
        if (b < 1 || b > kMaxBitDepth)
            throw std::invalid_argument("quantize: bit depth " + std::to_string(b) + " outside [1, " +
                                        std::to_string(kMaxBitDepth) + "].");
}

QuantizedImage quantize(const PatchImage &image, std::span<const int> bits)
{
    image.validate();
    const int g = image.g();
    if (static_cast<int>(bits.size()) != g)
        throw std::invalid_argument("quantize: expected " + std::to_string(g) + " bit depths, got " +
                                    std::to_string(bits.size()) + ".");
    check_depths(bits);

    QuantizedImage q;
    q.height = image.height;
    q.width = image.width;
    q.channels = image.channels;
    q.patch = image.patch;
    q.bits.assign(bits.begin(), bits.end());
    q.u_min = image.u_min;
    q.u_max = image.u_max;
    q.codes.resize(static_cast<std::size_t>(g));

    const double range = image.u_max - image.u_min;
    const int d = image.d();
    for (int p = 0; p < g; ++p)
    {
        const std::uint32_t levels = 1U << bits[p];
        const double step = range / levels;
        auto &codes = q.codes[p];
        codes.resize(static_cast<std::size_t>(d));
        for (int e = 0; e < d; ++e)
        {
            if (range == 0.0)
            {
                codes[e] = 0;
                continue;
            }
            const double cell = std::floor((image.values[image.element_index(p, e)] - image.u_min) / step);
            codes[e] = static_cast<std::uint32_t>(std::clamp(cell, 0.0, static_cast<double>(levels - 1)));
        }
    }
    return q;
}

PatchImage dequantize(const QuantizedImage &q)
{
    check_depths(q.bits);
    PatchImage img;
    img.height = q.height;
    img.width = q.width;
    img.channels = q.channels;
    img.patch = q.patch;
    img.u_min = q.u_min;
    img.u_max = q.u_max;
    if (img.height % img.patch != 0 || img.width % img.patch != 0 || img.g() != q.g())
        throw std::invalid_argument("dequantize: dimensions do not match the bit table.");
    if (q.codes.size() != q.bits.size())
        throw std::invalid_argument("dequantize: code table size mismatch.");
    img.values.resize(static_cast<std::size_t>(q.height) * q.width * q.channels);

    const double range = q.u_max - q.u_min;
    const int d = q.d();
    for (int p = 0; p < q.g(); ++p)
    {
        const std::uint32_t levels = 1U << q.bits[p];
        const double step = range / levels;
        if (q.codes[p].size() != static_cast<std::size_t>(d))
            throw std::invalid_argument("dequantize: patch " + std::to_string(p) + " has the wrong code count.");
        for (int e = 0; e < d; ++e)
        {
            const std::uint32_t code = q.codes[p][e];
            if (code >= levels)
                throw std::out_of_range("dequantize: code " + std::to_string(code) + " out of range in patch " +
                                        std::to_string(p) + ".");
            // Clamp guards against rounding past u_max in the last cell.
            img.values[img.element_index(p, e)] = std::min(q.u_max, q.u_min + (code + 0.5) * step);
        }
    }
    return img;
}

std::vector<std::size_t> patch_bit_offsets(std::span<const int> bits, int d)
{
    std::vector<std::size_t> offsets(bits.size() + 1, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        offsets[i + 1] = offsets[i] + static_cast<std::size_t>(bits[i]) * static_cast<std::size_t>(d);
    return offsets;
}

BitString pack_codes(const QuantizedImage &q)
{
    check_depths(q.bits);
    BitString out(q.total_bits());
    std::size_t pos = 0;
    for (int p = 0; p < q.g(); ++p)
    {
        const int b = q.bits[p];
        for (std::uint32_t code : q.codes[p])
        {
            if (code >> b)
                throw std::out_of_range("pack_codes: code exceeds its bit depth in patch " + std::to_string(p) + ".");
            for (int k = b - 1; k >= 0; --k)
                out.set(pos++, (code >> k) & 1U);
        }
    }
    return out;
}

void unpack_codes(const BitString &packed, QuantizedImage &q)
{
    check_depths(q.bits);
    if (packed.size() != q.total_bits())
        throw std::invalid_argument("unpack_codes: payload has " + std::to_string(packed.size()) +
                                    " bits, bit table expects " + std::to_string(q.total_bits()) + ".");
    const int d = q.d();
    q.codes.assign(q.bits.size(), std::vector<std::uint32_t>(static_cast<std::size_t>(d), 0));
    std::size_t pos = 0;
    for (int p = 0; p < q.g(); ++p)
        for (int e = 0; e < d; ++e)
        {
            std::uint32_t code = 0;
            for (int k = 0; k < q.bits[p]; ++k)
                code = (code << 1) | static_cast<std::uint32_t>(packed.get(pos++));
            q.codes[p][e] = code;
        }
}

template <typename T>
static double error_bound_impl(std::span<const T> bits, std::span<const double> weights, int d, double u_min,
                               double u_max)
{
    if (bits.size() != weights.size())
        throw std::invalid_argument("weighted_error_bound: bits and weights differ in length.");
    const double range = u_max - u_min;
    const double scale = d * range * range / 4.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        sum += weights[i] * std::exp2(-2.0 * static_cast<double>(bits[i]));
    return scale * sum;
}

double weighted_error_bound(std::span<const double> bits, std::span<const double> weights, int d, double u_min,
                            double u_max)
{
    return error_bound_impl(bits, weights, d, u_min, u_max);
}

double weighted_error_bound(std::span<const int> bits, std::span<const double> weights, int d, double u_min,
                            double u_max)
{
    return error_bound_impl(bits, weights, d, u_min, u_max);
}

BitString inject_bit_errors(const BitString &packed, std::span<const double> per_block_ber,
                            std::span<const std::size_t> offsets, std::uint64_t seed)
{
    if (offsets.size() != per_block_ber.size() + 1 || offsets.back() != packed.size())
        throw std::invalid_argument("inject_bit_errors: spans do not cover the payload.");
    BitString out = packed;
    Rng rng = Rng(seed).split(streams::bit_errors);
    for (std::size_t i = 0; i < per_block_ber.size(); ++i)
    {
        const double ber = per_block_ber[i];
        if (!(ber >= 0.0 && ber <= 1.0))
            throw std::invalid_argument("inject_bit_errors: BER outside [0, 1].");
        if (ber == 0.0)
            continue;
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k)
            if (ber == 1.0 || rng.uniform() < ber)
                out.flip(k);
    }
    return out;
}

static void check_same_shape(const PatchImage &a, const PatchImage &b)
{
    if (a.height != b.height || a.width != b.width || a.channels != b.channels || a.patch != b.patch ||
        a.values.size() != b.values.size())
        throw std::invalid_argument("image shapes differ.");
}

double weighted_distortion(const PatchImage &reference, const PatchImage &reconstructed,
                           std::span<const double> weights)
{
    check_same_shape(reference, reconstructed);
    if (static_cast<int>(weights.size()) != reference.g())
        throw std::invalid_argument("weighted_distortion: one weight per patch required.");
    double total = 0.0;
    for (int p = 0; p < reference.g(); ++p)
    {
        double sq = 0.0;
        for (int e = 0; e < reference.d(); ++e)
        {
            const std::size_t k = reference.element_index(p, e);
            const double diff = reference.values[k] - reconstructed.values[k];
            sq += diff * diff;
        }
        total += weights[p] * sq;
    }
    return total;
}

double mean_squared_error(const PatchImage &reference, const PatchImage &reconstructed)
{
    check_same_shape(reference, reconstructed);
    double sq = 0.0;
    for (std::size_t k = 0; k < reference.values.size(); ++k)
    {
        const double diff = reference.values[k] - reconstructed.values[k];
        sq += diff * diff;
    }
    return reference.values.empty() ? 0.0 : sq / static_cast<double>(reference.values.size());
}

double psnr(const PatchImage &reference, const PatchImage &reconstructed)
{
    const double mse = mean_squared_error(reference, reconstructed);
    if (mse == 0.0)
        return std::numeric_limits<double>::infinity();
    const double peak = reference.u_max - reference.u_min;
    return 10.0 * std::log10(peak * peak / mse);
}

} // namespace iaqsmpa
