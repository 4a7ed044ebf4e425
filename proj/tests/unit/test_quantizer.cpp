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

#include "iaqsmpa/image_io.hpp"
#include "iaqsmpa/quantizer.hpp"
#include "iaqsmpa/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <numeric>

using namespace iaqsmpa;

namespace
{

PatchImage random_image(Rng &rng, int h, int w, int c, int patch)
{
    std::vector<double> v(static_cast<std::size_t>(h) * w * c);
    for (auto &x : v)
        x = rng.normal();
    return make_patch_image(h, w, c, patch, std::move(v));
}

std::vector<int> random_bits(Rng &rng, int g, int lo, int hi)
{
    std::vector<int> b(static_cast<std::size_t>(g));
    for (auto &x : b)
        x = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    return b;
}

std::vector<double> random_weights(Rng &rng, int g)
{
    std::vector<double> w(static_cast<std::size_t>(g));
    for (auto &x : w)
        x = 0.01 + 0.99 * rng.uniform();
    return w;
}

} // namespace

TEST_CASE("patch geometry and element order", "[quantizer]")
{
    std::vector<double> v(4 * 4 * 2);
    std::iota(v.begin(), v.end(), 0.0);
    const auto img = make_patch_image(4, 4, 2, 2, v);
    CHECK(img.g() == 4);
    CHECK(img.d() == 8);
    CHECK(img.u_min == 0.0);
    CHECK(img.u_max == 31.0);
    // Patch 1 is the top-right 2x2 square; its first element is pixel (0, 2), channel 0.
    CHECK(img.values[img.element_index(1, 0)] == 4.0);
    CHECK(img.values[img.element_index(1, 1)] == 5.0);
    CHECK(img.values[img.element_index(1, 2)] == 6.0);
    CHECK(img.values[img.element_index(2, 0)] == 16.0);
    CHECK_THROWS_AS(make_patch_image(5, 4, 1, 2, std::vector<double>(20)), std::invalid_argument);
    CHECK_THROWS_AS(make_patch_image(4, 4, 1, 2, std::vector<double>(15)), std::invalid_argument);
}

TEST_CASE("uniform quantizer codes and midpoints", "[quantizer]")
{
    const auto img = make_patch_image(1, 4, 1, 1, {0.0, 0.3, 0.5, 1.0});
    const auto q = quantize(img, std::vector<int>{1, 2, 2, 3});
    CHECK(q.codes[0][0] == 0);
    CHECK(q.codes[1][0] == 1);
    CHECK(q.codes[2][0] == 2);
    CHECK(q.codes[3][0] == 7);
    const auto back = dequantize(q);
    CHECK(back.values[0] == Catch::Approx(0.25));
    CHECK(back.values[1] == Catch::Approx(0.375));
    CHECK(back.values[2] == Catch::Approx(0.625));
    CHECK(back.values[3] == Catch::Approx(0.9375));
}

TEST_CASE("quantizer input validation", "[quantizer]")
{
    const auto img = make_patch_image(2, 2, 1, 1, {0.0, 0.1, 0.2, 0.3});
    CHECK_THROWS_AS(quantize(img, std::vector<int>{1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(quantize(img, std::vector<int>{1, 1, 1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(quantize(img, std::vector<int>{1, 1, 1, kMaxBitDepth + 1}), std::invalid_argument);
}

TEST_CASE("constant image quantizes to zero codes", "[quantizer]")
{
    const auto img = make_patch_image(2, 2, 1, 1, std::vector<double>(4, 0.7));
    const auto q = quantize(img, std::vector<int>{3, 3, 3, 3});
    for (const auto &c : q.codes)
        CHECK(c[0] == 0);
    const auto back = dequantize(q);
    for (double v : back.values)
        CHECK(v == Catch::Approx(0.7));
}

TEST_CASE("weighted distortion stays under the error bound on random images", "[quantizer]")
{
    Rng rng = Rng(2026).split(streams::test_data);
    for (int t = 0; t < 100; ++t)
    {
        const auto img = random_image(rng, 32, 48, 3, 8);
        const auto bits = random_bits(rng, img.g(), 1, 10);
        const auto w = random_weights(rng, img.g());
        const auto rec = dequantize(quantize(img, bits));
        const double bound = weighted_error_bound(std::span<const int>(bits), w, img.d(), img.u_min, img.u_max);
        CHECK(weighted_distortion(img, rec, w) <= bound);
    }
}

TEST_CASE("weighted distortion stays under the error bound on natural images", "[quantizer]")
{
    Rng rng = Rng(7).split(streams::test_data);
    int n = 0;
    for (const auto &entry : std::filesystem::directory_iterator(std::string(IAQSMPA_TEST_DATA_DIR) + "/images"))
    {
        if (entry.path().extension() != ".png")
            continue;
        ++n;
        const auto img = load_png(entry.path().string());
        REQUIRE(img.g() == 196);
        const auto bits = random_bits(rng, img.g(), 1, 8);
        const auto w = random_weights(rng, img.g());
        const auto rec = dequantize(quantize(img, bits));
        CHECK(weighted_distortion(img, rec, w) <=
              weighted_error_bound(std::span<const int>(bits), w, img.d(), img.u_min, img.u_max));
    }
    CHECK(n == 10);
}

TEST_CASE("fractional error bound matches the integer form", "[quantizer]")
{
    const std::vector<int> bi{1, 3, 4, 4};
    const std::vector<double> bd{1.0, 3.0, 4.0, 4.0};
    const std::vector<double> w{1e-7, 1.0 / 3.0, 2.0 / 3.0, 1.0};
    CHECK(weighted_error_bound(std::span<const int>(bi), w, 2, 0.0, 1.0) ==
          Catch::Approx(0.5 * (2.5e-8 + 9.0 / 768.0)).epsilon(1e-12));
    CHECK(weighted_error_bound(std::span<const double>(bd), w, 2, 0.0, 1.0) ==
          Catch::Approx(weighted_error_bound(std::span<const int>(bi), w, 2, 0.0, 1.0)).epsilon(1e-15));
}

TEST_CASE("PSNR does not drop when one patch gains a bit", "[quantizer]")
{
    Rng rng = Rng(13).split(streams::test_data);
    const auto img = random_image(rng, 16, 16, 1, 4);
    auto bits = random_bits(rng, img.g(), 1, 6);
    for (int p = 0; p < img.g(); ++p)
    {
        const double before = psnr(img, dequantize(quantize(img, bits)));
        ++bits[p];
        const double after = psnr(img, dequantize(quantize(img, bits)));
        CHECK(after >= before - 1e-12);
    }
}

TEST_CASE("pack and unpack are bit-exact for mixed depths", "[quantizer]")
{
    Rng rng = Rng(17).split(streams::test_data);
    for (int t = 0; t < 20; ++t)
    {
        const auto img = random_image(rng, 16, 24, 3, 8);
        const auto bits = random_bits(rng, img.g(), 1, kMaxBitDepth);
        const auto q = quantize(img, bits);
        const BitString packed = pack_codes(q);
        CHECK(packed.size() == q.total_bits());
        auto copy = q;
        for (auto &c : copy.codes)
            std::fill(c.begin(), c.end(), 0U);
        unpack_codes(packed, copy);
        CHECK(copy.codes == q.codes);
        const auto offsets = patch_bit_offsets(bits, q.d());
        CHECK(offsets.back() == packed.size());
        const BitString again(packed.bytes(), packed.size());
        CHECK(again == packed);
    }
}

TEST_CASE("packing is MSB first", "[quantizer]")
{
    const auto img = make_patch_image(1, 2, 1, 1, {0.0, 1.0});
    const auto q = quantize(img, std::vector<int>{3, 2});
    const auto packed = pack_codes(q);
    REQUIRE(packed.size() == 5);
    // codes 000 and 11 -> 00011xxx
    CHECK(packed.bytes()[0] == 0x18);
}

TEST_CASE("bit string edits", "[quantizer]")
{
    BitString s(12);
    s.set(0, true);
    s.set(11, true);
    s.flip(5);
    CHECK(s.get(0));
    CHECK(s.get(5));
    CHECK(s.get(11));
    CHECK_FALSE(s.get(1));
    CHECK(s.bytes()[0] == 0x84);
    CHECK(s.bytes()[1] == 0x10);
    BitString t(12);
    CHECK(s.count_differences(t) == 3);
    // Padding bits of a byte buffer never leak into comparisons.
    const BitString padded(std::vector<std::uint8_t>{0x84, 0x1F}, 12);
    CHECK(padded == s);
}

TEST_CASE("bit-error injection follows the per-patch rate", "[quantizer]")
{
    const std::size_t n = 1000000;
    const BitString zeros(n);
    const std::vector<std::size_t> offsets{0, n / 2, n};
    const std::vector<double> ber{1.31691972423106e-3, 0.0};
    const auto hit = inject_bit_errors(zeros, ber, offsets, 3);
    std::size_t first = 0;
    std::size_t second = 0;
    for (std::size_t i = 0; i < n / 2; ++i)
        first += hit.get(i);
    for (std::size_t i = n / 2; i < n; ++i)
        second += hit.get(i);
    const double mean = ber[0] * (n / 2);
    CHECK(std::abs(static_cast<double>(first) - mean) < 3.0 * std::sqrt(mean * (1.0 - ber[0])));
    CHECK(second == 0);
    CHECK(inject_bit_errors(zeros, ber, offsets, 3) == hit);
    CHECK_THROWS_AS(inject_bit_errors(zeros, std::vector<double>{0.1}, offsets, 3), std::invalid_argument);
}

TEST_CASE("image files round trip", "[quantizer]")
{
    const auto dir = std::filesystem::temp_directory_path();
    Rng rng = Rng(19).split(streams::test_data);
    const auto img = random_image(rng, 16, 16, 3, 8);
    const auto raw = (dir / "iaqsmpa_raw_test.f32").string();
    save_raw_f32(raw, img);
    const auto back = load_raw_f32(raw, 16, 16, 3, 8);
    for (std::size_t i = 0; i < img.values.size(); ++i)
        CHECK(back.values[i] == Catch::Approx(img.values[i]).epsilon(1e-7));
    CHECK_THROWS(load_raw_f32(raw, 16, 16, 1, 8));

    const auto png = (dir / "iaqsmpa_png_test.png").string();
    save_png(png, img, img.u_min, img.u_max);
    const auto p = load_png(png, 8);
    CHECK(p.channels == 3);
    CHECK(p.height == 16);

    const auto q = quantize(img, std::vector<int>(4, 5));
    const auto payload = (dir / "iaqsmpa_payload_test.bin").string();
    write_payload(payload, q, pack_codes(q));
    auto read = read_payload(payload);
    unpack_codes(read.packed, read.header);
    CHECK(read.header.codes == q.codes);
    CHECK(read.header.u_min == q.u_min);
    for (const auto &f : {raw, png, payload})
        std::filesystem::remove(f);
}
