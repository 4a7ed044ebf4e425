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

#include <nlohmann/json.hpp>
#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace iaqsmpa
{

PatchImage load_png(const std::string &path, int patch)
{
    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&img, path.c_str()))
        throw std::runtime_error("load_png: cannot read '" + path + "': " + img.message);

    const bool gray = (img.format & PNG_FORMAT_FLAG_COLOR) == 0;
    img.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    const int channels = gray ? 1 : 3;
    std::vector<png_byte> buf(PNG_IMAGE_SIZE(img));
    if (!png_image_finish_read(&img, nullptr, buf.data(), 0, nullptr))
    {
        const std::string msg = img.message;
        png_image_free(&img);
        throw std::runtime_error("load_png: decoding '" + path + "' failed: " + msg);
    }

    std::vector<double> values(buf.size());
    std::transform(buf.begin(), buf.end(), values.begin(), [](png_byte v) { return v / 255.0; });
    return make_patch_image(static_cast<int>(img.height), static_cast<int>(img.width), channels, patch,
                            std::move(values));
}

void save_png(const std::string &path, const PatchImage &image, double lo, double hi)
{
    if (image.channels != 1 && image.channels != 3)
        throw std::invalid_argument("save_png: only 1 or 3 channels are supported.");
    if (!(hi > lo))
        throw std::invalid_argument("save_png: empty display range.");
    std::vector<png_byte> buf(image.values.size());
    for (std::size_t k = 0; k < buf.size(); ++k)
        buf[k] = static_cast<png_byte>(std::lround(std::clamp((image.values[k] - lo) / (hi - lo), 0.0, 1.0) * 255.0));

    png_image img;
    std::memset(&img, 0, sizeof(img));
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(image.width);
    img.height = static_cast<png_uint_32>(image.height);
    img.format = image.channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&img, path.c_str(), 0, buf.data(), 0, nullptr))
        throw std::runtime_error("save_png: cannot write '" + path + "': " + img.message);
}

PatchImage load_raw_f32(const std::string &path, int height, int width, int channels, int patch)
{
    if (height < 1 || width < 1 || channels < 1)
        throw std::invalid_argument("load_raw_f32: dimensions must be positive.");
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("load_raw_f32: cannot open '" + path + "'.");
    const std::size_t n = static_cast<std::size_t>(height) * width * channels;
    std::vector<std::uint32_t> raw(n);
    in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(n * 4));
    if (static_cast<std::size_t>(in.gcount()) != n * 4)
        throw std::runtime_error("load_raw_f32: '" + path + "' holds fewer than H*W*C floats.");
    in.peek();
    if (!in.eof())
        throw std::runtime_error("load_raw_f32: '" + path + "' is larger than H*W*C floats.");

    std::vector<double> values(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        std::uint32_t v = raw[k];
        if constexpr (std::endian::native == std::endian::big)
            v = ((v & 0xFFU) << 24) | ((v & 0xFF00U) << 8) | ((v >> 8) & 0xFF00U) | (v >> 24);
        values[k] = std::bit_cast<float>(v);
    }
    return make_patch_image(height, width, channels, patch, std::move(values));
}

void save_raw_f32(const std::string &path, const PatchImage &image)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("save_raw_f32: cannot open '" + path + "'.");
    for (double v : image.values)
    {
        std::uint32_t u = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        if constexpr (std::endian::native == std::endian::big)
            u = ((u & 0xFFU) << 24) | ((u & 0xFF00U) << 8) | ((u >> 8) & 0xFF00U) | (u >> 24);
        out.write(reinterpret_cast<const char *>(&u), 4);
    }
}

void write_payload(const std::string &path, const QuantizedImage &q, const BitString &packed)
{
    if (packed.size() != q.total_bits())
        throw std::invalid_argument("write_payload: payload length does not match the bit table.");
    const nlohmann::json header = {{"format", "iaqsmpa-payload-1"},
                                   {"height", q.height},
                                   {"width", q.width},
                                   {"channels", q.channels},
                                   {"patch", q.patch},
                                   {"u_min", q.u_min},
                                   {"u_max", q.u_max},
                                   {"bits", q.bits},
                                   {"payload_bits", packed.size()}};
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("write_payload: cannot open '" + path + "'.");
    out << header.dump() << '\n';
    out.write(reinterpret_cast<const char *>(packed.bytes().data()),
              static_cast<std::streamsize>(packed.bytes().size()));
}

Payload read_payload(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("read_payload: cannot open '" + path + "'.");
    std::string line;
    std::getline(in, line);
    const auto header = nlohmann::json::parse(line);
    if (header.value("format", "") != "iaqsmpa-payload-1")
        throw std::runtime_error("read_payload: '" + path + "' is not a payload file.");

    Payload p;
    auto &q = p.header;
    q.height = header.at("height").get<int>();
    q.width = header.at("width").get<int>();
    q.channels = header.at("channels").get<int>();
    q.patch = header.at("patch").get<int>();
    q.u_min = header.at("u_min").get<double>();
    q.u_max = header.at("u_max").get<double>();
    q.bits = header.at("bits").get<std::vector<int>>();
    const auto n_bits = header.at("payload_bits").get<std::size_t>();
    if (n_bits != q.total_bits())
        throw std::runtime_error("read_payload: header bit count disagrees with the bit table.");

    std::vector<std::uint8_t> bytes((n_bits + 7) / 8);
    in.read(reinterpret_cast<char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size())
        throw std::runtime_error("read_payload: truncated payload in '" + path + "'.");
    p.packed = BitString(std::move(bytes), n_bits);
    return p;
}

} // namespace iaqsmpa
