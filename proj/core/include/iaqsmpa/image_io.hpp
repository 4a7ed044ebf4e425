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

#ifndef IAQSMPA_IMAGE_IO_HPP
#define IAQSMPA_IMAGE_IO_HPP

#include "iaqsmpa/quantizer.hpp"

#include <string>

namespace iaqsmpa
{

// 8-bit PNG to values in [0, 1]. Gray stays one channel, alpha is dropped, everything else becomes RGB.
PatchImage load_png(const std::string &path, int patch = 16);

// Writes the values mapped linearly from [lo, hi] to 0..255 (clamped). Supports 1 or 3 channels.
void save_png(const std::string &path, const PatchImage &image, double lo, double hi);

// Raw tensor: height * width * channels float32 values, little endian, row-major with channels innermost.
PatchImage load_raw_f32(const std::string &path, int height, int width, int channels, int patch = 16);
void save_raw_f32(const std::string &path, const PatchImage &image);

// Payload file: one line of JSON header {"format", "height", "width", "channels", "patch", "u_min", "u_max",
// "bits": [...], "payload_bits": n}, then the packed bit string as raw bytes.
void write_payload(const std::string &path, const QuantizedImage &q, const BitString &packed);

struct Payload
{
    QuantizedImage header; // codes left empty
    BitString packed;
};
Payload read_payload(const std::string &path);

} // namespace iaqsmpa

#endif
