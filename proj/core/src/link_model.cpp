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
#include "iaqsmpa/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace iaqsmpa
{

void LinkConfig::validate() const
{
    if (n_tx < 1 || n_rx < 1 || n_s < 1 || f < 1 || t_coh < 1 || g < 1)
        throw std::invalid_argument("LinkConfig: all counts must be >= 1.");
    if (n_s > std::min(n_tx, n_rx))
        throw std::invalid_argument("LinkConfig: n_s must not exceed min(n_tx, n_rx).");
    if (subchannels() % g != 0)
        throw std::invalid_argument("LinkConfig: g must divide n_s * f (got n_s*f=" + std::to_string(subchannels()) +
                                    ", g=" + std::to_string(g) + ").");
    if (!(df0 > 0.0) || !(sigma2 > 0.0) || !(p_tot > 0.0) || !(sigma_h2 > 0.0))
        throw std::invalid_argument("LinkConfig: df0, sigma2, sigma_h2 and p_tot must be positive.");
}

void ChannelRealization::validate() const
{
    if (f < 1 || n_s < 1 || gains.size() != static_cast<std::size_t>(f) * n_s)
        throw std::invalid_argument("ChannelRealization: gains must hold f * n_s values.");
    for (int sc = 0; sc < f; ++sc)
    {
        auto r = row(sc);
        for (std::size_t k = 0; k < r.size(); ++k)
        {
            if (!std::isfinite(r[k]) || r[k] < 0.0)
                throw std::invalid_argument("ChannelRealization: gains must be finite and non-negative.");
            if (k > 0 && r[k] > r[k - 1])
                throw std::invalid_argument("ChannelRealization: gains must be non-increasing per subcarrier.");
        }
    }
}

std::vector<double> svd_gains(const ComplexMatrix &h, int n_s)
{
    const auto rank_limit = std::min(h.rows(), h.cols());
    if (n_s < 1 || n_s > rank_limit)
        throw std::invalid_argument("svd_gains: n_s must lie in [1, min(rows, cols)].");

    // Jacobi SVD is backward stable; singular values come back sorted non-increasing.
    Eigen::JacobiSVD<ComplexMatrix> svd(h);
    const auto &sv = svd.singularValues();
    return {sv.data(), sv.data() + n_s};
}

ChannelRealization generate_channel(const LinkConfig &config, std::uint64_t seed)
{
    config.validate();
    Rng rng = Rng(seed).split(streams::channel);

    // Real and imaginary parts each carry half of the entry variance.
    const double scale = std::sqrt(config.sigma_h2 / 2.0);

    ChannelRealization out;
    out.f = config.f;
    out.n_s = config.n_s;
    out.seed = seed;
    out.gains.reserve(static_cast<std::size_t>(config.f) * config.n_s);

    ComplexMatrix h(config.n_rx, config.n_tx);
    for (int sc = 0; sc < config.f; ++sc)
    {
        // Column-major fill order is part of the reproducibility contract.
        for (int c = 0; c < config.n_tx; ++c)
            for (int r = 0; r < config.n_rx; ++r)
            {
                const double re = rng.normal() * scale;
                const double im = rng.normal() * scale;
                h(r, c) = {re, im};
            }
        const auto sv = svd_gains(h, config.n_s);
        out.gains.insert(out.gains.end(), sv.begin(), sv.end());
    }
    return out;
}

ChannelRealization channel_from_matrices(std::span<const ComplexMatrix> matrices, int n_s, std::uint64_t seed)
{
    if (matrices.empty())
        throw std::invalid_argument("channel_from_matrices: at least one matrix is required.");
    ChannelRealization out;
    out.f = static_cast<int>(matrices.size());
    out.n_s = n_s;
    out.seed = seed;
    for (const auto &h : matrices)
    {
        const auto sv = svd_gains(h, n_s);
        out.gains.insert(out.gains.end(), sv.begin(), sv.end());
    }
    return out;
}

void write_channel_csv(std::ostream &out, const ChannelRealization &channel)
{
    out << "# seed=" << channel.seed << " f=" << channel.f << " n_s=" << channel.n_s << '\n';
    out << std::setprecision(17);
    for (int sc = 0; sc < channel.f; ++sc)
    {
        auto r = channel.row(sc);
        for (std::size_t k = 0; k < r.size(); ++k)
            out << (k ? "," : "") << r[k];
        out << '\n';
    }
}

void write_channel_csv(const std::string &path, const ChannelRealization &channel)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("Cannot open channel file for writing: " + path);
    write_channel_csv(out, channel);
}

ChannelRealization read_channel_csv(std::istream &in)
{
    ChannelRealization out;
    std::string line;
    int declared_f = -1;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        if (line[0] == '#')
        {
            std::istringstream header(line.substr(1));
            std::string token;
            while (header >> token)
            {
                const auto eq = token.find('=');
                if (eq == std::string::npos)
                    continue;
                const auto key = token.substr(0, eq);
                const auto value = token.substr(eq + 1);
                if (key == "seed")
                    out.seed = std::stoull(value);
                else if (key == "f")
                    declared_f = std::stoi(value);
                else if (key == "n_s")
                    out.n_s = std::stoi(value);
            }
            continue;
        }
        std::istringstream row(line);
        std::string cell;
        int count = 0;
        while (std::getline(row, cell, ','))
        {
            out.gains.push_back(std::stod(cell));
            ++count;
        }
        if (out.n_s == 0)
            out.n_s = count;
        else if (count != out.n_s)
            throw std::runtime_error("Channel CSV: inconsistent number of streams per row.");
        ++out.f;
    }
    if (declared_f >= 0 && declared_f != out.f)
        throw std::runtime_error("Channel CSV: header declares f=" + std::to_string(declared_f) + " but file has " +
                                 std::to_string(out.f) + " rows.");
    out.validate();
    return out;
}

ChannelRealization read_channel_csv(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("Cannot open channel file: " + path);
    return read_channel_csv(in);
}

} // namespace iaqsmpa
