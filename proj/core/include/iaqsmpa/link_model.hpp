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

#ifndef IAQSMPA_LINK_MODEL_HPP
#define IAQSMPA_LINK_MODEL_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace iaqsmpa
{

using ComplexMatrix = Eigen::MatrixXcd;

// MIMO-OFDM link parameters. All power-like quantities are linear, not dB.
struct LinkConfig
{
    int n_tx = 4;
    int n_rx = 4;
    int n_s = 4;            // spatial streams
    int f = 784;            // subcarriers
    int t_coh = 50;         // coherence length in OFDM symbols
    double df0 = 15e3;      // subcarrier spacing [Hz]
    double sigma2 = 1.0;    // noise variance
    double sigma_h2 = 1.0;  // channel entry variance
    double p_tot = 3136.0;  // transmit power per OFDM symbol, summed over all subchannels
    int g = 196;            // blocks (one per image patch)

    // Throws std::invalid_argument naming the first violated invariant.
    void validate() const;

    int subchannels() const { return n_s * f; }
    int block_size() const { return subchannels() / g; }              // N_s F / G
    double block_bandwidth() const { return block_size() * df0; }     // effective bandwidth per block
    double block_power_budget() const { return p_tot / block_size(); } // sum over blocks of P[i]
    double symbol_length() const                                      // N_s F T / G channel uses
    {
        return static_cast<double>(n_s) * f * t_coh / g;
    }
};

// Per-subcarrier singular values lambda_{f,r}, row-major F x N_s, each row non-increasing.
struct ChannelRealization
{
    int f = 0;
    int n_s = 0;
    std::vector<double> gains;
    std::uint64_t seed = 0;

    double gain(int subcarrier, int stream) const { return gains[static_cast<std::size_t>(subcarrier) * n_s + stream]; }
    std::span<const double> row(int subcarrier) const
    {
        return {gains.data() + static_cast<std::size_t>(subcarrier) * n_s, static_cast<std::size_t>(n_s)};
    }
    void validate() const;
};

// Top n_s singular values of h, non-increasing. Throws on n_s > min(rows, cols) or n_s < 1.
std::vector<double> svd_gains(const ComplexMatrix &h, int n_s);

// Draws F i.i.d. CN(0, sigma_h2) matrices (N_rx x N_tx) and keeps the top N_s singular values.
// Deterministic in (config, seed); the channel uses its own RNG stream of the seed.
ChannelRealization generate_channel(const LinkConfig &config, std::uint64_t seed);

// Test hook: decompose caller-provided per-subcarrier matrices.
ChannelRealization channel_from_matrices(std::span<const ComplexMatrix> matrices, int n_s, std::uint64_t seed = 0);

// Replayable dump: first line "# seed=<seed> f=<F> n_s=<N_s>", then one CSV row per subcarrier.
void write_channel_csv(std::ostream &out, const ChannelRealization &channel);
void write_channel_csv(const std::string &path, const ChannelRealization &channel);
ChannelRealization read_channel_csv(std::istream &in);
ChannelRealization read_channel_csv(const std::string &path);

} // namespace iaqsmpa

#endif
