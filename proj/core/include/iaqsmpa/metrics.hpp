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

#ifndef IAQSMPA_METRICS_HPP
#define IAQSMPA_METRICS_HPP

#include "iaqsmpa/allocator_fbl.hpp"
#include "iaqsmpa/link_model.hpp"
#include "iaqsmpa/subcarrier_mapping.hpp"

#include <span>
#include <vector>

namespace iaqsmpa
{

// Latencies are indexed by patch (the block carrying patch i).
struct LatencyReport
{
    std::vector<double> per_block_latency; // seconds, +inf for a zero-rate block with bits to send
    std::vector<double> per_block_rate;    // bit/s
    std::vector<double> ofdm_symbols;      // latency * df0, i.e. OFDM symbol durations needed
    double worst_case = 0.0;               // T_d
    int worst_block = -1;
    bool coherence_ok = true; // every block finishes in fewer than t_coh OFDM symbols
    bool feasible = true;     // false when some block has zero rate
};

// max_i D B[i] / (df log2(1 + P[i] lambda^2[i] / sigma2)); +inf for a zero-rate block.
double latency_bound(std::span<const int> bits, std::span<const double> powers, std::span<const double> gains, int d,
                     double df, double sigma2);
double latency_bound(std::span<const double> bits, std::span<const double> powers, std::span<const double> gains,
                     int d, double df, double sigma2);

// Inference-time latency using each member subchannel's own gain and the block's power.
// `t_coh` <= 0 disables the coherence check.
LatencyReport inference_latency(const SubcarrierMapping &mapping, std::span<const int> bits,
                                std::span<const double> powers, const ChannelRealization &channel, int d, double df0,
                                double sigma2, int t_coh = 0);

// Same, with an individual power per subchannel (row-major F x N_s, as in ChannelRealization).
LatencyReport inference_latency_per_subchannel(const SubcarrierMapping &mapping, std::span<const int> bits,
                                               std::span<const double> subchannel_powers,
                                               const ChannelRealization &channel, int d, double df0, double sigma2,
                                               int t_coh = 0);

// Finite-blocklength inference latency: each member subchannel contributes max(C - Gamma, 0), with
// Gamma built from the alpha of the patch's block.
LatencyReport fbl_inference_latency(const SubcarrierMapping &mapping, std::span<const int> bits,
                                    std::span<const double> powers, const ChannelRealization &channel,
                                    const FblParams &fbl, int d, double df0, double sigma2, int t_coh = 0);
LatencyReport fbl_inference_latency_per_subchannel(const SubcarrierMapping &mapping, std::span<const int> bits,
                                                   std::span<const double> subchannel_powers,
                                                   const ChannelRealization &channel, const FblParams &fbl, int d,
                                                   double df0, double sigma2, int t_coh = 0);

// df (log2(1 + gamma) - Q^-1(bler) / (ln2 sqrt(l_c)) sqrt(U(gamma))); not clamped.
double fbl_rate(double gamma, double df, double bler, double l_c);

// Per-subchannel penalty df0 * 2 (1 - alpha) / ln2 * sqrt(U(gamma)).
double subchannel_penalty(double gamma, double alpha, double df0);

// gamma_corr (1 - (1 - bler)^{1 / l_c}), clamped to [0, 1].
double ber_from_bler(double bler, double l_c, double gamma_corr);

// Normal-approximation block error rate of a code of length l_c at `rate` bits per channel use:
// Q(sqrt(l_c) ln2 (log2(1 + gamma) - rate) / sqrt(U(gamma))).
double normal_approx_bler(double gamma, double rate, double l_c);

} // namespace iaqsmpa

#endif
