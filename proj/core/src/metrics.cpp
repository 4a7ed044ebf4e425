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

#include "iaqsmpa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace iaqsmpa
{

namespace
{
constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename T>
double bound_impl(std::span<const T> bits, std::span<const double> powers, std::span<const double> gains, int d,
                  double df, double sigma2)
{
    if (bits.size() != powers.size() || bits.size() != gains.size())
        throw std::invalid_argument("latency_bound: bits, powers and gains differ in length.");
    double worst = 0.0;
    for (std::size_t i = 0; i < bits.size(); ++i)
    {
        if (powers[i] < 0.0)
            throw std::invalid_argument("latency_bound: negative power.");
        if (bits[i] <= 0)
            continue;
        const double rate = df * std::log2(1.0 + powers[i] * gains[i] * gains[i] / sigma2);
        worst = std::max(worst, rate > 0.0 ? d * static_cast<double>(bits[i]) / rate : kInf);
    }
    return worst;
}

void check_dims(const SubcarrierMapping &mapping, std::span<const int> bits, std::size_t n_powers,
                std::size_t expected_powers, const ChannelRealization &channel)
{
    channel.validate();
    if (static_cast<int>(bits.size()) != mapping.g() || n_powers != expected_powers)
        throw std::invalid_argument("inference latency: bits/powers do not match the mapping.");
    if (mapping.g() * mapping.blocks.block_size() != channel.f * channel.n_s)
        throw std::invalid_argument("inference latency: mapping does not match the channel.");
}

// rate_of(block, member) returns the member's contribution in bit/s.
template <typename RateFn>
LatencyReport assemble(const SubcarrierMapping &mapping, std::span<const int> bits, int d, double df0, int t_coh,
                       RateFn rate_of)
{
    const int g = mapping.g();
    LatencyReport rep;
    rep.per_block_latency.resize(g);
    rep.per_block_rate.resize(g);
    rep.ofdm_symbols.resize(g);
    for (int p = 0; p < g; ++p)
    {
        const int block = mapping.patch_to_block[p];
        double rate = 0.0;
        for (const auto &m : mapping.blocks.members[block])
            rate += rate_of(p, m);
        rep.per_block_rate[p] = rate;
        double lat = 0.0;
        if (bits[p] > 0)
            lat = rate > 0.0 ? d * static_cast<double>(bits[p]) / rate : kInf;
        rep.per_block_latency[p] = lat;
        rep.ofdm_symbols[p] = lat * df0;
        if (!std::isfinite(lat))
            rep.feasible = false;
        if (t_coh > 0 && !(rep.ofdm_symbols[p] < t_coh))
            rep.coherence_ok = false;
        if (rep.worst_block < 0 || lat > rep.worst_case)
        {
            rep.worst_case = lat;
            rep.worst_block = p;
        }
    }
    return rep;
}

} // namespace

double latency_bound(std::span<const int> bits, std::span<const double> powers, std::span<const double> gains, int d,
                     double df, double sigma2)
{
    return bound_impl(bits, powers, gains, d, df, sigma2);
}

double latency_bound(std::span<const double> bits, std::span<const double> powers, std::span<const double> gains,
                     int d, double df, double sigma2)
{
    return bound_impl(bits, powers, gains, d, df, sigma2);
}

LatencyReport inference_latency(const SubcarrierMapping &mapping, std::span<const int> bits,
                                std::span<const double> powers, const ChannelRealization &channel, int d, double df0,
                                double sigma2, int t_coh)
{
    check_dims(mapping, bits, powers.size(), bits.size(), channel);
    return assemble(mapping, bits, d, df0, t_coh, [&](int p, const Subchannel &m) {
        const double l = channel.gain(m.f, m.r);
        return df0 * std::log2(1.0 + powers[p] * l * l / sigma2);
    });
}

LatencyReport inference_latency_per_subchannel(const SubcarrierMapping &mapping, std::span<const int> bits,
                                               std::span<const double> subchannel_powers,
                                               const ChannelRealization &channel, int d, double df0, double sigma2,
                                               int t_coh)
{
    check_dims(mapping, bits, subchannel_powers.size(), channel.gains.size(), channel);
    return assemble(mapping, bits, d, df0, t_coh, [&](int, const Subchannel &m) {
        const double l = channel.gain(m.f, m.r);
        const double pw = subchannel_powers[static_cast<std::size_t>(m.f) * channel.n_s + m.r];
        return df0 * std::log2(1.0 + pw * l * l / sigma2);
    });
}

LatencyReport fbl_inference_latency(const SubcarrierMapping &mapping, std::span<const int> bits,
                                    std::span<const double> powers, const ChannelRealization &channel,
                                    const FblParams &fbl, int d, double df0, double sigma2, int t_coh)
{
    check_dims(mapping, bits, powers.size(), bits.size(), channel);
    fbl.validate(mapping.g());
    return assemble(mapping, bits, d, df0, t_coh, [&](int p, const Subchannel &m) {
        const double l = channel.gain(m.f, m.r);
        const double gamma = powers[p] * l * l / sigma2;
        const double c = df0 * std::log2(1.0 + gamma);
        return std::max(c - subchannel_penalty(gamma, fbl.alpha[p], df0), 0.0);
    });
}

LatencyReport fbl_inference_latency_per_subchannel(const SubcarrierMapping &mapping, std::span<const int> bits,
                                                   std::span<const double> subchannel_powers,
                                                   const ChannelRealization &channel, const FblParams &fbl, int d,
                                                   double df0, double sigma2, int t_coh)
{
    check_dims(mapping, bits, subchannel_powers.size(), channel.gains.size(), channel);
    fbl.validate(mapping.g());
    return assemble(mapping, bits, d, df0, t_coh, [&](int p, const Subchannel &m) {
        const double l = channel.gain(m.f, m.r);
        const double gamma = subchannel_powers[static_cast<std::size_t>(m.f) * channel.n_s + m.r] * l * l / sigma2;
        const double c = df0 * std::log2(1.0 + gamma);
        return std::max(c - subchannel_penalty(gamma, fbl.alpha[p], df0), 0.0);
    });
}

double fbl_rate(double gamma, double df, double bler, double l_c)
{
    if (gamma < 0.0 || !(l_c >= 1.0))
        throw std::invalid_argument("fbl_rate: need gamma >= 0 and l_c >= 1.");
    const double coeff = q_inverse(bler) / (std::numbers::ln2 * std::sqrt(l_c));
    return df * fbl_spectral_efficiency(gamma, coeff);
}

double subchannel_penalty(double gamma, double alpha, double df0)
{
    return df0 * dispersion_penalty(gamma, 2.0 * (1.0 - alpha) / std::numbers::ln2);
}

double ber_from_bler(double bler, double l_c, double gamma_corr)
{
    if (!(bler >= 0.0 && bler < 1.0) || !(l_c >= 1.0) || gamma_corr < 0.0)
        throw std::invalid_argument("ber_from_bler: need 0 <= bler < 1, l_c >= 1, gamma_corr >= 0.");
    // 1 - (1 - bler)^{1/l_c} without cancellation for tiny bler.
    const double per_symbol = -std::expm1(std::log1p(-bler) / l_c);
    return std::clamp(gamma_corr * per_symbol, 0.0, 1.0);
}

double normal_approx_bler(double gamma, double rate, double l_c)
{
    if (gamma < 0.0 || !(l_c >= 1.0))
        throw std::invalid_argument("normal_approx_bler: need gamma >= 0 and l_c >= 1.");
    const double u = dispersion_exact(gamma);
    const double gap = std::log2(1.0 + gamma) - rate;
    if (u == 0.0)
        return gap >= 0.0 ? (gap > 0.0 ? 0.0 : 0.5) : 1.0;
    return q_function(std::sqrt(l_c) * std::numbers::ln2 * gap / u);
}

} // namespace iaqsmpa
