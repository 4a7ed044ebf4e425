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

#include "iaqsmpa/experiment.hpp"
#include "iaqsmpa/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace iaqsmpa
{

namespace
{
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool ok, const std::string &msg)
{
    if (!ok)
        throw std::invalid_argument("ExperimentConfig: " + msg);
}

bool uses_fbl_latency(Scenario s) { return s == Scenario::Fbl; }

} // namespace

void ExperimentConfig::validate() const
{
    require(height >= 1 && width >= 1 && channels >= 1 && patch >= 1, "image dimensions must be positive.");
    require(height % patch == 0 && width % patch == 0, "patch size must divide height and width.");
    require(profile.g == g(), "importance profile has " + std::to_string(profile.g) + " patches, geometry needs " +
                                  std::to_string(g()) + ".");
    profile.validate();
    require(n_trials >= 0, "n_trials must be non-negative.");
    require(!methods.empty() && !policies.empty() && !n_s.empty() && !rho.empty() && !tx_snr_db.empty() &&
                !bler.empty(),
            "methods, policies, n_s, rho, tx_snr_db and bler must each list at least one value.");
    require(b_min >= 1 && b_min <= b_max && b_max <= kMaxBitDepth, "need 1 <= b_min <= b_max <= 24.");
    require(k_iters >= 1, "k_iters must be >= 1.");
    require(delta > 0.0 && d_c > 0.0 && d_c < 1.0, "need delta > 0 and 0 < d_c < 1.");
    if (weight_override)
        require(*weight_override > 0.0 && *weight_override <= 1.0, "weight_override must lie in (0, 1].");
    require(gamma_corr >= 0.0, "gamma_corr must be non-negative.");
    require(link.p_tot > 0.0 && link.df0 > 0.0 && link.sigma_h2 > 0.0 && link.f >= 1 && link.t_coh >= 1,
            "link parameters must be positive.");
    for (int n : n_s)
        require(n >= 1, "n_s entries must be positive.");
    for (double r : rho)
        (void)b_target(r);
    for (double mu : bler)
        require(mu > 0.0 && mu < 1.0, "BLER entries must lie in (0, 1).");
    for (double s : tx_snr_db)
        require(std::isfinite(s), "Tx SNR entries must be finite.");
    if (image)
    {
        image->validate();
        require(image->height == height && image->width == width && image->channels == channels &&
                    image->patch == patch,
                "image geometry disagrees with the configured geometry.");
    }
}

long long ExperimentConfig::b_target(double rho_value) const
{
    const double raw = rho_value * 8.0 * height * width * channels;
    const double rounded = std::round(raw);
    require(rho_value > 0.0 && std::abs(raw - rounded) < 1e-6 * std::max(1.0, raw),
            "rho=" + std::to_string(rho_value) + " does not give an integer bit budget.");
    const auto target = static_cast<long long>(rounded);
    require(target % d() == 0, "rho=" + std::to_string(rho_value) + " gives " + std::to_string(target) +
                                   " bits, not a multiple of D=" + std::to_string(d()) + ".");
    const long long lo = static_cast<long long>(b_min) * g() * d();
    const long long hi = static_cast<long long>(b_max) * g() * d();
    require(target >= lo && target <= hi, "rho=" + std::to_string(rho_value) + " gives a budget outside [" +
                                              std::to_string(lo) + ", " + std::to_string(hi) + "].");
    return target;
}

LinkConfig ExperimentConfig::link_for(int n_s_value, double snr_db) const
{
    LinkConfig l = link;
    l.n_s = n_s_value;
    l.n_tx = std::max(link.n_tx, n_s_value);
    l.n_rx = std::max(link.n_rx, n_s_value);
    l.g = g();
    const double reference = snr_reference == SnrReference::Total ? l.p_tot : l.p_tot / l.subchannels();
    l.sigma2 = reference / std::pow(10.0, snr_db / 10.0);
    l.validate();
    return l;
}

BerModel ExperimentConfig::effective_ber_model() const
{
    if (ber_model != BerModel::Auto)
        return ber_model;
    return scenario == Scenario::Fbl ? BerModel::Target : BerModel::None;
}

Allocation allocate(const ExperimentConfig &config, const OperatingPoint &point, const ChannelRealization &channel)
{
    Allocation a;
    a.link = config.link_for(point.n_s, point.snr_db);
    if (channel.f != a.link.f || channel.n_s != a.link.n_s)
        throw std::invalid_argument("allocate: channel is " + std::to_string(channel.f) + "x" +
                                    std::to_string(channel.n_s) + ", operating point needs " +
                                    std::to_string(a.link.f) + "x" + std::to_string(a.link.n_s) + ".");
    const std::uint64_t seed = point.seed(config);
    a.mapping = make_mapping(channel, config.profile, point.policy, seed);

    const int g = config.g();
    auto &pb = a.problem;
    pb.gains = a.mapping.patch_gains();
    pb.weights = config.weight_override ? constant_weights(g, *config.weight_override).weights
                                        : compute_weights(config.profile, config.delta, config.d_c).weights;
    pb.scores = config.profile.scores;
    pb.d = config.d();
    pb.b_target = config.b_target(point.rho);
    pb.b_min = config.b_min;
    pb.b_max = config.b_max;
    pb.df = a.link.block_bandwidth();
    pb.block_size = a.link.block_size();
    pb.sigma2 = a.link.sigma2;
    pb.power_budget = a.link.block_power_budget();
    pb.u_min = config.u_min();
    pb.u_max = config.u_max();
    if (!(pb.u_max > pb.u_min))
        pb.u_max = pb.u_min + 1.0; // constant image: any positive range keeps the solver well posed
    pb.k_iters = config.k_iters;
    pb.solver = config.solver;
    pb.validate();
    a.fbl = FblParams::uniform(point.bler, a.link.symbol_length(), g);

    const long long total = pb.bits_total();
    auto fixed_power = [&](std::vector<int> bits) {
        AllocationResult r;
        r.bits_int = std::move(bits);
        r.bits_cont.assign(r.bits_int.begin(), r.bits_int.end());
        r.powers.assign(static_cast<std::size_t>(g), pb.power_budget / g);
        r.powers_cont = r.powers;
        r.y = r.y_cont = latency_bound(std::span<const int>(r.bits_int), r.powers, pb.gains, pb.d, pb.df, pb.sigma2);
        r.e_q = weighted_error_bound(std::span<const int>(r.bits_int), pb.weights, pb.d, pb.u_min, pb.u_max);
        r.objective = r.y + r.e_q;
        return r;
    };

    switch (point.method)
    {
    case Method::IaQsmpa:
        a.result = bcd_solve(pb);
        break;
    case Method::IaQsmpaLc:
        a.result = solve_fixed_bits(pb, topbeta_bits_for_budget(pb.scores, total, pb.b_min, pb.b_max));
        break;
    case Method::ModIaQsmpa:
        a.result = bcd_solve_fbl(pb, a.fbl, config.normalizer_scope);
        break;
    case Method::ModIaQsmpaLc:
        a.result = solve_fixed_bits_fbl(pb, a.fbl, topbeta_bits_for_budget(pb.scores, total, pb.b_min, pb.b_max));
        break;
    case Method::FixedBp:
        a.result = fixed_power(uniform_bits(pb.scores, total, pb.b_min, pb.b_max));
        break;
    case Method::FixedBWf: {
        a.result = fixed_power(uniform_bits(pb.scores, total, pb.b_min, pb.b_max));
        const WaterFillingResult wf = classical_water_filling(channel, a.link.p_tot, a.link.sigma2);
        a.subchannel_powers = wf.powers;
        // Block-level view: mean power over each block's members.
        for (int p = 0; p < g; ++p)
        {
            double sum = 0.0;
            for (const auto &m : a.mapping.blocks.members[a.mapping.patch_to_block[p]])
                sum += wf.powers[static_cast<std::size_t>(m.f) * channel.n_s + m.r];
            a.result.powers[p] = sum / pb.block_size;
        }
        a.result.powers_cont = a.result.powers;
        a.result.y = a.result.y_cont = latency_bound(std::span<const int>(a.result.bits_int), a.result.powers,
                                                     pb.gains, pb.d, pb.df, pb.sigma2);
        a.result.objective = a.result.y + a.result.e_q;
        break;
    }
    case Method::FixedPIaq:
        a.result = fixed_power(iaq_bits(pb.weights, pb.scores, total, pb.b_min, pb.b_max, pb.u_min, pb.u_max));
        break;
    case Method::FixedPTopbeta:
        a.result = fixed_power(topbeta_bits_for_budget(pb.scores, total, pb.b_min, pb.b_max));
        break;
    }
    return a;
}

std::vector<double> injection_ber(const ExperimentConfig &config, const Allocation &alloc)
{
    const int g = alloc.problem.g();
    std::vector<double> ber(static_cast<std::size_t>(g), 0.0);
    const double l_c = alloc.link.symbol_length();
    switch (config.effective_ber_model())
    {
    case BerModel::Auto:
    case BerModel::None:
        break;
    case BerModel::Target:
        for (int i = 0; i < g; ++i)
            ber[i] = ber_from_bler(alloc.fbl.bler[i], l_c, config.gamma_corr);
        break;
    case BerModel::Channel: {
        const auto &pb = alloc.problem;
        const auto &r = alloc.result;
        const double y = latency_bound(std::span<const int>(r.bits_int), r.powers, pb.gains, pb.d, pb.df, pb.sigma2);
        for (int i = 0; i < g; ++i)
        {
            const double gamma = r.powers[i] * pb.gains[i] * pb.gains[i] / pb.sigma2;
            const double rate = std::isfinite(y) ? pb.d * r.bits_int[i] / (y * pb.df) : kInf;
            double mu = std::isfinite(rate) ? normal_approx_bler(gamma, rate, l_c) : 1.0;
            mu = std::min(mu, 1.0 - 1e-12);
            ber[i] = ber_from_bler(mu, l_c, config.gamma_corr);
        }
        break;
    }
    }
    return ber;
}

SimulationOutput simulate(const ExperimentConfig &config, const OperatingPoint &point,
                          const ChannelRealization &channel)
{
    const auto t0 = std::chrono::steady_clock::now();
    SimulationOutput out;
    ResultRow &row = out.row;
    row.point = point;
    row.scenario = config.scenario;
    row.seed = point.seed(config);
    row.b_target = config.b_target(point.rho);

    try
    {
        const Allocation a = allocate(config, point, channel);
        const auto &r = a.result;
        const auto &pb = a.problem;
        const bool per_subchannel = !a.subchannel_powers.empty();
        LatencyReport rep;
        if (uses_fbl_latency(config.scenario))
            rep = per_subchannel
                      ? fbl_inference_latency_per_subchannel(a.mapping, r.bits_int, a.subchannel_powers, channel,
                                                             a.fbl, pb.d, a.link.df0, a.link.sigma2, a.link.t_coh)
                      : fbl_inference_latency(a.mapping, r.bits_int, r.powers, channel, a.fbl, pb.d, a.link.df0,
                                              a.link.sigma2, a.link.t_coh);
        else
            rep = per_subchannel ? inference_latency_per_subchannel(a.mapping, r.bits_int, a.subchannel_powers,
                                                                    channel, pb.d, a.link.df0, a.link.sigma2,
                                                                    a.link.t_coh)
                                 : inference_latency(a.mapping, r.bits_int, r.powers, channel, pb.d, a.link.df0,
                                                     a.link.sigma2, a.link.t_coh);
        row.t_d = rep.worst_case;
        row.feasible = rep.feasible;
        row.coherence_ok = rep.coherence_ok;
        if (!rep.feasible)
            row.message = "zero-rate block at inference";
        row.design_latency = r.y;
        row.e_q = r.e_q;
        row.objective = r.objective;
        row.cap_relaxations = r.cap_relaxations;
        row.non_monotone_steps = r.non_monotone_steps;
        row.bit_sum = static_cast<long long>(pb.d) * std::accumulate(r.bits_int.begin(), r.bits_int.end(), 0LL);
        if (per_subchannel)
            row.power_sum = std::accumulate(a.subchannel_powers.begin(), a.subchannel_powers.end(), 0.0);
        else
            row.power_sum = pb.block_size * std::accumulate(r.powers.begin(), r.powers.end(), 0.0);

        const auto ber = injection_ber(config, a);
        row.mean_ber = std::accumulate(ber.begin(), ber.end(), 0.0) / static_cast<double>(ber.size());
        if (config.image)
        {
            QuantizedImage q = quantize(*config.image, r.bits_int);
            const BitString sent = pack_codes(q);
            const auto offsets = patch_bit_offsets(q.bits, q.d());
            const BitString received = inject_bit_errors(sent, ber, offsets, row.seed);
            unpack_codes(received, q);
            PatchImage rec = dequantize(q);
            row.distortion = weighted_distortion(*config.image, rec, pb.weights);
            row.psnr = psnr(*config.image, rec);
            out.reconstructed = std::move(rec);
        }
    }
    catch (const InfeasibleError &e)
    {
        row.feasible = false;
        row.t_d = row.design_latency = row.objective = kInf;
        row.e_q = kNaN;
        row.message = e.what();
    }
    if (config.record_wall_time)
        row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

ResultRow run_point(const ExperimentConfig &config, const OperatingPoint &point, const ChannelRealization &channel)
{
    return simulate(config, point, channel).row;
}

namespace
{

ChannelRealization trial_channel(const ExperimentConfig &config, int n_s, int trial)
{
    if (config.channel)
        return *config.channel;
    return generate_channel(config.link_for(n_s, 0.0), config.seed_base + static_cast<std::uint64_t>(trial));
}

} // namespace

ResultRow run_method(const ExperimentConfig &config, const OperatingPoint &point)
{
    return run_point(config, point, trial_channel(config, point.n_s, point.trial));
}

std::vector<OperatingPoint> sweep_points(const ExperimentConfig &config)
{
    std::vector<OperatingPoint> out;
    for (int n_s : config.n_s)
        for (double snr : config.tx_snr_db)
            for (double rho : config.rho)
                for (double mu : config.bler)
                    for (MappingPolicy policy : config.policies)
                        for (Method method : config.methods)
                            for (int trial = 0; trial < config.n_trials; ++trial)
                                out.push_back({method, policy, n_s, snr, rho, mu, trial});
    return out;
}

std::vector<ResultRow> sweep(const ExperimentConfig &config, const std::function<void(const ResultRow &)> &sink)
{
    config.validate();
    std::map<std::pair<int, int>, ChannelRealization> channels;
    std::vector<ResultRow> rows;
    for (const auto &point : sweep_points(config))
    {
        auto key = std::make_pair(point.n_s, point.trial);
        auto it = channels.find(key);
        if (it == channels.end())
            it = channels.emplace(key, trial_channel(config, point.n_s, point.trial)).first;
        rows.push_back(run_point(config, point, it->second));
        if (sink)
            sink(rows.back());
    }
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows)
{
    using Key = std::tuple<int, int, int, double, double, double, int>;
    std::map<Key, std::size_t> index;
    std::vector<SummaryRow> out;
    std::vector<std::vector<const ResultRow *>> groups;
    for (const auto &r : rows)
    {
        const Key key{static_cast<int>(r.point.method), static_cast<int>(r.point.policy), r.point.n_s, r.point.snr_db,
                      r.point.rho, r.point.bler, static_cast<int>(r.scenario)};
        auto [it, fresh] = index.emplace(key, out.size());
        if (fresh)
        {
            SummaryRow s;
            s.point = r.point;
            s.point.trial = 0;
            s.scenario = r.scenario;
            out.push_back(s);
            groups.emplace_back();
        }
        groups[it->second].push_back(&r);
    }

    auto mean_se = [](const std::vector<double> &v) {
        if (v.empty())
            return std::make_pair(kNaN, kNaN);
        const double n = static_cast<double>(v.size());
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
        if (!std::isfinite(mean) || v.size() < 2)
            return std::make_pair(mean, v.size() < 2 ? 0.0 : kNaN);
        double ss = 0.0;
        for (double x : v)
            ss += (x - mean) * (x - mean);
        return std::make_pair(mean, std::sqrt(ss / (n - 1.0) / n));
    };

    for (std::size_t k = 0; k < out.size(); ++k)
    {
        auto &s = out[k];
        std::vector<double> td, design, eq, dist, ps;
        for (const ResultRow *r : groups[k])
        {
            ++s.n;
            if (r->feasible)
                ++s.n_feasible;
            td.push_back(r->t_d);
            design.push_back(r->design_latency);
            if (!std::isnan(r->e_q))
                eq.push_back(r->e_q);
            if (!std::isnan(r->distortion))
                dist.push_back(r->distortion);
            if (!std::isnan(r->psnr))
                ps.push_back(r->psnr);
        }
        std::tie(s.mean_t_d, s.se_t_d) = mean_se(td);
        s.mean_design_latency = mean_se(design).first;
        s.mean_e_q = mean_se(eq).first;
        std::tie(s.mean_distortion, s.se_distortion) = mean_se(dist);
        s.mean_psnr = mean_se(ps).first;
    }
    return out;
}

} // namespace iaqsmpa
