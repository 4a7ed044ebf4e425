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

// Command line front end: allocate, sweep, quantize, dequantize, simulate.

#include "iaqsmpa/baselines.hpp"
#include "iaqsmpa/experiment.hpp"
#include "iaqsmpa/image_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

using namespace iaqsmpa;

namespace
{

struct PointOptions
{
    // Unset options take the first entry of the config's grid.
    std::string method;
    std::string policy;
    int n_s = 0;
    std::optional<double> snr;
    std::optional<double> rho;
    std::optional<double> bler;
    int trial = 0;
};

struct Common
{
    std::string config;
    std::string out;
    std::string format = "csv";
    std::string channel_in;
    std::string channel_out;
    long long seed = -1;
};

void add_common(CLI::App *app, Common &c, bool need_config)
{
    auto *opt = app->add_option("-c,--config", c.config, "Experiment config (JSON)");
    if (need_config)
        opt->required()->check(CLI::ExistingFile);
    app->add_option("-o,--out", c.out, "Output file (stdout when omitted)");
    app->add_option("--seed", c.seed, "Override seed_base");
}

// Each option defaults to the first entry of the matching config grid.
void add_point(CLI::App *app, PointOptions &p)
{
    app->add_option("--method", p.method, "IA_QSMPA, IA_QSMPA_LC, MOD_IA_QSMPA, MOD_IA_QSMPA_LC, FIXED_BP, "
                                          "FIXED_B_WF, FIXED_P_IAQ or FIXED_P_TOPBETA");
    app->add_option("--policy", p.policy, "IASM, RANDOM or INVERSE");
    app->add_option("--n-s", p.n_s, "Spatial streams");
    app->add_option("--snr", p.snr, "Tx SNR in dB");
    app->add_option("--rho", p.rho, "Compression ratio");
    app->add_option("--bler", p.bler, "Target block error rate");
    app->add_option("--trial", p.trial, "Trial index; the channel seed is seed_base + trial");
}

ExperimentConfig load(const Common &c)
{
    ExperimentConfig cfg = load_config(c.config);
    if (c.seed >= 0)
        cfg.seed_base = static_cast<std::uint64_t>(c.seed);
    if (!c.channel_in.empty())
    {
        cfg.channel = read_channel_csv(c.channel_in);
        cfg.channel_file = c.channel_in;
    }
    return cfg;
}

OperatingPoint to_point(const ExperimentConfig &cfg, const PointOptions &p)
{
    OperatingPoint pt;
    pt.method = p.method.empty() ? cfg.methods.front() : method_from_string(p.method);
    pt.policy = p.policy.empty() ? cfg.policies.front() : mapping_policy_from_string(p.policy);
    pt.n_s = p.n_s > 0 ? p.n_s : (cfg.n_s.empty() ? cfg.link.n_s : cfg.n_s.front());
    pt.snr_db = p.snr.value_or(cfg.tx_snr_db.front());
    pt.rho = p.rho.value_or(cfg.rho.front());
    pt.bler = p.bler.value_or(cfg.bler.front());
    pt.trial = p.trial;
    return pt;
}

ChannelRealization channel_for(const ExperimentConfig &cfg, const OperatingPoint &pt)
{
    if (cfg.channel)
        return *cfg.channel;
    return generate_channel(cfg.link_for(pt.n_s, 0.0), pt.seed(cfg));
}

// Writes to the file when given, else to stdout.
class Output
{
public:
    explicit Output(const std::string &path)
    {
        if (!path.empty())
        {
            file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
            if (!*file_)
                throw std::runtime_error("cannot open '" + path + "' for writing.");
        }
    }
    std::ostream &stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::vector<int> read_bits(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'.");
    const auto j = nlohmann::json::parse(in);
    return j.is_array() ? j.get<std::vector<int>>() : j.at("bits").get<std::vector<int>>();
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Importance-aware quantization, subcarrier mapping and power allocation"};
    app.require_subcommand(1);

    Common common;
    PointOptions point;

    auto *allocate_cmd = app.add_subcommand("allocate", "Solve one allocation problem and print the result as JSON");
    add_common(allocate_cmd, common, true);
    add_point(allocate_cmd, point);
    allocate_cmd->add_option("--channel", common.channel_in, "Replay a channel dump (CSV)")->check(CLI::ExistingFile);
    allocate_cmd->add_option("--dump-channel", common.channel_out, "Write the channel used to a CSV file");

    auto *sweep_cmd = app.add_subcommand("sweep", "Run the configured sweep and write one row per trial");
    add_common(sweep_cmd, common, true);
    std::string summary_path;
    std::string manifest_path;
    sweep_cmd->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--summary", summary_path, "Also write per-point means and standard errors (CSV)");
    sweep_cmd->add_option("--manifest", manifest_path, "Also write the run manifest (JSON)");
    sweep_cmd->add_option("--channel", common.channel_in, "Replay a channel dump for every trial")
        ->check(CLI::ExistingFile);
    int trials_override = -1;
    sweep_cmd->add_option("--trials", trials_override, "Override n_trials");

    std::string image_path;
    std::string bits_path;
    int uniform = 0;
    int height = 0;
    int width = 0;
    int channels = 0;
    int patch = 16;
    auto *quantize_cmd = app.add_subcommand("quantize", "Quantize an image into a payload file");
    quantize_cmd->add_option("--image", image_path, "PNG or raw float32 image")->required()->check(CLI::ExistingFile);
    quantize_cmd->add_option("--bits", bits_path, "JSON bit table: an array or an object with \"bits\"");
    quantize_cmd->add_option("--uniform-bits", uniform, "Same depth for every patch");
    quantize_cmd->add_option("--height", height, "Raw image height");
    quantize_cmd->add_option("--width", width, "Raw image width");
    quantize_cmd->add_option("--channels", channels, "Raw image channels");
    quantize_cmd->add_option("--patch", patch, "Patch size");
    quantize_cmd->add_option("-o,--out", common.out, "Payload file")->required();

    std::string payload_path;
    auto *dequantize_cmd = app.add_subcommand("dequantize", "Rebuild an image from a payload file");
    dequantize_cmd->add_option("--payload", payload_path, "Payload file")->required()->check(CLI::ExistingFile);
    dequantize_cmd->add_option("-o,--out", common.out, "Output image (.png or raw float32)")->required();

    std::string recon_path;
    auto *simulate_cmd =
        app.add_subcommand("simulate", "Allocate, quantize, inject bit errors and reconstruct; prints metrics");
    add_common(simulate_cmd, common, true);
    add_point(simulate_cmd, point);
    simulate_cmd->add_option("--reconstructed", recon_path, "Write the reconstructed image (.png or raw float32)");
    simulate_cmd->add_option("--channel", common.channel_in, "Replay a channel dump (CSV)")->check(CLI::ExistingFile);
    simulate_cmd->add_option("--dump-channel", common.channel_out, "Write the channel used to a CSV file");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*allocate_cmd || *simulate_cmd)
        {
            const ExperimentConfig cfg = load(common);
            const OperatingPoint pt = to_point(cfg, point);
            const ChannelRealization channel = channel_for(cfg, pt);
            if (!common.channel_out.empty())
                write_channel_csv(common.channel_out, channel);
            Output out(common.out);
            if (*allocate_cmd)
            {
                nlohmann::json j = to_json(allocate(cfg, pt, channel));
                j["seed"] = pt.seed(cfg);
                j["method"] = to_string(pt.method);
                out.stream() << j.dump(2) << '\n';
            }
            else
            {
                SimulationOutput sim = simulate(cfg, pt, channel);
                if (!recon_path.empty() && sim.reconstructed)
                {
                    if (recon_path.size() > 4 && recon_path.substr(recon_path.size() - 4) == ".png")
                        save_png(recon_path, *sim.reconstructed, cfg.u_min(), cfg.u_max());
                    else
                        save_raw_f32(recon_path, *sim.reconstructed);
                }
                out.stream() << to_json(sim.row).dump(2) << '\n';
            }
        }
        else if (*sweep_cmd)
        {
            ExperimentConfig cfg = load(common);
            if (trials_override >= 0)
                cfg.n_trials = trials_override;
            Output out(common.out);
            std::vector<ResultRow> rows;
            if (common.format == "csv")
            {
                write_csv_header(out.stream(), cfg.record_wall_time);
                rows = sweep(cfg, [&](const ResultRow &r) {
                    write_csv_row(out.stream(), r, cfg.record_wall_time);
                    out.stream().flush();
                });
            }
            else
            {
                rows = sweep(cfg);
                nlohmann::json arr = nlohmann::json::array();
                for (const auto &r : rows)
                    arr.push_back(to_json(r));
                out.stream() << arr.dump(2) << '\n';
            }
            if (!summary_path.empty())
            {
                Output s(summary_path);
                write_summary_csv(s.stream(), summarize(rows));
            }
            if (!manifest_path.empty())
            {
                Output m(manifest_path);
                m.stream() << run_manifest(cfg).dump(2) << '\n';
            }
        }
        else if (*quantize_cmd)
        {
            const bool png = image_path.size() > 4 && image_path.substr(image_path.size() - 4) == ".png";
            const PatchImage img =
                png ? load_png(image_path, patch) : load_raw_f32(image_path, height, width, channels, patch);
            std::vector<int> bits = bits_path.empty() ? std::vector<int>(img.g(), uniform) : read_bits(bits_path);
            const QuantizedImage q = quantize(img, bits);
            write_payload(common.out, q, pack_codes(q));
        }
        else if (*dequantize_cmd)
        {
            Payload p = read_payload(payload_path);
            unpack_codes(p.packed, p.header);
            const PatchImage img = dequantize(p.header);
            if (common.out.size() > 4 && common.out.substr(common.out.size() - 4) == ".png")
                save_png(common.out, img, p.header.u_min, p.header.u_max);
            else
                save_raw_f32(common.out, img);
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "iaqsmpa: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
