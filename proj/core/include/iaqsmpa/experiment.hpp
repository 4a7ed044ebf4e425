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

#ifndef IAQSMPA_EXPERIMENT_HPP
#define IAQSMPA_EXPERIMENT_HPP

#include "iaqsmpa/allocator_fbl.hpp"
#include "iaqsmpa/importance.hpp"
#include "iaqsmpa/link_model.hpp"
#include "iaqsmpa/metrics.hpp"
#include "iaqsmpa/quantizer.hpp"
#include "iaqsmpa/subcarrier_mapping.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace iaqsmpa
{

inline constexpr int kCsvSchemaVersion = 1;

enum class Scenario
{
    Ideal,
    Fbl,
};

enum class Method
{
    IaQsmpa,
    IaQsmpaLc,
    ModIaQsmpa,
    ModIaQsmpaLc,
    FixedBp,
    FixedBWf,
    FixedPIaq,
    FixedPTopbeta,
};

// Which per-block BER drives bit-flip injection.
enum class BerModel
{
    Auto,    // None for the ideal scenario, Target for the finite-blocklength one
    None,    // error-free delivery
    Target,  // every block at the configured target BLER
    Channel, // normal-approximation BLER of each block at the rate the design latency demands
};

// Reference power of the Tx SNR: the total budget, or the power of one subchannel.
enum class SnrReference
{
    Total,
    PerSubchannel,
};

std::string to_string(Scenario s);
std::string to_string(Method m);
std::string to_string(BerModel m);
std::string to_string(SnrReference r);
Scenario scenario_from_string(const std::string &name);
Method method_from_string(const std::string &name);
BerModel ber_model_from_string(const std::string &name);
SnrReference snr_reference_from_string(const std::string &name);
const std::vector<Method> &all_methods();

struct ExperimentConfig
{
    LinkConfig link; // n_s / n_tx / n_rx and sigma2 are overridden per operating point
    Scenario scenario = Scenario::Ideal;
    std::vector<Method> methods{Method::IaQsmpa};
    std::vector<MappingPolicy> policies{MappingPolicy::Iasm};
    std::vector<int> n_s{4};
    std::vector<double> rho{0.25};
    std::vector<double> tx_snr_db{20.0};
    std::vector<double> bler{0.01};
    int n_trials = 20;
    std::uint64_t seed_base = 1;

    // Source geometry; replaced by the image's when an image is loaded.
    int height = 224;
    int width = 224;
    int channels = 3;
    int patch = 16;
    int b_min = 1;
    int b_max = 8;
    int k_iters = 5;
    double delta = kDefaultDelta;
    double d_c = kDefaultWeightFloor;
    std::optional<double> weight_override;
    double gamma_corr = 10.0;
    BerModel ber_model = BerModel::Auto;
    NormalizerScope normalizer_scope = NormalizerScope::SameRegime;
    SnrReference snr_reference = SnrReference::Total;
    bool record_wall_time = false;
    SolverSettings solver;

    ImportanceProfile profile;
    std::string importance_file;
    std::optional<PatchImage> image;
    std::string image_path;
    std::optional<ChannelRealization> channel; // replayed for every trial when set
    std::string channel_file;

    void validate() const;
    int d() const { return patch * patch * channels; }
    int g() const { return (height / patch) * (width / patch); }
    long long b_target(double rho_value) const; // throws unless rho * 8 H W C is an integer multiple of d
    double u_min() const { return image ? image->u_min : 0.0; }
    double u_max() const { return image ? image->u_max : 1.0; }
    LinkConfig link_for(int n_s, double snr_db) const;
    BerModel effective_ber_model() const;
};

// JSON config; relative file paths resolve against `base_dir`. Loads the referenced files.
ExperimentConfig config_from_json(const nlohmann::json &j, const std::string &base_dir = ".");
ExperimentConfig load_config(const std::string &path);
nlohmann::json to_json(const ExperimentConfig &config);

struct OperatingPoint
{
    Method method = Method::IaQsmpa;
    MappingPolicy policy = MappingPolicy::Iasm;
    int n_s = 4;
    double snr_db = 20.0;
    double rho = 0.25;
    double bler = 0.01;
    int trial = 0;

    std::uint64_t seed(const ExperimentConfig &config) const { return config.seed_base + static_cast<std::uint64_t>(trial); }
};

// Everything a method produced for one operating point.
struct Allocation
{
    LinkConfig link;
    SubcarrierMapping mapping;
    AllocProblem problem;
    FblParams fbl;
    AllocationResult result;
    std::vector<double> subchannel_powers; // only for the water-filling baseline
};

Allocation allocate(const ExperimentConfig &config, const OperatingPoint &point, const ChannelRealization &channel);

struct ResultRow
{
    OperatingPoint point;
    Scenario scenario = Scenario::Ideal;
    std::uint64_t seed = 0;
    long long b_target = 0;
    double t_d = 0.0;            // inference worst-case latency [s]
    double design_latency = 0.0; // worst-case latency predicted by the allocator's own rate model [s]
    double e_q = 0.0;
    double objective = 0.0;
    double distortion = std::numeric_limits<double>::quiet_NaN(); // measured weighted distortion
    double psnr = std::numeric_limits<double>::quiet_NaN();
    double mean_ber = 0.0;
    long long bit_sum = 0;   // D * sum_i B[i]
    double power_sum = 0.0;  // sum over subchannels of power
    int cap_relaxations = 0;
    int non_monotone_steps = 0;
    bool feasible = true;
    bool coherence_ok = true;
    std::string message;
    double wall_time = 0.0;
};

// Draws the trial's channel (or replays the configured one) and runs one method end to end.
ResultRow run_method(const ExperimentConfig &config, const OperatingPoint &point);
ResultRow run_point(const ExperimentConfig &config, const OperatingPoint &point, const ChannelRealization &channel);

// Per-block BER used for bit-flip injection under the configured model.
std::vector<double> injection_ber(const ExperimentConfig &config, const Allocation &alloc);

struct SimulationOutput
{
    ResultRow row;
    std::optional<PatchImage> reconstructed;
};
SimulationOutput simulate(const ExperimentConfig &config, const OperatingPoint &point,
                          const ChannelRealization &channel);

// Operating points in output order: n_s, SNR, rho, BLER, policy, method, trial.
std::vector<OperatingPoint> sweep_points(const ExperimentConfig &config);
std::vector<ResultRow> sweep(const ExperimentConfig &config, const std::function<void(const ResultRow &)> &sink = {});

struct SummaryRow
{
    OperatingPoint point; // trial unused
    Scenario scenario = Scenario::Ideal;
    int n = 0;
    int n_feasible = 0;
    double mean_t_d = 0.0;
    double se_t_d = 0.0;
    double mean_design_latency = 0.0;
    double mean_e_q = 0.0;
    double mean_distortion = 0.0;
    double se_distortion = 0.0;
    double mean_psnr = 0.0;
};
std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows);

void write_csv_header(std::ostream &out, bool with_wall_time);
void write_csv_row(std::ostream &out, const ResultRow &row, bool with_wall_time);
void write_summary_csv(std::ostream &out, const std::vector<SummaryRow> &rows);
nlohmann::json to_json(const ResultRow &row);
nlohmann::json to_json(const Allocation &alloc);
nlohmann::json to_json(const AllocationResult &result);

// Git-style content hash: SHA-1 over "blob <size>\0" followed by the bytes.
std::string content_hash(const std::string &bytes);
// Full config, solver settings, SNR convention and the content hash of every input.
nlohmann::json run_manifest(const ExperimentConfig &config);

} // namespace iaqsmpa

#endif
