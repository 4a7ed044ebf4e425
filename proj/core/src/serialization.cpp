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
#include "iaqsmpa/image_io.hpp"

#include <openssl/sha.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifndef IAQSMPA_VERSION
#define IAQSMPA_VERSION "unknown"
#endif

namespace iaqsmpa
{

namespace
{

template <typename E>
struct Names
{
    E value;
    const char *name;
};

constexpr Names<Method> kMethods[] = {
    {Method::IaQsmpa, "IA_QSMPA"},       {Method::IaQsmpaLc, "IA_QSMPA_LC"},
    {Method::ModIaQsmpa, "MOD_IA_QSMPA"}, {Method::ModIaQsmpaLc, "MOD_IA_QSMPA_LC"},
    {Method::FixedBp, "FIXED_BP"},       {Method::FixedBWf, "FIXED_B_WF"},
    {Method::FixedPIaq, "FIXED_P_IAQ"},  {Method::FixedPTopbeta, "FIXED_P_TOPBETA"},
};
constexpr Names<Scenario> kScenarios[] = {{Scenario::Ideal, "IDEAL"}, {Scenario::Fbl, "FBL"}};
constexpr Names<BerModel> kBerModels[] = {
    {BerModel::Auto, "auto"}, {BerModel::None, "none"}, {BerModel::Target, "target"}, {BerModel::Channel, "channel"}};
constexpr Names<SnrReference> kSnrRefs[] = {{SnrReference::Total, "total"},
                                            {SnrReference::PerSubchannel, "per_subchannel"}};

template <typename E, std::size_t N>
std::string name_of(const Names<E> (&table)[N], E v)
{
    for (const auto &e : table)
        if (e.value == v)
            return e.name;
    return "UNKNOWN";
}

template <typename E, std::size_t N>
E value_of(const Names<E> (&table)[N], const std::string &name, const char *what)
{
    for (const auto &e : table)
        if (name == e.name)
            return e.value;
    throw std::invalid_argument(std::string("Unknown ") + what + ": " + name);
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'.");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string resolve(const std::string &base, const std::string &path)
{
    if (path.empty())
        return path;
    const std::filesystem::path p(path);
    return p.is_absolute() ? path : (std::filesystem::path(base) / p).string();
}

bool ends_with(const std::string &s, const std::string &suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Numbers in CSV: fixed 12 significant digits, "inf" for infinity, empty for NaN.
std::string num(double v)
{
    if (std::isnan(v))
        return "";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    std::ostringstream ss;
    ss << std::setprecision(12) << v;
    return ss.str();
}

std::string quoted(const std::string &s)
{
    std::string out = "\"";
    for (char c : s)
    {
        if (c == '"')
            out += "\"\"";
        else if (c == '\n' || c == '\r')
            out += ' ';
        else
            out += c;
    }
    return out + "\"";
}

// JSON has no infinity; non-finite numbers are written as strings.
nlohmann::json jnum(double v)
{
    if (std::isfinite(v))
        return v;
    if (std::isnan(v))
        return nullptr;
    return v > 0 ? "inf" : "-inf";
}

} // namespace

std::string to_string(Scenario s) { return name_of(kScenarios, s); }
std::string to_string(Method m) { return name_of(kMethods, m); }
std::string to_string(BerModel m) { return name_of(kBerModels, m); }
std::string to_string(SnrReference r) { return name_of(kSnrRefs, r); }
Scenario scenario_from_string(const std::string &name) { return value_of(kScenarios, name, "scenario"); }
Method method_from_string(const std::string &name) { return value_of(kMethods, name, "method"); }
BerModel ber_model_from_string(const std::string &name) { return value_of(kBerModels, name, "BER model"); }
SnrReference snr_reference_from_string(const std::string &name)
{
    return value_of(kSnrRefs, name, "SNR reference");
}

const std::vector<Method> &all_methods()
{
    static const std::vector<Method> methods = [] {
        std::vector<Method> v;
        for (const auto &e : kMethods)
            v.push_back(e.value);
        return v;
    }();
    return methods;
}

ExperimentConfig config_from_json(const nlohmann::json &j, const std::string &base_dir)
{
    ExperimentConfig c;
    if (j.contains("link"))
    {
        const auto &l = j.at("link");
        c.link.n_tx = l.value("n_tx", c.link.n_tx);
        c.link.n_rx = l.value("n_rx", c.link.n_rx);
        c.link.n_s = l.value("n_s", c.link.n_s);
        c.link.f = l.value("f", c.link.f);
        c.link.t_coh = l.value("t_coh", c.link.t_coh);
        c.link.df0 = l.value("df0", c.link.df0);
        c.link.sigma_h2 = l.value("sigma_h2", c.link.sigma_h2);
        c.link.p_tot = l.value("p_tot", c.link.p_tot);
    }
    if (j.contains("scenario"))
        c.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    if (j.contains("methods"))
    {
        c.methods.clear();
        for (const auto &m : j.at("methods"))
            c.methods.push_back(method_from_string(m.get<std::string>()));
    }
    if (j.contains("policies"))
    {
        c.policies.clear();
        for (const auto &p : j.at("policies"))
            c.policies.push_back(mapping_policy_from_string(p.get<std::string>()));
    }
    c.n_s = j.value("n_s", c.n_s);
    c.rho = j.value("rho", c.rho);
    c.tx_snr_db = j.value("tx_snr_db", c.tx_snr_db);
    c.bler = j.value("bler", c.bler);
    c.n_trials = j.value("n_trials", c.n_trials);
    c.seed_base = j.value("seed_base", c.seed_base);
    c.height = j.value("height", c.height);
    c.width = j.value("width", c.width);
    c.channels = j.value("channels", c.channels);
    c.patch = j.value("patch", c.patch);
    c.b_min = j.value("b_min", c.b_min);
    c.b_max = j.value("b_max", c.b_max);
    c.k_iters = j.value("k_iters", c.k_iters);
    c.delta = j.value("delta", c.delta);
    c.d_c = j.value("d_c", c.d_c);
    if (j.contains("weight_override") && !j.at("weight_override").is_null())
        c.weight_override = j.at("weight_override").get<double>();
    c.gamma_corr = j.value("gamma_corr", c.gamma_corr);
    if (j.contains("ber_model"))
        c.ber_model = ber_model_from_string(j.at("ber_model").get<std::string>());
    if (j.contains("normalizer_scope"))
        c.normalizer_scope = normalizer_scope_from_string(j.at("normalizer_scope").get<std::string>());
    if (j.contains("snr_reference"))
        c.snr_reference = snr_reference_from_string(j.at("snr_reference").get<std::string>());
    c.record_wall_time = j.value("record_wall_time", c.record_wall_time);
    if (j.contains("solver"))
    {
        const auto &s = j.at("solver");
        c.solver.rel_tol = s.value("rel_tol", c.solver.rel_tol);
        c.solver.max_bisections = s.value("max_bisections", c.solver.max_bisections);
        c.solver.expand_factor = s.value("expand_factor", c.solver.expand_factor);
        c.solver.max_expansions = s.value("max_expansions", c.solver.max_expansions);
    }

    c.image_path = resolve(base_dir, j.value("image_path", std::string()));
    if (!c.image_path.empty())
    {
        if (ends_with(c.image_path, ".png"))
            c.image = load_png(c.image_path, c.patch);
        else
            c.image = load_raw_f32(c.image_path, c.height, c.width, c.channels, c.patch);
        c.height = c.image->height;
        c.width = c.image->width;
        c.channels = c.image->channels;
    }

    c.importance_file = resolve(base_dir, j.value("importance_file", std::string()));
    if (!c.importance_file.empty())
        c.profile = load_profile(c.importance_file);
    else if (j.contains("profile"))
        c.profile = profile_from_json(j.at("profile"));
    else
        throw std::invalid_argument("ExperimentConfig: an importance_file or inline profile is required.");

    c.channel_file = resolve(base_dir, j.value("channel_file", std::string()));
    if (!c.channel_file.empty())
        c.channel = read_channel_csv(c.channel_file);

    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string &path)
{
    const auto j = nlohmann::json::parse(read_file(path));
    return config_from_json(j, std::filesystem::path(path).parent_path().string());
}

nlohmann::json to_json(const ExperimentConfig &c)
{
    nlohmann::json methods = nlohmann::json::array();
    for (Method m : c.methods)
        methods.push_back(to_string(m));
    nlohmann::json policies = nlohmann::json::array();
    for (MappingPolicy p : c.policies)
        policies.push_back(to_string(p));
    nlohmann::json j = {
        {"link",
         {{"n_tx", c.link.n_tx},
          {"n_rx", c.link.n_rx},
          {"n_s", c.link.n_s},
          {"f", c.link.f},
          {"t_coh", c.link.t_coh},
          {"df0", c.link.df0},
          {"sigma_h2", c.link.sigma_h2},
          {"p_tot", c.link.p_tot}}},
        {"scenario", to_string(c.scenario)},
        {"methods", methods},
        {"policies", policies},
        {"n_s", c.n_s},
        {"rho", c.rho},
        {"tx_snr_db", c.tx_snr_db},
        {"bler", c.bler},
        {"n_trials", c.n_trials},
        {"seed_base", c.seed_base},
        {"height", c.height},
        {"width", c.width},
        {"channels", c.channels},
        {"patch", c.patch},
        {"b_min", c.b_min},
        {"b_max", c.b_max},
        {"k_iters", c.k_iters},
        {"delta", c.delta},
        {"d_c", c.d_c},
        {"weight_override", c.weight_override ? nlohmann::json(*c.weight_override) : nlohmann::json(nullptr)},
        {"gamma_corr", c.gamma_corr},
        {"ber_model", to_string(c.ber_model)},
        {"normalizer_scope", to_string(c.normalizer_scope)},
        {"snr_reference", to_string(c.snr_reference)},
        {"record_wall_time", c.record_wall_time},
        {"solver",
         {{"rel_tol", c.solver.rel_tol},
          {"max_bisections", c.solver.max_bisections},
          {"expand_factor", c.solver.expand_factor},
          {"max_expansions", c.solver.max_expansions}}},
    };
    if (!c.importance_file.empty())
        j["importance_file"] = c.importance_file;
    else
        j["profile"] = to_json(c.profile);
    if (!c.image_path.empty())
        j["image_path"] = c.image_path;
    if (!c.channel_file.empty())
        j["channel_file"] = c.channel_file;
    return j;
}

void write_csv_header(std::ostream &out, bool with_wall_time)
{
    out << "schema_version,scenario,method,policy,n_s,tx_snr_db,rho,bler,trial,seed,b_target,t_d,design_latency,e_q,"
           "objective,distortion,psnr,mean_ber,bit_sum,power_sum,cap_relaxations,non_monotone_steps,feasible,"
           "coherence_ok,message";
    if (with_wall_time)
        out << ",wall_time";
    out << '\n';
}

void write_csv_row(std::ostream &out, const ResultRow &r, bool with_wall_time)
{
    out << kCsvSchemaVersion << ',' << to_string(r.scenario) << ',' << to_string(r.point.method) << ','
        << to_string(r.point.policy) << ',' << r.point.n_s << ',' << num(r.point.snr_db) << ',' << num(r.point.rho)
        << ',' << num(r.point.bler) << ',' << r.point.trial << ',' << r.seed << ',' << r.b_target << ','
        << num(r.t_d) << ',' << num(r.design_latency) << ',' << num(r.e_q) << ',' << num(r.objective) << ','
        << num(r.distortion) << ',' << num(r.psnr) << ',' << num(r.mean_ber) << ',' << r.bit_sum << ','
        << num(r.power_sum) << ',' << r.cap_relaxations << ',' << r.non_monotone_steps << ',' << (r.feasible ? 1 : 0)
        << ',' << (r.coherence_ok ? 1 : 0) << ',' << quoted(r.message);
    if (with_wall_time)
        out << ',' << num(r.wall_time);
    out << '\n';
}

void write_summary_csv(std::ostream &out, const std::vector<SummaryRow> &rows)
{
    out << "schema_version,scenario,method,policy,n_s,tx_snr_db,rho,bler,n,n_feasible,mean_t_d,se_t_d,"
           "mean_design_latency,mean_e_q,mean_distortion,se_distortion,mean_psnr\n";
    for (const auto &s : rows)
        out << kCsvSchemaVersion << ',' << to_string(s.scenario) << ',' << to_string(s.point.method) << ','
            << to_string(s.point.policy) << ',' << s.point.n_s << ',' << num(s.point.snr_db) << ','
            << num(s.point.rho) << ',' << num(s.point.bler) << ',' << s.n << ',' << s.n_feasible << ','
            << num(s.mean_t_d) << ',' << num(s.se_t_d) << ',' << num(s.mean_design_latency) << ','
            << num(s.mean_e_q) << ',' << num(s.mean_distortion) << ',' << num(s.se_distortion) << ','
            << num(s.mean_psnr) << '\n';
}

nlohmann::json to_json(const ResultRow &r)
{
    return {{"scenario", to_string(r.scenario)},
            {"method", to_string(r.point.method)},
            {"policy", to_string(r.point.policy)},
            {"n_s", r.point.n_s},
            {"tx_snr_db", r.point.snr_db},
            {"rho", r.point.rho},
            {"bler", r.point.bler},
            {"trial", r.point.trial},
            {"seed", r.seed},
            {"b_target", r.b_target},
            {"t_d", jnum(r.t_d)},
            {"design_latency", jnum(r.design_latency)},
            {"e_q", jnum(r.e_q)},
            {"objective", jnum(r.objective)},
            {"distortion", jnum(r.distortion)},
            {"psnr", jnum(r.psnr)},
            {"mean_ber", jnum(r.mean_ber)},
            {"bit_sum", r.bit_sum},
            {"power_sum", jnum(r.power_sum)},
            {"cap_relaxations", r.cap_relaxations},
            {"non_monotone_steps", r.non_monotone_steps},
            {"feasible", r.feasible},
            {"coherence_ok", r.coherence_ok},
            {"message", r.message},
            {"wall_time", r.wall_time}};
}

nlohmann::json to_json(const AllocationResult &r)
{
    nlohmann::json trace = nlohmann::json::array();
    for (const auto &t : r.trace)
        trace.push_back({{"k", t.k}, {"y", jnum(t.y)}, {"e_q", jnum(t.e_q)}, {"objective", jnum(t.objective)}});
    nlohmann::json j = {{"bits", r.bits_int},
                        {"powers", r.powers},
                        {"y", jnum(r.y)},
                        {"e_q", jnum(r.e_q)},
                        {"objective", jnum(r.objective)},
                        {"bits_cont", r.bits_cont},
                        {"powers_cont", r.powers_cont},
                        {"y_cont", jnum(r.y_cont)},
                        {"nu", jnum(r.nu)},
                        {"tau", jnum(r.tau)},
                        {"trace", trace},
                        {"cap_relaxations", r.cap_relaxations},
                        {"non_monotone_steps", r.non_monotone_steps},
                        {"feasible", r.feasible}};
    if (!r.message.empty())
        j["message"] = r.message;
    if (!r.regimes.empty())
        j["regimes"] = r.regimes;
    if (!r.alpha.empty())
        j["alpha"] = r.alpha;
    return j;
}

nlohmann::json to_json(const Allocation &a)
{
    nlohmann::json j = to_json(a.result);
    j["mapping"] = to_json(a.mapping);
    j["gains"] = a.problem.gains;
    j["weights"] = a.problem.weights;
    j["b_target"] = a.problem.b_target;
    j["sigma2"] = a.problem.sigma2;
    j["power_budget"] = a.problem.power_budget;
    j["df"] = a.problem.df;
    j["solver"] = {{"rel_tol", a.problem.solver.rel_tol},
                   {"max_bisections", a.problem.solver.max_bisections},
                   {"expand_factor", a.problem.solver.expand_factor},
                   {"max_expansions", a.problem.solver.max_expansions}};
    j["bler"] = a.fbl.bler;
    j["l_c"] = a.fbl.l_c;
    if (!a.subchannel_powers.empty())
        j["subchannel_powers"] = a.subchannel_powers;
    return j;
}

std::string content_hash(const std::string &bytes)
{
    const std::string blob = "blob " + std::to_string(bytes.size()) + '\0' + bytes;
    unsigned char digest[SHA_DIGEST_LENGTH];
    SHA1(reinterpret_cast<const unsigned char *>(blob.data()), blob.size(), digest);
    std::ostringstream ss;
    for (unsigned char b : digest)
        ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(b);
    return ss.str();
}

nlohmann::json run_manifest(const ExperimentConfig &c)
{
    const nlohmann::json cfg = to_json(c);
    nlohmann::json inputs = {{"config", content_hash(cfg.dump())}};
    inputs["importance"] =
        content_hash(c.importance_file.empty() ? to_json(c.profile).dump() : read_file(c.importance_file));
    if (!c.image_path.empty())
        inputs["image"] = content_hash(read_file(c.image_path));
    if (!c.channel_file.empty())
        inputs["channel"] = content_hash(read_file(c.channel_file));
    return {{"tool", "iaqsmpa"},
            {"version", IAQSMPA_VERSION},
            {"csv_schema_version", kCsvSchemaVersion},
            {"snr_convention", c.snr_reference == SnrReference::Total
                                   ? "Tx SNR = P_tot / sigma2, P_tot fixed, sigma2 swept"
                                   : "Tx SNR = (P_tot / (N_s F)) / sigma2, P_tot fixed, sigma2 swept"},
            {"seed_rule", "trial seed = seed_base + trial"},
            {"config", cfg},
            {"inputs", inputs}};
}

} // namespace iaqsmpa
