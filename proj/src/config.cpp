#include "tfqkd/config.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tfqkd {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ConfigError("missing or non-numeric field: " + key);
    return j.at(key).get<double>();
}

std::uint64_t require_count(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number_unsigned())
        throw ConfigError("missing or non-integer field: " + key);
    return j.at(key).get<std::uint64_t>();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

json parse_json(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError(std::string("malformed JSON in ") + what);
    return j;
}

} // namespace

SecurityParams RunConfig::security() const {
    SecurityParams sec = derive_security(eps_correctness, eps_secrecy_target,
                                         protocol.s_cut, budget_mode);
    if (eps_pa) sec.eps_pa = *eps_pa;
    if (eps_chernoff) sec.eps_chernoff = *eps_chernoff;
    if (eps_kato) sec.eps_kato = *eps_kato;
    return sec;
}

RunConfig parse_config(const std::string& json_text) {
    const json j = parse_json(json_text, "config");
    RunConfig c;
    try {
        const json& p = j.at("protocol");
        c.protocol.n_rounds = require_count(p, "n_rounds");
        c.protocol.p_x = require_number(p, "p_x");
        c.protocol.alpha = require_number(p, "alpha");
        c.protocol.s_cut = p.value("s_cut", 4);
        const auto mu = p.at("intensities").get<std::vector<double>>();
        const auto pp = p.at("intensity_probabilities").get<std::vector<double>>();
        if (mu.size() != 3 || pp.size() != 3)
            throw ConfigError("intensities and intensity_probabilities must have 3 entries");
        for (int i = 0; i < 3; ++i) {
            c.protocol.intensities.mu[i] = mu[i];
            c.protocol.intensities.p[i] = pp[i];
        }

        const json& ch = j.at("channel");
        c.channel.loss_db = require_number(ch, "loss_db");
        c.channel.p_d = require_number(ch, "dark_count_prob");
        c.channel.delta_ph = require_number(ch, "phase_misalignment");
        c.channel.delta_pol = require_number(ch, "polarization_misalignment");
        c.channel.f_ec = require_number(ch, "error_correction_inefficiency");

        const json& s = j.at("security");
        c.eps_correctness = require_number(s, "eps_correctness");
        c.eps_secrecy_target = require_number(s, "eps_secrecy_target");
        if (s.contains("eps_pa")) c.eps_pa = s.at("eps_pa").get<double>();
        if (s.contains("eps_chernoff")) c.eps_chernoff = s.at("eps_chernoff").get<double>();
        if (s.contains("eps_kato")) c.eps_kato = s.at("eps_kato").get<double>();

        if (j.contains("modes")) {
            const json& m = j.at("modes");
            const std::string budget = m.value("eps_budget", "paper");
            if (budget == "paper") c.budget_mode = BudgetMode::Paper;
            else if (budget == "strict") c.budget_mode = BudgetMode::Strict;
            else throw ConfigError("modes.eps_budget must be 'paper' or 'strict'");
            const std::string conv = m.value("intensity_convention", "intensity");
            if (conv == "intensity") c.convention = IntensityConvention::Intensity;
            else if (conv == "amplitude") c.convention = IntensityConvention::Amplitude;
            else throw ConfigError("modes.intensity_convention must be 'intensity' or 'amplitude'");
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    return parse_config(read_file(path));
}

std::string serialize_config(const RunConfig& c) {
    ordered_json j;
    j["protocol"] = {
        {"n_rounds", c.protocol.n_rounds},
        {"p_x", c.protocol.p_x},
        {"alpha", c.protocol.alpha},
        {"s_cut", c.protocol.s_cut},
        {"intensities", c.protocol.intensities.mu},
        {"intensity_probabilities", c.protocol.intensities.p},
    };
    j["channel"] = {
        {"loss_db", c.channel.loss_db},
        {"dark_count_prob", c.channel.p_d},
        {"phase_misalignment", c.channel.delta_ph},
        {"polarization_misalignment", c.channel.delta_pol},
        {"error_correction_inefficiency", c.channel.f_ec},
    };
    j["security"] = {
        {"eps_correctness", c.eps_correctness},
        {"eps_secrecy_target", c.eps_secrecy_target},
    };
    if (c.eps_pa) j["security"]["eps_pa"] = *c.eps_pa;
    if (c.eps_chernoff) j["security"]["eps_chernoff"] = *c.eps_chernoff;
    if (c.eps_kato) j["security"]["eps_kato"] = *c.eps_kato;
    j["modes"] = {
        {"eps_budget", c.budget_mode == BudgetMode::Paper ? "paper" : "strict"},
        {"intensity_convention",
         c.convention == IntensityConvention::Intensity ? "intensity" : "amplitude"},
    };
    return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& config) {
    // canonical form: plain json sorts keys; compact dump
    const json canonical = json::parse(serialize_config(config));
    const std::string s = canonical.dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string serialize_counts(const CountsFile& f) {
    ordered_json j;
    j["format"] = "tfkeyforge-counts/1";
    j["tool_version"] = kToolVersion;
    j["config_hash"] = f.config_hash;
    j["n_rounds"] = f.n_rounds;
    j["loss_db"] = f.loss_db;
    j["m_x"] = f.counts.m_x;
    j["m_matrix"] = f.counts.m_matrix;
    j["e_x_obs"] = f.counts.e_x_obs;
    j["rounded"] = f.rounded;
    return j.dump(2) + "\n";
}

CountsFile parse_counts(const std::string& json_text) {
    const json j = parse_json(json_text, "counts");
    CountsFile f;
    try {
        if (j.value("format", "") != std::string("tfkeyforge-counts/1"))
            throw ConfigError("counts: unknown or missing format tag");
        f.n_rounds = require_count(j, "n_rounds");
        f.loss_db = require_number(j, "loss_db");
        f.counts.m_x = require_count(j, "m_x");
        const auto mat = j.at("m_matrix");
        if (!mat.is_array() || mat.size() != 3)
            throw ConfigError("counts: m_matrix must be 3x3");
        for (int i = 0; i < 3; ++i) {
            if (!mat[i].is_array() || mat[i].size() != 3)
                throw ConfigError("counts: m_matrix must be 3x3");
            for (int k = 0; k < 3; ++k) {
                if (!mat[i][k].is_number_unsigned())
                    throw ConfigError("counts: m_matrix entries must be nonnegative integers");
                f.counts.m_matrix[i][k] = mat[i][k].get<std::uint64_t>();
            }
        }
        f.counts.e_x_obs = require_number(j, "e_x_obs");
        if (!(f.counts.e_x_obs >= 0.0 && f.counts.e_x_obs <= 1.0))
            throw ConfigError("counts: e_x_obs outside [0,1]");
        f.rounded = j.value("rounded", false);
        f.config_hash = j.value("config_hash", "");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("counts: ") + e.what());
    }
    return f;
}

CountsFile load_counts(const std::string& path) {
    return parse_counts(read_file(path));
}

std::string serialize_result(const RunConfig& config, const KeyRateResult& result,
                             const ProtocolParams& params_used, double loss_db) {
    ordered_json j;
    j["format"] = "tfkeyforge-result/1";
    j["tool_version"] = kToolVersion;
    j["config_hash"] = config_hash(config);
    j["inputs"] = {
        {"loss_db", loss_db},
        {"n_rounds", params_used.n_rounds},
        {"p_x", params_used.p_x},
        {"alpha", params_used.alpha},
        {"s_cut", params_used.s_cut},
        {"intensities", params_used.intensities.mu},
        {"intensity_probabilities", params_used.intensities.p},
        {"eps_budget", config.budget_mode == BudgetMode::Paper ? "paper" : "strict"},
        {"intensity_convention",
         config.convention == IntensityConvention::Intensity ? "intensity" : "amplitude"},
    };
    ordered_json r;
    r["key_length"] = result.key_length;
    r["rate"] = result.rate;
    r["n_ph_upper"] = result.n_ph_upper;
    r["e_ph_upper"] = result.e_ph_upper;
    r["failure_reason"] = result.failure_reason;
    ordered_json diag;
    for (const auto& [k, v] : result.diagnostics) diag[k] = v; // map is sorted
    r["diagnostics"] = diag;
    j["result"] = r;
    return j.dump(2) + "\n";
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace tfqkd
