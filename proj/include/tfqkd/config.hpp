#ifndef TFQKD_CONFIG_HPP
#define TFQKD_CONFIG_HPP

#include "tfqkd/pipeline.hpp"

#include <optional>
#include <string>

// Run configuration and file formats. Configs and counts are JSON with
// explicit units (loss in dB, intensities dimensionless); both round-trip
// losslessly. Results embed the config hash and tool version.

namespace tfqkd {

inline constexpr const char* kToolName = "tfkeyforge";
inline constexpr const char* kToolVersion = "1.0.0";

struct RunConfig {
    ProtocolParams protocol;
    ChannelParams channel;
    double eps_correctness = 1e-10;
    double eps_secrecy_target = 1e-10;
    std::optional<double> eps_pa;        // explicit overrides of the derived split
    std::optional<double> eps_chernoff;
    std::optional<double> eps_kato;
    BudgetMode budget_mode = BudgetMode::Paper;
    IntensityConvention convention = IntensityConvention::Intensity;

    AnalysisOptions analysis_options() const {
        return {budget_mode, convention, false};
    }
    SecurityParams security() const;
};

// Raised for malformed configuration or data files (CLI exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config); // lossless round-trip

// FNV-1a over the canonical (key-sorted, compact) serialization; stable
// under reformatting of the input file.
std::string config_hash(const RunConfig& config);

struct CountsFile {
    ObservedCounts counts;
    std::uint64_t n_rounds = 0;
    double loss_db = 0.0;
    bool rounded = false;
    std::string config_hash;
};

std::string serialize_counts(const CountsFile& counts);
CountsFile parse_counts(const std::string& json_text);
CountsFile load_counts(const std::string& path);

// Result document for the keyrate/optimize commands.
std::string serialize_result(const RunConfig& config, const KeyRateResult& result,
                             const ProtocolParams& params_used, double loss_db);

// Shortest round-trip decimal form; used for every number the tool emits so
// reruns are byte-identical.
std::string format_double(double v);

} // namespace tfqkd

#endif
