#pragma once

#include "cipanova/comparison.hpp"
#include "cipanova/power.hpp"
#include "cipanova/scenarios.hpp"
#include "cipanova/simulation.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cipanova {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Everything needed to rerun a comparison or a simulation study.
///
/// JSON layout (every key optional):
///   {"data": "file.csv" | "scenario": "pop3", "n_per_group": 25, "replications": 50,
///    "models": [{"name": "M3", "spec": "mu2 < mu1 < mu4 < {mu3 = mu5}"}],
///    "prior_probs": [...], "theta0": {"alpha0": 0, "sigma0": 1},
///    "sampler": {"prior_draws": .., "mcmc_iterations": .., "burnin": ..,
///                "quadrature_nodes": .., "evidence_method": "quadrature", "chib_iterations": ..},
///    "seed": 1}
struct RunConfig {
    std::optional<std::string> data_path;
    std::optional<std::string> scenario;
    std::optional<int> n_per_group;
    std::optional<long> replications;
    std::vector<ModelDef> models;
    std::vector<double> prior_probs;
    std::optional<NullParams> theta0;
    ComparisonSettings settings;
    std::uint64_t seed = 1;
};

[[nodiscard]] RunConfig parse_run_config(const nlohmann::json& j);
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);
[[nodiscard]] nlohmann::json to_json(const RunConfig& config);
[[nodiscard]] nlohmann::json to_json(const ComparisonSettings& settings);

[[nodiscard]] nlohmann::json report_record(const ComparisonReport& report, const RunConfig& config);
[[nodiscard]] nlohmann::json replication_record(const ReplicationRecord& rec);
[[nodiscard]] nlohmann::json summary_record(const SummaryTable& table, const RunConfig& config);
[[nodiscard]] nlohmann::json power_record(const std::vector<PowerRow>& rows);

[[nodiscard]] std::string format_report(const ComparisonReport& report);
[[nodiscard]] std::string format_summary(const SummaryTable& table);
[[nodiscard]] std::string format_power(const std::vector<PowerRow>& rows);

}  // namespace cipanova
