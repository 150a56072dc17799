#pragma once

#include "cipanova/comparison.hpp"
#include "cipanova/scenarios.hpp"

#include <atomic>
#include <functional>
#include <string>
#include <vector>

namespace cipanova {

/// Outcome of one simulated dataset.
struct ReplicationRecord {
    std::string scenario;
    std::uint64_t seed = 0;
    long replication = 0;
    int n_per_group = 0;
    ComparisonReport report;
    std::string top_model;
    double correct_model_pmp = 0.0;
};

/// Per-model share of replications in which the model had the largest
/// posterior probability, and the median posterior probability of the true model.
struct SummaryTable {
    std::string scenario;
    int n_per_group = 0;
    std::string true_model;
    long replications = 0;  // completed
    std::vector<std::string> model_names;
    std::vector<double> top_percent;
    double median_correct_pmp = 0.0;

    [[nodiscard]] double percent_for(const std::string& model) const;
};

struct SimulationOptions {
    int jobs = 1;
    /// Called once per replication, in replication order, from the thread
    /// that completes the in-order prefix.
    std::function<void(const ReplicationRecord&)> on_record;
    /// Set to stop scheduling new replications; finished ones are still reported.
    const std::atomic<bool>* cancel = nullptr;
};

[[nodiscard]] ReplicationRecord run_replication(const SimScenario& scenario, const std::vector<ConstraintModel>& models,
                                                const ComparisonSettings& settings, long replication);

/// Generates, compares and aggregates every replication of the scenario.
/// Results depend only on (scenario, models, settings), not on `jobs`.
[[nodiscard]] SummaryTable run_simulation_study(const SimScenario& scenario, const std::vector<ConstraintModel>& models,
                                                const ComparisonSettings& settings,
                                                const SimulationOptions& options = {});

[[nodiscard]] SummaryTable summarize(const SimScenario& scenario, const std::vector<ConstraintModel>& models,
                                     const std::vector<ReplicationRecord>& records);

}  // namespace cipanova
