#pragma once

#include "cipanova/anova_data.hpp"
#include "cipanova/constraint_model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cipanova {

/// A data-generating design: y_ij = μ_j + σ_j·z with z standard normal.
struct SimScenario {
    std::string name;
    std::vector<double> means;
    std::vector<double> sds;
    int n_per_group = 25;
    std::string true_model;
    long replications = 50;
    std::uint64_t base_seed = 1;

    [[nodiscard]] int num_groups() const { return static_cast<int>(means.size()); }
    /// Largest over smallest group variance.
    [[nodiscard]] double heteroscedasticity_ratio() const;
};

/// A named model given as constraint text.
struct ModelDef {
    std::string name;
    std::string spec;
};

[[nodiscard]] std::vector<ConstraintModel> parse_models(const std::vector<ModelDef>& defs, int num_groups);

/// Built-in presets.
///   Homoscedastic populations: pop1, pop2s, pop2m, pop2l, pop3.
///   Heteroscedastic grid: ex2-pop{1,2s,2m,2l}-F{1,11,25}, where F is the
///   ratio of the largest to the smallest group variance.
[[nodiscard]] std::vector<std::string> preset_names();
[[nodiscard]] SimScenario preset_scenario(const std::string& name, int n_per_group = 25, long replications = 50,
                                          std::uint64_t base_seed = 1);
/// Default competing models of a preset. The heteroscedastic grid compares
/// M0, M2 and the unconstrained model (labelled Me).
[[nodiscard]] std::vector<ModelDef> preset_models(const std::string& name);

/// Replication r of a scenario, from the data stream of (base_seed, r).
[[nodiscard]] AnovaData generate_scenario(const SimScenario& scenario, long replication);

}  // namespace cipanova
