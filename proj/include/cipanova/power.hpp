#pragma once

#include <string>
#include <vector>

namespace cipanova {

/// Probability that the 95%-style interval D ± z·sd for a difference of two
/// group means excludes zero when the true difference is delta:
///   P{Z > (z·sd − Δ)/sd},  sd = √(σ1²/n1 + σ2²/n2).
[[nodiscard]] double difference_power(double delta, double sigma1, double sigma2, int n1, int n2,
                                      double z_crit = 1.96);

struct PowerRow {
    std::string label;
    int n_per_group = 0;
    double delta = 0.0;
    double sd = 0.0;
    double power = 0.0;
};

/// One row per (delta, n) with equal σ and group sizes. `labels`, if given,
/// names each delta.
[[nodiscard]] std::vector<PowerRow> power_table(const std::vector<double>& deltas, double sigma,
                                                const std::vector<int>& n_per_group, double z_crit = 1.96,
                                                const std::vector<std::string>& labels = {});

/// The adjacent-mean spacings 0.2 / 0.3 / 0.4 of populations 2s / 2m / 2l at
/// σ = 1 and n_j ∈ {25, 50}.
[[nodiscard]] std::vector<PowerRow> default_power_table();

}  // namespace cipanova
