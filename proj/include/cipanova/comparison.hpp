#pragma once

#include "cipanova/anova_data.hpp"
#include "cipanova/constraint_model.hpp"
#include "cipanova/evidence.hpp"
#include "cipanova/posterior.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cipanova {

struct ComparisonSettings {
    long prior_draws = 100'000;
    long mcmc_iterations = 55'000;  // includes burn-in
    long burnin = 5'000;
    int quadrature_nodes = 64;
    EvidenceMethod evidence_method = EvidenceMethod::Quadrature;
    long chib_iterations = 20'000;
};

/// Bayes factor of one model against the null, split into its two factors.
struct BfBreakdown {
    std::string model_name;
    double log_bf_e_vs_0 = 0.0;  // encompassing-of-model vs null
    double log_bf_c_vs_e = 0.0;  // model vs its encompassing model
    double log_bf_c_vs_0 = 0.0;  // sum of the two
    std::optional<RegionProbEstimate> prior_region;
    std::optional<RegionProbEstimate> posterior_region;
    std::optional<EvidenceResult> evidence;
    double posterior_acceptance = 0.0;
    /// No posterior draw landed in the region: log_bf_c_vs_e is −∞ and
    /// log_bound bounds it from above.
    bool below_resolution = false;
    double log_bound = 0.0;
};

/// BF of `model` against the null at θ0. The null itself gives (0, 0, 0);
/// equality-only models skip the region factor; otherwise the evidence and both
/// region probabilities come from one shared intrinsic-prior specification.
[[nodiscard]] BfBreakdown bf_k0(const AnovaData& data, const ConstraintModel& model, const NullParams& theta0,
                                const ComparisonSettings& settings, RandomSource& rng);

struct ComparisonReport {
    NullParams theta0;
    std::vector<BfBreakdown> breakdowns;
    std::vector<double> prior_probs;
    std::vector<double> posterior_probs;
    /// log BF relative to `display_reference` (the encompassing model when listed,
    /// otherwise the null).
    std::vector<double> display_log_bf;
    std::string display_reference;

    [[nodiscard]] const BfBreakdown& find(std::string_view name) const;
    [[nodiscard]] std::size_t index_of(std::string_view name) const;
};

/// Posterior model probabilities from log BFs against a common null:
///   P(M_k | y) = (1 + Σ_{l≠k} (p_l/p_k) BF_lk)⁻¹, evaluated in log space.
[[nodiscard]] std::vector<double> posterior_model_probabilities(std::span<const double> log_bf_vs_null,
                                                                std::span<const double> prior_probs);

/// Full comparison on one dataset. θ0 is estimated once (MLE under the null)
/// unless overridden; `prior_probs` empty means uniform. Model k draws from
/// rng.derive(k).
[[nodiscard]] ComparisonReport compare(const AnovaData& data, const std::vector<ConstraintModel>& models,
                                       std::vector<double> prior_probs, const ComparisonSettings& settings,
                                       const RandomSource& rng,
                                       std::optional<NullParams> theta0_override = std::nullopt);

[[nodiscard]] double log_pairwise_bf(const ComparisonReport& report, std::string_view model_l,
                                     std::string_view model_k);
/// BF_lk = BF_l0 / BF_k0.
[[nodiscard]] double pairwise_bf(const ComparisonReport& report, std::string_view model_l,
                                 std::string_view model_k);

}  // namespace cipanova
