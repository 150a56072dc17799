#include "cipanova/comparison.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace cipanova {

namespace {

constexpr double kPriorSumTolerance = 1e-9;

}  // namespace

BfBreakdown bf_k0(const AnovaData& data, const ConstraintModel& model, const NullParams& theta0,
                  const ComparisonSettings& settings, RandomSource& rng) {
    if (model.num_groups != data.num_groups()) {
        throw std::invalid_argument("model '" + model.name + "' is defined for " +
                                    std::to_string(model.num_groups) + " groups, data has " +
                                    std::to_string(data.num_groups()));
    }
    BfBreakdown out;
    out.model_name = model.name;
    if (model.is_null()) {
        return out;
    }

    const CipSpec spec = make_cip(encompassing_of(model), data.group_sizes);
    const std::span<const double> y = data.responses;

    const EtaIntegrand integrand(y, theta0, spec);
    if (settings.evidence_method == EvidenceMethod::Chib) {
        RandomSource chib_rng = rng.derive(3);
        out.evidence = log_marginal_chib(y, theta0, spec, settings.chib_iterations, chib_rng);
    } else {
        out.evidence = log_marginal_quadrature(y, theta0, spec, settings.quadrature_nodes);
    }
    out.log_bf_e_vs_0 = out.evidence->log_marginal - integrand.log_null_density();

    if (model.has_inequalities()) {
        RandomSource prior_rng = rng.derive(1);
        RandomSource post_rng = rng.derive(2);
        const PriorDraws prior = cip_sample(theta0, spec, settings.prior_draws, prior_rng);
        const PosteriorDraws post =
            run_posterior_chain(y, theta0, spec, settings.mcmc_iterations, settings.burnin, post_rng);
        out.prior_region = region_prob(prior, model);
        out.posterior_region = region_prob(post, model);
        out.posterior_acceptance = post.acceptance_rate;
        const RegionBayesFactor rbf = log_bf_constrained_vs_encompassing(*out.prior_region, *out.posterior_region);
        out.log_bf_c_vs_e = rbf.log_bf;
        out.below_resolution = rbf.below_resolution;
        out.log_bound = rbf.log_bound;
    }
    out.log_bf_c_vs_0 = out.log_bf_e_vs_0 + out.log_bf_c_vs_e;
    return out;
}

std::vector<double> posterior_model_probabilities(std::span<const double> log_bf_vs_null,
                                                  std::span<const double> prior_probs) {
    const std::size_t k = log_bf_vs_null.size();
    if (prior_probs.size() != k) {
        throw std::invalid_argument("prior probabilities do not match the model count");
    }
    bool any_finite = false;
    for (double v : log_bf_vs_null) {
        any_finite = any_finite || std::isfinite(v);
    }
    if (!any_finite) {
        throw std::runtime_error("no model has a finite Bayes factor");
    }
    std::vector<double> out(k);
    std::vector<double> terms;
    terms.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (log_bf_vs_null[i] == -std::numeric_limits<double>::infinity()) {
            out[i] = 0.0;
            continue;
        }
        terms.assign(1, 0.0);
        for (std::size_t l = 0; l < k; ++l) {
            if (l != i) {
                terms.push_back(std::log(prior_probs[l]) - std::log(prior_probs[i]) + log_bf_vs_null[l] -
                                log_bf_vs_null[i]);
            }
        }
        out[i] = std::exp(-log_sum_exp(terms));
    }
    return out;
}

const BfBreakdown& ComparisonReport::find(std::string_view name) const { return breakdowns[index_of(name)]; }

std::size_t ComparisonReport::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < breakdowns.size(); ++i) {
        if (breakdowns[i].model_name == name) {
            return i;
        }
    }
    throw std::invalid_argument("unknown model '" + std::string(name) + "'");
}

ComparisonReport compare(const AnovaData& data, const std::vector<ConstraintModel>& models,
                         std::vector<double> prior_probs, const ComparisonSettings& settings,
                         const RandomSource& rng, std::optional<NullParams> theta0_override) {
    if (models.empty()) {
        throw std::invalid_argument("no models to compare");
    }
    std::set<std::string> names;
    for (const auto& m : models) {
        if (!names.insert(m.name).second) {
            throw std::invalid_argument("duplicate model name '" + m.name + "'");
        }
    }
    if (prior_probs.empty()) {
        prior_probs.assign(models.size(), 1.0 / static_cast<double>(models.size()));
    }
    if (prior_probs.size() != models.size()) {
        throw std::invalid_argument("got " + std::to_string(prior_probs.size()) + " prior probabilities for " +
                                    std::to_string(models.size()) + " models");
    }
    double total = 0.0;
    for (double p : prior_probs) {
        if (!(p > 0.0)) {
            throw std::invalid_argument("prior model probabilities must be positive");
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kPriorSumTolerance) {
        throw std::invalid_argument("prior model probabilities must sum to 1");
    }

    ComparisonReport report;
    report.theta0 = theta0_override ? *theta0_override : estimate_null_params(data.responses);
    report.prior_probs = std::move(prior_probs);
    std::vector<double> log_bfs;
    for (std::size_t k = 0; k < models.size(); ++k) {
        RandomSource model_rng = rng.derive(k);
        report.breakdowns.push_back(bf_k0(data, models[k], report.theta0, settings, model_rng));
        log_bfs.push_back(report.breakdowns.back().log_bf_c_vs_0);
    }
    report.posterior_probs = posterior_model_probabilities(log_bfs, report.prior_probs);

    double reference = 0.0;
    report.display_reference = "null";
    for (std::size_t k = 0; k < models.size(); ++k) {
        if (models[k].is_encompassing()) {
            reference = log_bfs[k];
            report.display_reference = models[k].name;
            break;
        }
    }
    for (double v : log_bfs) {
        report.display_log_bf.push_back(v - reference);
    }
    return report;
}

double log_pairwise_bf(const ComparisonReport& report, std::string_view model_l, std::string_view model_k) {
    return report.find(model_l).log_bf_c_vs_0 - report.find(model_k).log_bf_c_vs_0;
}

double pairwise_bf(const ComparisonReport& report, std::string_view model_l, std::string_view model_k) {
    return std::exp(log_pairwise_bf(report, model_l, model_k));
}

}  // namespace cipanova
