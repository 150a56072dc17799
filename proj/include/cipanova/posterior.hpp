#pragma once

#include "cipanova/intrinsic_prior.hpp"

#include <cmath>
#include <span>
#include <stdexcept>

namespace cipanova {

/// Gaussian full conditional of γ given σ²:
///   Σ_γ = (λ·W/(σ² + σ0²) + ZᵀZ/σ²)⁻¹,  μ_γ = Σ_γ(λ·W α0 e/(σ² + σ0²) + Zᵀy/σ²).
/// λ = `prior_weight` is 1 for the model; 0 gives the flat-prior (least-squares) limit.
struct GammaConditional {
    Vector mean;
    Matrix cov;
};

[[nodiscard]] GammaConditional gamma_full_conditional(double sigma2, std::span<const double> y,
                                                      const NullParams& theta0, const CipSpec& spec,
                                                      double prior_weight = 1.0);

/// Unnormalized log full conditional of η given γ (Beta(1/2,1/2) prior included):
///   −(n+1)/2·log η + (n+q−1)/2·log(1−η) − (1−η)(C/η + D)/(2σ0²),
/// C = ‖y − Zγ‖², D = (γ − α0e)ᵀW(γ − α0e).
[[nodiscard]] double eta_conditional_logpdf(double eta, double c, double d, Eigen::Index n, Eigen::Index q,
                                            double sigma0_sq);

/// One Metropolis–Hastings update with an independence proposal.
/// `log_target` and `log_proposal` may be unnormalized.
template <class State, class LogTarget, class Propose, class LogProposal>
State metropolis_hastings_step(const State& current, LogTarget&& log_target, Propose&& propose,
                               LogProposal&& log_proposal, RandomSource& rng, bool* accepted = nullptr) {
    const State candidate = propose(rng);
    const double log_ratio = (log_target(candidate) - log_proposal(candidate)) -
                             (log_target(current) - log_proposal(current));
    const bool accept = std::log(rng.uniform()) < log_ratio;
    if (accepted != nullptr) {
        *accepted = accept;
    }
    return accept ? candidate : current;
}

/// Data-side terms of the conditional intrinsic posterior, computed once per
/// dataset and design and reused by every sweep.
class PosteriorKernel {
public:
    PosteriorKernel(std::span<const double> y, const NullParams& theta0, const CipSpec& spec);

    /// C(γ) = ‖y − Zγ‖².
    [[nodiscard]] double residual_ss(const Vector& gamma) const;
    /// D(γ) = (γ − α0e)ᵀ W (γ − α0e).
    [[nodiscard]] double prior_quadratic(const Vector& gamma) const;
    [[nodiscard]] double log_eta_conditional(double eta, const Vector& gamma) const;
    /// Exact draw of γ from its full conditional at σ².
    [[nodiscard]] Vector sample_gamma(double sigma2, RandomSource& rng) const;

    [[nodiscard]] const NullParams& theta0() const { return theta0_; }
    [[nodiscard]] const CipSpec& spec() const { return *spec_; }

private:
    NullParams theta0_;
    const CipSpec* spec_;
    ResidualStats stats_;  // against r = y − α0·1_n
};

/// η-update of the Gibbs sweep: independence proposal from Beta(1/2,1/2).
[[nodiscard]] double eta_metropolis_step(double eta_current, const Vector& gamma, std::span<const double> y,
                                         const NullParams& theta0, const CipSpec& spec, RandomSource& rng);

struct PosteriorDraws {
    Matrix gamma;  // kept × q
    Vector eta;
    double acceptance_rate = 0.0;
    long burnin = 0;

    [[nodiscard]] Eigen::Index size() const { return gamma.rows(); }
};

/// Metropolis-within-Gibbs on (η, γ): η by eta_metropolis_step, then γ from its
/// Gaussian full conditional. `iterations` includes the `burnin` discarded sweeps.
[[nodiscard]] PosteriorDraws run_posterior_chain(std::span<const double> y, const NullParams& theta0,
                                                 const CipSpec& spec, long iterations, long burnin,
                                                 RandomSource& rng);

enum class DrawSide { Prior, Posterior };

struct RegionProbEstimate {
    double estimate = 0.0;
    long hits = 0;
    long total = 0;
    DrawSide side = DrawSide::Prior;
};

/// Fraction of draws whose δ lies in the model's inequality region.
[[nodiscard]] RegionProbEstimate region_prob(const PriorDraws& draws, const ConstraintModel& model);
[[nodiscard]] RegionProbEstimate region_prob(const PosteriorDraws& draws, const ConstraintModel& model);

/// Zero prior hits: the prior sample is too small to resolve the region.
class InsufficientDrawsError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RegionBayesFactor {
    /// log(posterior fraction) − log(prior fraction); −∞ when no posterior draw hit.
    double log_bf = 0.0;
    bool below_resolution = false;
    /// With below_resolution: log(1/(total + 1)) − log(prior fraction), an upper bound.
    double log_bound = 0.0;
};

[[nodiscard]] RegionBayesFactor log_bf_constrained_vs_encompassing(const RegionProbEstimate& prior_est,
                                                                   const RegionProbEstimate& post_est);

}  // namespace cipanova
