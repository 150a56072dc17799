#pragma once

#include "cipanova/intrinsic_prior.hpp"

#include <span>
#include <string_view>

namespace cipanova {

enum class EvidenceMethod { Quadrature, Chib };

[[nodiscard]] std::string_view to_string(EvidenceMethod method);
/// Accepts "quadrature" or "chib".
[[nodiscard]] EvidenceMethod parse_evidence_method(std::string_view text);

struct EvidenceResult {
    double log_marginal = 0.0;
    EvidenceMethod method = EvidenceMethod::Quadrature;
    long nodes_or_iters = 0;
    /// Mode of the η posterior (always located, both methods).
    double eta_mode = 0.0;
    /// Chib only: delta-method standard error of log_marginal.
    double standard_error = 0.0;
    /// Chib only: acceptance rate of the η independence chain.
    double acceptance_rate = 0.0;
    /// Quadrature only: |result(nodes) − result(2·nodes)|.
    double node_doubling_delta = 0.0;
};

/// log N_n(y | α0·1_n, σ0²/(1 − η)·(η·I_n + Z W⁻¹ Zᵀ)) as a function of η,
/// i.e. the likelihood with γ integrated out under the intrinsic prior.
///
/// `y` must be ordered like the rows of the design (group 1 units first).
class EtaIntegrand {
public:
    EtaIntegrand(std::span<const double> y, const NullParams& theta0, const CipSpec& spec);

    [[nodiscard]] double operator()(double eta) const;
    /// log N_n(y | α0·1_n, σ0²·I_n): the null model's density at θ0.
    [[nodiscard]] double log_null_density() const;
    /// Unnormalized log posterior of η: integrand plus the Beta(1/2,1/2) prior.
    [[nodiscard]] double log_posterior(double eta) const;

private:
    NullParams theta0_;
    const CipSpec* spec_;
    ResidualStats stats_;
};

[[nodiscard]] double integrand_log(double eta, std::span<const double> y, const NullParams& theta0,
                                   const CipSpec& spec);

/// Maximizer of EtaIntegrand::log_posterior: argmax over a 129-point grid,
/// then golden-section refinement inside the neighbouring grid cells.
/// Throws std::runtime_error if the maximum sits at the (0, 1) boundary.
[[nodiscard]] double eta_posterior_mode(const EtaIntegrand& integrand);

/// log m(y | α0, σ0, M) by Gauss–Jacobi quadrature against the Beta(1/2,1/2)
/// weight η^−½(1 − η)^−½ / π; the rule is also run at 2·nodes for the
/// self-convergence diagnostic.
[[nodiscard]] EvidenceResult log_marginal_quadrature(std::span<const double> y, const NullParams& theta0,
                                                     const CipSpec& spec, int nodes = 64);

/// Chib–Jeliazkov estimate of the same quantity from an independence
/// Metropolis–Hastings chain on η with the Beta(1/2,1/2) prior as proposal.
/// N burn-in iterations from the mode, then N posterior draws and N proposal
/// draws feed the two averages of the posterior-ordinate estimate.
[[nodiscard]] EvidenceResult log_marginal_chib(std::span<const double> y, const NullParams& theta0,
                                               const CipSpec& spec, long iterations, RandomSource& rng);

/// log BF of the encompassing model against the null at θ0, using quadrature.
[[nodiscard]] double log_bf_encompassing_vs_null(std::span<const double> y, const NullParams& theta0,
                                                 const CipSpec& spec, int nodes = 64);

}  // namespace cipanova
