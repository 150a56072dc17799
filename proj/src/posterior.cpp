#include "cipanova/posterior.hpp"

#include <limits>
#include <vector>

namespace cipanova {

namespace {

std::vector<double> centered(std::span<const double> y, double alpha0) {
    std::vector<double> r(y.begin(), y.end());
    for (double& v : r) {
        v -= alpha0;
    }
    return r;
}

template <class Draws>
RegionProbEstimate count_region(const Draws& draws, const ConstraintModel& model, DrawSide side) {
    const Eigen::Index total = draws.gamma.rows();
    const Eigen::Index q = draws.gamma.cols();
    if (total == 0) {
        throw std::invalid_argument("region probability needs at least one draw");
    }
    if (q != model.num_classes()) {
        throw std::invalid_argument("draw dimension does not match the model's collapsed space");
    }
    long hits = 0;
    if (!model.has_inequalities()) {
        hits = static_cast<long>(total);
    } else {
        std::vector<double> delta(static_cast<std::size_t>(q - 1));
        for (Eigen::Index t = 0; t < total; ++t) {
            for (Eigen::Index j = 1; j < q; ++j) {
                delta[j - 1] = draws.gamma(t, j);
            }
            hits += region_contains(model, delta) ? 1 : 0;
        }
    }
    return {static_cast<double>(hits) / static_cast<double>(total), hits, static_cast<long>(total), side};
}

}  // namespace

GammaConditional gamma_full_conditional(double sigma2, std::span<const double> y, const NullParams& theta0,
                                        const CipSpec& spec, double prior_weight) {
    if (!(sigma2 > 0.0)) {
        throw std::domain_error("sigma^2 must be positive");
    }
    if (static_cast<Eigen::Index>(y.size()) != spec.n()) {
        throw std::invalid_argument("response length does not match the design");
    }
    const Eigen::Map<const Vector> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    const double prior_scale = sigma2 + theta0.sigma0_sq();
    const Matrix precision = prior_weight * spec.w() / prior_scale + spec.ztz() / sigma2;
    Eigen::LLT<Matrix> llt(precision);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite("gamma full-conditional precision is not positive definite");
    }
    GammaConditional out;
    out.cov = llt.solve(Matrix::Identity(spec.q(), spec.q()));
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    const Vector rhs = prior_weight * spec.w() * (theta0.alpha0 * spec.e()) / prior_scale +
                       spec.z().transpose() * yv / sigma2;
    out.mean = llt.solve(rhs);
    return out;
}

double eta_conditional_logpdf(double eta, double c, double d, Eigen::Index n, Eigen::Index q,
                              double sigma0_sq) {
    if (!(eta > 0.0) || !(eta < 1.0)) {
        return -std::numeric_limits<double>::infinity();
    }
    const auto nn = static_cast<double>(n);
    const auto qq = static_cast<double>(q);
    return -0.5 * (nn + 1.0) * std::log(eta) + 0.5 * (nn + qq - 1.0) * std::log1p(-eta) -
           (1.0 - eta) * (c / eta + d) / (2.0 * sigma0_sq);
}

PosteriorKernel::PosteriorKernel(std::span<const double> y, const NullParams& theta0, const CipSpec& spec)
    : theta0_(theta0), spec_(&spec) {
    if (static_cast<Eigen::Index>(y.size()) != spec.n()) {
        throw std::invalid_argument("response length does not match the design");
    }
    stats_ = residual_stats(spec.z(), centered(y, theta0.alpha0));
}

double PosteriorKernel::residual_ss(const Vector& gamma) const {
    // y − Zγ = r − Z(γ − α0e) because Ze = 1_n.
    Vector g = gamma;
    g[0] -= theta0_.alpha0;
    return std::max(0.0, stats_.rtr - 2.0 * g.dot(stats_.ztr) + g.dot(spec_->ztz() * g));
}

double PosteriorKernel::prior_quadratic(const Vector& gamma) const {
    Vector g = gamma;
    g[0] -= theta0_.alpha0;
    return g.dot(spec_->w() * g);
}

double PosteriorKernel::log_eta_conditional(double eta, const Vector& gamma) const {
    return eta_conditional_logpdf(eta, residual_ss(gamma), prior_quadratic(gamma), stats_.n, spec_->q(),
                                  theta0_.sigma0_sq());
}

Vector PosteriorKernel::sample_gamma(double sigma2, RandomSource& rng) const {
    const Eigen::Index q = spec_->q();
    const Matrix precision = spec_->w() / (sigma2 + theta0_.sigma0_sq()) + spec_->ztz() / sigma2;
    Eigen::LLT<Matrix> llt(precision);
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite("gamma full-conditional precision is not positive definite");
    }
    Vector z(q);
    for (Eigen::Index i = 0; i < q; ++i) {
        z[i] = rng.normal();
    }
    // Centered mean Σ Zᵀr/σ²; the noise Σ^{1/2}z solves Lᵀx = z.
    Vector gamma = llt.solve(stats_.ztr / sigma2);
    gamma += llt.matrixU().solve(z);
    gamma[0] += theta0_.alpha0;
    return gamma;
}

double eta_metropolis_step(double eta_current, const Vector& gamma, std::span<const double> y,
                           const NullParams& theta0, const CipSpec& spec, RandomSource& rng) {
    const PosteriorKernel kernel(y, theta0, spec);
    return metropolis_hastings_step(
        eta_current, [&](double eta) { return kernel.log_eta_conditional(eta, gamma); },
        [](RandomSource& r) { return sample_arcsine(r); }, [](double eta) { return arcsine_logpdf(eta); },
        rng);
}

PosteriorDraws run_posterior_chain(std::span<const double> y, const NullParams& theta0, const CipSpec& spec,
                                   long iterations, long burnin, RandomSource& rng) {
    if (burnin < 0 || iterations <= burnin) {
        throw std::invalid_argument("posterior chain needs iterations > burnin >= 0");
    }
    const PosteriorKernel kernel(y, theta0, spec);
    const double s2 = theta0.sigma0_sq();
    const long kept = iterations - burnin;
    PosteriorDraws draws{Matrix(kept, spec.q()), Vector(kept), 0.0, burnin};

    double eta = 0.5;
    Vector gamma = kernel.sample_gamma(sigma2_from_eta(eta, s2), rng);
    long accepted = 0;
    auto log_target = [&](double e, double c, double d) {
        return eta_conditional_logpdf(e, c, d, spec.n(), spec.q(), s2);
    };
    for (long it = 0; it < iterations; ++it) {
        const double c = kernel.residual_ss(gamma);
        const double d = kernel.prior_quadratic(gamma);
        bool accept = false;
        eta = metropolis_hastings_step(
            eta, [&](double e) { return log_target(e, c, d); }, [](RandomSource& r) { return sample_arcsine(r); },
            [](double e) { return arcsine_logpdf(e); }, rng, &accept);
        accepted += accept ? 1 : 0;
        gamma = kernel.sample_gamma(sigma2_from_eta(eta, s2), rng);
        if (it >= burnin) {
            const long t = it - burnin;
            draws.gamma.row(t) = gamma.transpose();
            draws.eta[t] = eta;
        }
    }
    draws.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(iterations);
    return draws;
}

RegionProbEstimate region_prob(const PriorDraws& draws, const ConstraintModel& model) {
    return count_region(draws, model, DrawSide::Prior);
}

RegionProbEstimate region_prob(const PosteriorDraws& draws, const ConstraintModel& model) {
    return count_region(draws, model, DrawSide::Posterior);
}

RegionBayesFactor log_bf_constrained_vs_encompassing(const RegionProbEstimate& prior_est,
                                                     const RegionProbEstimate& post_est) {
    if (prior_est.hits <= 0) {
        throw InsufficientDrawsError("no prior draw fell in the inequality region; increase the prior draw count (" +
                                     std::to_string(prior_est.total) + " used)");
    }
    RegionBayesFactor out;
    const double log_prior = std::log(prior_est.estimate);
    if (post_est.hits == 0) {
        out.log_bf = -std::numeric_limits<double>::infinity();
        out.below_resolution = true;
        out.log_bound = -std::log(static_cast<double>(post_est.total) + 1.0) - log_prior;
        return out;
    }
    out.log_bf = std::log(post_est.estimate) - log_prior;
    return out;
}

}  // namespace cipanova
