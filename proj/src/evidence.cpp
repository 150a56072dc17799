#include "cipanova/evidence.hpp"

#include "cipanova/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

namespace cipanova {

namespace {

const QuadratureRule& arcsine_rule(int nodes) {
    static std::mutex mutex;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(nodes);
    if (it == cache.end()) {
        it = cache.emplace(nodes, gauss_jacobi_unit(nodes, -0.5, -0.5)).first;
    }
    return it->second;
}

double quadrature_log_marginal(const EtaIntegrand& integrand, int nodes) {
    const QuadratureRule& rule = arcsine_rule(nodes);
    std::vector<double> terms(rule.nodes.size());
    for (std::size_t k = 0; k < terms.size(); ++k) {
        const double value = integrand(rule.nodes[k]);
        if (!std::isfinite(value)) {
            throw std::runtime_error("evidence integrand is not finite at eta = " +
                                     std::to_string(rule.nodes[k]));
        }
        terms[k] = std::log(rule.weights[k]) + value;
    }
    // The rule integrates against η^−½(1 − η)^−½; Beta(1/2,1/2) divides that by π.
    return log_sum_exp(terms) - std::log(std::numbers::pi);
}

struct MeanAndVariance {
    double mean;
    double variance_of_mean;
};

MeanAndVariance iid_mean(const std::vector<double>& v) {
    const auto n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= n;
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, ss / (n - 1.0) / n};
}

MeanAndVariance batch_mean(const std::vector<double>& v, int batches) {
    const std::size_t per_batch = v.size() / static_cast<std::size_t>(batches);
    std::vector<double> means(static_cast<std::size_t>(batches), 0.0);
    for (int b = 0; b < batches; ++b) {
        for (std::size_t i = 0; i < per_batch; ++i) {
            means[b] += v[b * per_batch + i];
        }
        means[b] /= static_cast<double>(per_batch);
    }
    double mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double m : means) {
        ss += (m - mean) * (m - mean);
    }
    return {mean, ss / (batches - 1.0) / batches};
}

}  // namespace

std::string_view to_string(EvidenceMethod method) {
    return method == EvidenceMethod::Chib ? "chib" : "quadrature";
}

EvidenceMethod parse_evidence_method(std::string_view text) {
    if (text == "quadrature") {
        return EvidenceMethod::Quadrature;
    }
    if (text == "chib") {
        return EvidenceMethod::Chib;
    }
    throw std::invalid_argument("unknown evidence method '" + std::string(text) + "'");
}

EtaIntegrand::EtaIntegrand(std::span<const double> y, const NullParams& theta0, const CipSpec& spec)
    : theta0_(theta0), spec_(&spec) {
    if (static_cast<Eigen::Index>(y.size()) != spec.n()) {
        throw std::invalid_argument("response length does not match the design");
    }
    if (!(theta0.sigma0 > 0.0)) {
        throw std::domain_error("sigma0 must be positive");
    }
    std::vector<double> r(y.begin(), y.end());
    for (double& v : r) {
        v -= theta0.alpha0;
    }
    stats_ = residual_stats(spec.z(), r);
}

double EtaIntegrand::operator()(double eta) const {
    if (!(eta > 0.0) || !(eta < 1.0)) {
        throw std::domain_error("eta must lie strictly inside (0, 1)");
    }
    const double s2 = theta0_.sigma0_sq();
    const LowRankGaussian gaussian{s2 * eta / (1.0 - eta), s2 / (1.0 - eta), &spec_->factors()};
    return gaussian.logpdf(stats_);
}

double EtaIntegrand::log_null_density() const {
    const auto n = static_cast<double>(stats_.n);
    const double s2 = theta0_.sigma0_sq();
    return -0.5 * n * std::log(2.0 * std::numbers::pi * s2) - 0.5 * stats_.rtr / s2;
}

double EtaIntegrand::log_posterior(double eta) const { return (*this)(eta) + arcsine_logpdf(eta); }

double integrand_log(double eta, std::span<const double> y, const NullParams& theta0, const CipSpec& spec) {
    return EtaIntegrand(y, theta0, spec)(eta);
}

namespace {

double locate_mode(const EtaIntegrand& integrand) {
    constexpr int kGrid = 129;
    auto grid = [](int i) { return static_cast<double>(i) / (kGrid + 1); };
    int best = 1;
    double best_value = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= kGrid; ++i) {
        const double v = integrand.log_posterior(grid(i));
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    double lo = grid(best - 1);
    double hi = grid(best + 1);
    const double edge = 1e-12;
    lo = std::max(lo, edge);
    hi = std::min(hi, 1.0 - edge);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = integrand.log_posterior(x1);
    double f2 = integrand.log_posterior(x2);
    while (hi - lo > 1e-12) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = integrand.log_posterior(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = integrand.log_posterior(x1);
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double eta_posterior_mode(const EtaIntegrand& integrand) {
    const double mode = locate_mode(integrand);
    if (mode < 1e-9 || mode > 1.0 - 1e-9) {
        throw std::runtime_error("eta posterior mode lies on the boundary of (0, 1)");
    }
    return mode;
}

EvidenceResult log_marginal_quadrature(std::span<const double> y, const NullParams& theta0,
                                       const CipSpec& spec, int nodes) {
    if (nodes < 8) {
        throw std::invalid_argument("quadrature needs at least 8 nodes");
    }
    const EtaIntegrand integrand(y, theta0, spec);
    EvidenceResult result;
    result.method = EvidenceMethod::Quadrature;
    result.nodes_or_iters = nodes;
    result.log_marginal = quadrature_log_marginal(integrand, nodes);
    result.node_doubling_delta =
        std::abs(result.log_marginal - quadrature_log_marginal(integrand, 2 * nodes));
    result.eta_mode = locate_mode(integrand);
    return result;
}

EvidenceResult log_marginal_chib(std::span<const double> y, const NullParams& theta0, const CipSpec& spec,
                                 long iterations, RandomSource& rng) {
    if (iterations < 1000) {
        throw std::invalid_argument("Chib estimator needs at least 1000 iterations");
    }
    const EtaIntegrand integrand(y, theta0, spec);
    const double eta_star = eta_posterior_mode(integrand);
    const double ell_star = integrand(eta_star);

    // Independence chain targeting the γ-integrated η posterior; with the prior
    // as proposal the MH ratio reduces to the likelihood ratio.
    double ell = ell_star;
    long accepted = 0;
    std::vector<double> numerator;
    numerator.reserve(static_cast<std::size_t>(iterations));
    for (long it = 0; it < 2 * iterations; ++it) {
        const double proposal = sample_arcsine(rng);
        const double ell_prop = integrand(proposal);
        if (std::log(rng.uniform()) < ell_prop - ell) {
            ell = ell_prop;
            ++accepted;
        }
        if (it >= iterations) {
            numerator.push_back(std::min(1.0, std::exp(ell_star - ell)));
        }
    }
    if (accepted == 0) {
        throw std::runtime_error("Chib chain accepted no proposals");
    }
    std::vector<double> denominator(static_cast<std::size_t>(iterations));
    for (double& a : denominator) {
        const double proposal = sample_arcsine(rng);
        a = std::min(1.0, std::exp(integrand(proposal) - ell_star));
    }

    const auto num = batch_mean(numerator, 50);
    const auto den = iid_mean(denominator);
    if (!(num.mean > 0.0) || !(den.mean > 0.0)) {
        throw std::runtime_error("Chib posterior-ordinate estimate degenerated to zero");
    }
    const double log_prior_star = arcsine_logpdf(eta_star);
    const double log_ordinate = std::log(num.mean) + log_prior_star - std::log(den.mean);

    EvidenceResult result;
    result.method = EvidenceMethod::Chib;
    result.nodes_or_iters = iterations;
    result.eta_mode = eta_star;
    result.log_marginal = ell_star + log_prior_star - log_ordinate;
    result.standard_error = std::sqrt(num.variance_of_mean / (num.mean * num.mean) +
                                      den.variance_of_mean / (den.mean * den.mean));
    result.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(2 * iterations);
    return result;
}

double log_bf_encompassing_vs_null(std::span<const double> y, const NullParams& theta0, const CipSpec& spec,
                                   int nodes) {
    const EtaIntegrand integrand(y, theta0, spec);
    return quadrature_log_marginal(integrand, nodes) - integrand.log_null_density();
}

}  // namespace cipanova
