#include "cipanova/evidence.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace cipanova;

namespace {

struct Dataset {
    std::vector<double> y;
    std::vector<int> sizes;
};

Dataset synth(const std::vector<double>& means, int nj, double sd, std::uint64_t seed) {
    RandomSource rng(seed);
    Dataset d;
    for (double m : means) {
        for (int i = 0; i < nj; ++i) d.y.push_back(m + sd * rng.normal());
        d.sizes.push_back(nj);
    }
    return d;
}

CipSpec full_spec(const Dataset& d) {
    const int j = static_cast<int>(d.sizes.size());
    return make_cip(encompassing_of(parse_model_spec("", j)), d.sizes);
}

double dense_integrand(double eta, const Dataset& d, const NullParams& t, const CipSpec& spec) {
    // N_n(y | α0·1, σ²I + (σ² + σ0²) Z W⁻¹ Zᵀ) at σ² = σ0²η/(1 − η).
    const double s2 = t.sigma0_sq() * eta / (1 - eta);
    const auto n = static_cast<Eigen::Index>(d.y.size());
    const Matrix cov = s2 * Matrix::Identity(n, n) + (s2 + t.sigma0_sq()) * spec.z() * spec.w_inv() * spec.z().transpose();
    Vector r = Eigen::Map<const Vector>(d.y.data(), n);
    r.array() -= t.alpha0;
    return oracle::dense_mvn_logpdf(r, cov);
}

}  // namespace

TEST_SUITE("evidence") {

TEST_CASE("integrand equals the two-step sigma form") {
    const auto d = synth({0.0, 0.4, 1.0}, 6, 1.0, 3);
    const auto spec = full_spec(d);
    const auto t = estimate_null_params(d.y);
    for (double eta : {0.01, 0.2, 0.5, 0.77, 0.99}) {
        CHECK(integrand_log(eta, d.y, t, spec) == doctest::Approx(dense_integrand(eta, d, t, spec)).epsilon(1e-10));
    }
}

TEST_CASE("integrand on a three-point null design") {
    Dataset d{{0.4, 1.9, -0.3}, {3}};
    const auto spec = make_cip(encompassing_of(parse_model_spec("", 1)), d.sizes);
    const NullParams t{0.5, 1.1};
    CHECK(integrand_log(0.3, d.y, t, spec) == doctest::Approx(dense_integrand(0.3, d, t, spec)).epsilon(1e-12));
    CHECK_THROWS(integrand_log(0.0, d.y, t, spec));
    CHECK_THROWS(integrand_log(1.0, d.y, t, spec));
}

TEST_CASE("integrand shift invariance") {
    auto d = synth({0.0, 1.0}, 5, 1.0, 4);
    const auto spec = full_spec(d);
    const auto t = estimate_null_params(d.y);
    const double before = integrand_log(0.4, d.y, t, spec);
    for (double& v : d.y) v += 7.5;
    CHECK(integrand_log(0.4, d.y, {t.alpha0 + 7.5, t.sigma0}, spec) == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("quadrature matches a brute-force oracle for a null design centred at alpha0") {
    Dataset d{{2.3, 1.7, 2.9, 1.1, 2.0, 2.0, 2.6, 1.4, 2.2, 1.8, 2.5, 1.5}, {12}};
    const auto spec = make_cip(encompassing_of(parse_model_spec("", 1)), d.sizes);
    const NullParams t{2.0, 0.9};
    const auto q = log_marginal_quadrature(d.y, t, spec, 64);
    // η = sin²(πu/2) turns the Beta(1/2,1/2) measure into du on (0, 1).
    const double brute = oracle::log_trapezoid(
        [&](double u) {
            const double eta = std::pow(std::sin(std::numbers::pi * u / 2), 2);
            if (eta <= 1e-300 || eta >= 1.0) return -1e300;
            return integrand_log(eta, d.y, t, spec);
        },
        1e-9, 1.0 - 1e-9, 1000000);
    CHECK(q.log_marginal == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("sigma-form and eta-form evidence agree") {
    const auto d = synth({0.0, 0.5, 1.0, 0.2}, 8, 1.0, 5);
    const auto spec = full_spec(d);
    const auto t = estimate_null_params(d.y);
    // ∫ N(y | ..σ..) · half-Cauchy(σ; σ0) dσ with σ = σ0 tan θ.
    const double sigma_form = oracle::log_trapezoid(
        [&](double th) {
            const double s = t.sigma0 * std::tan(th);
            const double eta = s * s / (s * s + t.sigma0_sq());
            if (eta <= 0.0 || eta >= 1.0) return -1e300;
            const double v = dense_integrand(eta, d, t, spec) + half_cauchy_logpdf(s, t.sigma0) +
                             std::log(t.sigma0 / (std::cos(th) * std::cos(th)));
            // Near θ = 0 the dense covariance is numerically singular; the integrand is negligible there.
            return std::isfinite(v) ? v : -1e300;
        },
        1e-9, std::numbers::pi / 2 - 1e-9, 20000);
    CHECK(log_marginal_quadrature(d.y, t, spec).log_marginal == doctest::Approx(sigma_form).epsilon(1e-6));
    CHECK(log_bf_encompassing_vs_null(d.y, t, spec) ==
          doctest::Approx(sigma_form - EtaIntegrand(d.y, t, spec).log_null_density()).epsilon(1e-6));
}

TEST_CASE("node doubling converges") {
    std::uint64_t seed = 100;
    for (int j : {2, 3, 5}) {
        for (int nj : {5, 20, 50}) {
            const std::vector<double> means{0.0, 0.6, -0.3, 1.0, 0.2};
            const auto d = synth(std::vector<double>(means.begin(), means.begin() + j), nj, 1.0, ++seed);
            const auto spec = full_spec(d);
            const auto q = log_marginal_quadrature(d.y, estimate_null_params(d.y), spec, 64);
            CAPTURE(j);
            CAPTURE(nj);
            CHECK(q.node_doubling_delta < 1e-8);
            CHECK(std::isfinite(q.log_marginal));
        }
    }
    const auto d = synth({0.0, 1.0}, 5, 1.0, 1);
    CHECK_THROWS(log_marginal_quadrature(d.y, estimate_null_params(d.y), full_spec(d), 4));
}

TEST_CASE("scale relation") {
    auto d = synth({0.0, 0.5, 1.0}, 10, 1.0, 6);
    const auto spec = full_spec(d);
    const auto t = estimate_null_params(d.y);
    const double base = log_marginal_quadrature(d.y, t, spec).log_marginal;
    const double c = 3.7;
    for (double& v : d.y) v *= c;
    const double scaled = log_marginal_quadrature(d.y, {c * t.alpha0, c * t.sigma0}, spec).log_marginal;
    CHECK(std::abs(scaled - (base - 30 * std::log(c))) < 1e-9);
}

TEST_CASE("null design far from alpha0 favours the intrinsic model") {
    Dataset d = synth({0.0}, 20, 1.0, 7);
    const auto spec = make_cip(encompassing_of(parse_model_spec("", 1)), d.sizes);
    const NullParams t{0.0, 1.0};
    for (double& v : d.y) v += 5.0;
    CHECK(log_bf_encompassing_vs_null(d.y, t, spec) > 0.0);
}

TEST_CASE("Chib estimator agrees with quadrature and is deterministic") {
    const auto d = synth({0.0, 0.5, 1.0}, 50, 1.0, 8);
    const auto spec = full_spec(d);
    const auto t = estimate_null_params(d.y);
    const auto quad = log_marginal_quadrature(d.y, t, spec);
    RandomSource r1(1), r2(1);
    const auto c1 = log_marginal_chib(d.y, t, spec, 5000, r1);
    const auto c2 = log_marginal_chib(d.y, t, spec, 5000, r2);
    CHECK(c1.log_marginal == c2.log_marginal);
    CHECK(std::abs(c1.log_marginal - quad.log_marginal) < std::max(0.05, 3 * c1.standard_error));
    CHECK(c1.eta_mode == doctest::Approx(quad.eta_mode));
    CHECK(c1.acceptance_rate > 0.0);
    RandomSource r3(1);
    CHECK_THROWS(log_marginal_chib(d.y, t, spec, 999, r3));
}

TEST_CASE("Chib standard error follows the root-N rate") {
    const auto d = synth({0.0, 0.3, 0.8}, 20, 1.0, 9);
    const auto spec = full_spec(d);
    const auto t = estimate_null_params(d.y);
    // Average over a few seeds so the ratio itself is not too noisy.
    double se_n = 0.0, se_4n = 0.0;
    for (std::uint64_t s = 0; s < 4; ++s) {
        RandomSource a(s, 1), b(s, 2);
        se_n += log_marginal_chib(d.y, t, spec, 5000, a).standard_error;
        se_4n += log_marginal_chib(d.y, t, spec, 20000, b).standard_error;
    }
    const double ratio = se_4n / se_n;
    CHECK(ratio > 0.5 / 1.5);
    CHECK(ratio < 0.5 * 1.5);
}

TEST_CASE("evidence method names") {
    CHECK(parse_evidence_method("chib") == EvidenceMethod::Chib);
    CHECK(to_string(EvidenceMethod::Quadrature) == "quadrature");
    CHECK_THROWS(parse_evidence_method("laplace"));
}

}  // TEST_SUITE
