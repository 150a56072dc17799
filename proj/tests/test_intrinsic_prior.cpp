#include "cipanova/intrinsic_prior.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

using namespace cipanova;

namespace {

CipSpec balanced_full(int j, int nj) {
    std::string text;
    for (int g = 1; g <= j; ++g) text += (g > 1 ? ", mu" : "mu") + std::to_string(g);
    const std::vector<int> sizes(static_cast<std::size_t>(j), nj);
    return make_cip(encompassing_of(parse_model_spec(text, j)), sizes);
}

double median_of(std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST_SUITE("intrinsic_prior") {

TEST_CASE("null plug-in is the maximum-likelihood fit") {
    const std::vector<double> y{1.0, 3.0};
    const auto t = estimate_null_params(y);
    CHECK(t.alpha0 == doctest::Approx(2.0));
    CHECK(t.sigma0 == doctest::Approx(1.0));
    const std::vector<double> flat{4.0, 4.0, 4.0};
    CHECK_THROWS_AS(estimate_null_params(flat), DegenerateDataError);
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(estimate_null_params(one), DegenerateDataError);
    const std::vector<double> y2{0.3, -1.0, 2.5, 0.7};
    std::vector<double> shifted = y2;
    for (double& v : shifted) v += 10.0;
    const auto a = estimate_null_params(y2);
    const auto b = estimate_null_params(shifted);
    CHECK(b.alpha0 == doctest::Approx(a.alpha0 + 10.0));
    CHECK(b.sigma0 == doctest::Approx(a.sigma0).epsilon(1e-12));
}

TEST_CASE("W inverse by hand for two singleton groups") {
    const std::vector<int> sizes{1, 1};
    const auto spec = make_cip(encompassing_of(parse_model_spec("mu1, mu2", 2)), sizes);
    Matrix expected(2, 2);
    expected << 1, -1, -1, 2;
    expected *= 2.0 / 3.0;
    CHECK((spec.w_inv() - expected).norm() < 1e-14);
    CHECK((spec.z() * spec.e() - Vector::Ones(2)).norm() == 0.0);
}

TEST_CASE("W inverse of the null design") {
    const std::vector<int> sizes{4, 6, 5};
    const auto spec = make_cip(encompassing_of(parse_model_spec("mu1 = mu2 = mu3", 3)), sizes);
    REQUIRE(spec.q() == 1);
    CHECK(spec.w_inv()(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("balanced full design is exchangeable in the non-baseline groups") {
    const auto spec = balanced_full(5, 7);
    const Matrix& wi = spec.w_inv();
    std::vector<int> perm{1, 2, 3, 4};
    do {
        Eigen::PermutationMatrix<5> p;
        p.indices() << 0, perm[0], perm[1], perm[2], perm[3];
        CHECK((p * wi * p.transpose() - wi).norm() < 1e-12);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("rank-deficient designs are rejected") {
    Matrix z(3, 2);
    z << 1, 1, 1, 1, 1, 1;
    EncompassingDesign d{2, 2, {0, 1}, {2}};
    CHECK_THROWS(CipSpec(d, z));
}

TEST_CASE("prior log-density at the centre") {
    const std::vector<int> sizes{3, 4, 5};
    const auto spec = make_cip(encompassing_of(parse_model_spec("mu1, mu2, mu3", 3)), sizes);
    const NullParams t{1.5, 0.8};
    const Vector center = t.alpha0 * spec.e();
    const double expected =
        -std::log(std::numbers::pi * t.sigma0) + mvn_logpdf(center, center, 2.0 * t.sigma0_sq() * spec.w_inv());
    CHECK(cip_logpdf(center, t.sigma0, t, spec) == doctest::Approx(expected).epsilon(1e-13));

    Vector g(3);
    g << 0.2, -0.4, 1.1;
    const NullParams moved{t.alpha0 + 3.0, t.sigma0};
    CHECK(cip_logpdf(g + 3.0 * spec.e(), 0.6, moved, spec) == doctest::Approx(cip_logpdf(g, 0.6, t, spec)));
}

TEST_CASE("prior integrates to one for q = 1") {
    const std::vector<int> sizes{6, 4};
    const auto spec = make_cip(encompassing_of(parse_model_spec("mu1 = mu2", 2)), sizes);
    const NullParams t{0.4, 1.3};
    // σ = σ0·tan θ maps (0, ∞) to (0, π/2); the half-Cauchy becomes uniform in θ.
    const double total = oracle::midpoint(
        [&](double th) {
            if (th <= 0.0 || th >= std::numbers::pi / 2) return 0.0;
            const double sigma = t.sigma0 * std::tan(th);
            const double jac = t.sigma0 / (std::cos(th) * std::cos(th));
            const double sd = std::sqrt((sigma * sigma + t.sigma0_sq()) * spec.w_inv()(0, 0));
            const double inner = oracle::trapezoid(
                [&](double a) {
                    Vector g(1);
                    g << a;
                    return std::exp(cip_logpdf(g, sigma, t, spec));
                },
                t.alpha0 - 12 * sd, t.alpha0 + 12 * sd, 600);
            return inner * jac;
        },
        0.0, std::numbers::pi / 2, 2000);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("prior draws") {
    const auto spec = balanced_full(5, 25);
    const NullParams t{2.0, 1.5};
    RandomSource rng(17);
    const long T = 100000;
    const auto draws = cip_sample(t, spec, T, rng);
    REQUIRE(draws.size() == T);
    long below = 0;
    for (long i = 0; i < T; ++i) {
        CHECK(draws.sigma2[i] == doctest::Approx(t.sigma0_sq() * draws.eta[i] / (1 - draws.eta[i])).epsilon(1e-12));
        below += draws.sigma2[i] < t.sigma0_sq() ? 1 : 0;
    }
    const double tol = 4.0 * std::sqrt(0.25 / static_cast<double>(T));
    CHECK(std::abs(static_cast<double>(below) / T - 0.5) < tol);
    // γ has Cauchy-like tails (σ is half-Cauchy), so location is checked
    // through medians and sign frequencies rather than the sample mean.
    for (int j = 0; j < 5; ++j) {
        std::vector<double> col(draws.gamma.col(j).data(), draws.gamma.col(j).data() + T);
        long neg = 0;
        const double center = j == 0 ? t.alpha0 : 0.0;
        for (double v : col) neg += v < center ? 1 : 0;
        CAPTURE(j);
        CHECK(std::abs(static_cast<double>(neg) / T - 0.5) < tol);
        CHECK(std::abs(median_of(col) - center) < 0.05);
    }
}

TEST_CASE("balanced full design: the 24 orderings are equiprobable") {
    const auto spec = balanced_full(5, 25);
    RandomSource rng(23);
    const long T = 100000;
    const auto draws = cip_sample({0.0, 1.0}, spec, T, rng);
    std::map<std::vector<int>, long> counts;
    for (long t = 0; t < T; ++t) {
        std::vector<int> idx{1, 2, 3, 4};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return draws.gamma(t, a) < draws.gamma(t, b); });
        ++counts[idx];
    }
    REQUIRE(counts.size() == 24);
    const double expected = static_cast<double>(T) / 24.0;
    double chi2 = 0.0;
    for (const auto& [k, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
    // χ²(23) upper 1% point.
    CHECK(chi2 < 41.638);
}

TEST_CASE("prior draws are affine equivariant") {
    const auto spec = balanced_full(3, 10);
    const NullParams t{1.0, 2.0};
    const double c = 3.0, d = -5.0;
    const NullParams tt{c * t.alpha0 + d, c * t.sigma0};
    RandomSource r1(8), r2(8);
    const auto a = cip_sample(t, spec, 20000, r1);
    const auto b = cip_sample(tt, spec, 20000, r2);
    for (long i = 0; i < a.size(); ++i) {
        Vector expect = c * a.gamma.row(i).transpose();
        expect[0] += d;
        CHECK((b.gamma.row(i).transpose() - expect).norm() < 1e-9 * (1.0 + expect.norm()));
        CHECK(b.sigma2[i] == doctest::Approx(c * c * a.sigma2[i]).epsilon(1e-12));
    }
}

}  // TEST_SUITE
