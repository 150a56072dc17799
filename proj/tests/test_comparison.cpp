#include "cipanova/comparison.hpp"
#include "cipanova/scenarios.hpp"

#include <doctest.h>

#include <cmath>

using namespace cipanova;

namespace {

ComparisonSettings quick() {
    ComparisonSettings s;
    s.prior_draws = 20000;
    s.mcmc_iterations = 11000;
    s.burnin = 1000;
    return s;
}

std::vector<ConstraintModel> ex1_models() { return parse_models(preset_models("pop3"), 5); }

// p_k BF_k0 / Σ_l p_l BF_l0, evaluated with the largest term factored out.
std::vector<double> direct_pmp(const std::vector<double>& log_bf, const std::vector<double>& prior) {
    double m = -INFINITY;
    for (std::size_t i = 0; i < log_bf.size(); ++i) m = std::max(m, std::log(prior[i]) + log_bf[i]);
    double z = 0.0;
    std::vector<double> out(log_bf.size());
    for (std::size_t i = 0; i < log_bf.size(); ++i) {
        out[i] = std::exp(std::log(prior[i]) + log_bf[i] - m);
        z += out[i];
    }
    for (double& v : out) v /= z;
    return out;
}

}  // namespace

TEST_SUITE("comparison") {

TEST_CASE("null and encompassing breakdowns") {
    const auto data = generate_scenario(preset_scenario("pop3", 10, 1, 2), 0);
    const auto models = ex1_models();
    const auto t = estimate_null_params(data.responses);
    RandomSource rng(1);
    const auto b0 = bf_k0(data, models[0], t, quick(), rng);
    CHECK(b0.log_bf_e_vs_0 == 0.0);
    CHECK(b0.log_bf_c_vs_e == 0.0);
    CHECK(b0.log_bf_c_vs_0 == 0.0);
    const auto be = bf_k0(data, models[3], t, quick(), rng);
    CHECK(be.log_bf_c_vs_e == 0.0);
    CHECK(be.log_bf_c_vs_0 == be.log_bf_e_vs_0);
    CHECK_FALSE(be.prior_region.has_value());
    const auto b3 = bf_k0(data, models[2], t, quick(), rng);
    CHECK(b3.log_bf_c_vs_0 == b3.log_bf_e_vs_0 + b3.log_bf_c_vs_e);
    CHECK(b3.prior_region.has_value());
    CHECK(b3.posterior_region.has_value());
    const auto wrong = parse_model_spec("mu1 < mu2", 2);
    CHECK_THROWS(bf_k0(data, wrong, t, quick(), rng));
}

TEST_CASE("M3 beats the null on population-3 data") {
    const auto scenario = preset_scenario("pop3", 25, 20, 41);
    const auto models = ex1_models();
    int positive = 0;
    for (long r = 0; r < 20; ++r) {
        const auto data = generate_scenario(scenario, r);
        RandomSource rng(41, 1000 + static_cast<std::uint64_t>(r));
        positive += bf_k0(data, models[2], estimate_null_params(data.responses), {}, rng).log_bf_c_vs_0 > 0 ? 1 : 0;
    }
    CHECK(positive >= 18);
}

TEST_CASE("posterior model probabilities") {
    const std::vector<double> log_bf{0.0, 3.2, -1.0, 2.5};
    const std::vector<double> uniform(4, 0.25);
    const auto p = posterior_model_probabilities(log_bf, uniform);
    double sum = 0.0;
    for (double v : p) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-12);
    const auto d = direct_pmp(log_bf, uniform);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(p[i] - d[i]) < 1e-12);

    const std::vector<double> skewed{0.01, 0.01, 0.01, 0.97};
    const auto ps = posterior_model_probabilities(log_bf, skewed);
    const auto ds = direct_pmp(log_bf, skewed);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(ps[i] - ds[i]) < 1e-12);

    const std::vector<double> with_inf{0.0, -INFINITY, 1.0};
    const std::vector<double> thirds(3, 1.0 / 3);
    const auto pi = posterior_model_probabilities(with_inf, thirds);
    CHECK(pi[1] == 0.0);
    CHECK(pi[0] + pi[2] == doctest::Approx(1.0).epsilon(1e-12));
    // Huge spreads stay finite.
    const std::vector<double> wide{0.0, 800.0};
    const auto pw = posterior_model_probabilities(wide, std::vector<double>{0.5, 0.5});
    CHECK(pw[1] == doctest::Approx(1.0));
    CHECK(pw[0] >= 0.0);
}

TEST_CASE("compare: report invariants") {
    const auto data = generate_scenario(preset_scenario("pop1", 25, 1, 5), 0);
    const auto models = ex1_models();
    const auto report = compare(data, models, {}, quick(), RandomSource(5));
    double sum = 0.0;
    for (double p : report.posterior_probs) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(report.display_reference == "Me");
    CHECK(report.display_log_bf[report.index_of("Me")] == 0.0);
    for (const auto& b : report.breakdowns) CHECK(b.log_bf_c_vs_0 == b.log_bf_e_vs_0 + b.log_bf_c_vs_e);
    for (const auto& l : models)
        for (const auto& k : models)
            for (const auto& j : models) {
                const double lhs = log_pairwise_bf(report, l.name, k.name) + log_pairwise_bf(report, k.name, j.name);
                CHECK(std::abs(lhs - log_pairwise_bf(report, l.name, j.name)) < 1e-12);
            }
    CHECK(pairwise_bf(report, "M2", "M2") == 1.0);
    CHECK(pairwise_bf(report, "M3", "Me") == doctest::Approx(1.0 / pairwise_bf(report, "Me", "M3")));
    CHECK_THROWS(pairwise_bf(report, "M9", "M0"));

    // A prior favouring Me moves the ranking only through p_l/p_k.
    const std::vector<double> skewed{0.01, 0.01, 0.01, 0.97};
    const auto r2 = compare(data, models, skewed, quick(), RandomSource(5));
    std::vector<double> lbf;
    for (const auto& b : r2.breakdowns) lbf.push_back(b.log_bf_c_vs_0);
    const auto d = direct_pmp(lbf, skewed);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(r2.posterior_probs[i] - d[i]) < 1e-12);
    for (std::size_t i = 0; i < 4; ++i) CHECK(r2.breakdowns[i].log_bf_c_vs_0 == report.breakdowns[i].log_bf_c_vs_0);
}

TEST_CASE("compare: identical models share probability") {
    const auto data = generate_scenario(preset_scenario("pop2l", 20, 1, 6), 0);
    auto models = parse_models({{"A", "mu1 < mu2 < mu3 < mu4 < mu5"}, {"B", "mu1 < mu2 < mu3 < mu4 < mu5"},
                                {"M0", "mu1 = mu2 = mu3 = mu4 = mu5"}},
                               5);
    ComparisonSettings s = quick();
    const auto report = compare(data, models, {}, s, RandomSource(6));
    // Same model, different streams: equal up to Monte Carlo error in the region factor.
    CHECK(report.breakdowns[0].log_bf_e_vs_0 == report.breakdowns[1].log_bf_e_vs_0);
    const auto exact = posterior_model_probabilities(
        std::vector<double>{1.0, 1.0, 0.0}, std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(exact[0] == exact[1]);
    CHECK(std::abs(report.posterior_probs[0] - report.posterior_probs[1]) < 0.1);
}

TEST_CASE("compare: argument errors") {
    const auto data = generate_scenario(preset_scenario("pop1", 5, 1, 7), 0);
    auto models = ex1_models();
    CHECK_THROWS(compare(data, {}, {}, quick(), RandomSource(1)));
    CHECK_THROWS(compare(data, models, {0.5, 0.5}, quick(), RandomSource(1)));
    CHECK_THROWS(compare(data, models, {0.5, 0.5, 0.5, -0.5}, quick(), RandomSource(1)));
    CHECK_THROWS(compare(data, models, {0.3, 0.3, 0.3, 0.3}, quick(), RandomSource(1)));
    models[1].name = "M0";
    CHECK_THROWS_WITH(compare(data, models, {}, quick(), RandomSource(1)), doctest::Contains("duplicate"));
}

TEST_CASE("log Bayes factors are affine invariant") {
    const auto data = generate_scenario(preset_scenario("pop3", 25, 1, 8), 0);
    auto moved = data;
    for (double& v : moved.responses) v = 2.0 * v + 3.0;
    const auto models = parse_models({{"M0", "mu1 = mu2 = mu3 = mu4 = mu5"},
                                      {"M3", "mu2 < mu1 < mu4 < {mu3 = mu5}"},
                                      {"Me", "mu1, mu2, mu3, mu4, mu5"}},
                                     5);
    const auto a = compare(data, models, {}, {}, RandomSource(8));
    const auto b = compare(moved, models, {}, {}, RandomSource(8));
    CHECK(b.theta0.sigma0 == doctest::Approx(2.0 * a.theta0.sigma0));
    for (std::size_t k = 0; k < models.size(); ++k) {
        CHECK(std::abs(a.breakdowns[k].log_bf_c_vs_0 - b.breakdowns[k].log_bf_c_vs_0) < 0.02);
    }
}

TEST_CASE("theta0 override is used") {
    const auto data = generate_scenario(preset_scenario("pop1", 10, 1, 9), 0);
    const auto r = compare(data, ex1_models(), {}, quick(), RandomSource(9), NullParams{0.1, 0.9});
    CHECK(r.theta0.alpha0 == 0.1);
    CHECK(r.theta0.sigma0 == 0.9);
}

}  // TEST_SUITE
