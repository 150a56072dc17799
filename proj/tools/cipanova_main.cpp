// Command-line front end: compare, simulate, power, selftest.

#include "cipanova/anova_data.hpp"
#include "cipanova/comparison.hpp"
#include "cipanova/power.hpp"
#include "cipanova/quadrature.hpp"
#include "cipanova/records.hpp"
#include "cipanova/scenarios.hpp"
#include "cipanova/simulation.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cmath>
#include <csignal>
#include <iostream>
#include <numbers>
#include <sstream>

namespace {

using namespace cipanova;

std::atomic<bool> g_cancel{false};

extern "C" void on_sigint(int) { g_cancel.store(true); }

struct GlobalOptions {
    std::uint64_t seed = 1;
    long prior_draws = 0;
    long mcmc_iters = 0;
    long burnin = 0;
    int quadrature_nodes = 0;
    std::string evidence_method;
    std::string output = "text";
    int jobs = 1;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* prior_opt = nullptr;
    CLI::Option* mcmc_opt = nullptr;
    CLI::Option* burnin_opt = nullptr;
    CLI::Option* nodes_opt = nullptr;
    CLI::Option* method_opt = nullptr;
};

void apply_globals(const GlobalOptions& g, RunConfig& config) {
    if (g.seed_opt->count() > 0) config.seed = g.seed;
    if (g.prior_opt->count() > 0) config.settings.prior_draws = g.prior_draws;
    if (g.mcmc_opt->count() > 0) config.settings.mcmc_iterations = g.mcmc_iters;
    if (g.burnin_opt->count() > 0) config.settings.burnin = g.burnin;
    if (g.nodes_opt->count() > 0) config.settings.quadrature_nodes = g.quadrature_nodes;
    if (g.method_opt->count() > 0) config.settings.evidence_method = parse_evidence_method(g.evidence_method);
    if (config.settings.prior_draws < 1) {
        throw std::invalid_argument("--prior-draws must be positive");
    }
}

// "NAME: SPEC" or a bare SPEC, which is named M<index>.
ModelDef parse_model_arg(const std::string& arg, std::size_t index) {
    const auto colon = arg.find(':');
    if (colon == std::string::npos) {
        return {"M" + std::to_string(index + 1), arg};
    }
    std::string name = arg.substr(0, colon);
    while (!name.empty() && name.back() == ' ') name.pop_back();
    while (!name.empty() && name.front() == ' ') name.erase(0, 1);
    if (name.empty()) {
        throw std::invalid_argument("model '" + arg + "' has an empty name");
    }
    return {name, arg.substr(colon + 1)};
}

struct CompareArgs {
    std::string data;
    std::vector<std::string> models;
    std::string config;
    std::vector<double> prior_probs;
    double alpha0 = 0.0;
    double sigma0 = 0.0;
    CLI::Option* alpha0_opt = nullptr;
    CLI::Option* sigma0_opt = nullptr;
};

int run_compare(const CompareArgs& a, const GlobalOptions& g) {
    RunConfig config = a.config.empty() ? RunConfig{} : load_run_config(a.config);
    apply_globals(g, config);
    if (!a.data.empty()) {
        config.data_path = a.data;
        config.scenario.reset();
    }
    if (!a.models.empty()) {
        config.models.clear();
        for (std::size_t i = 0; i < a.models.size(); ++i) {
            config.models.push_back(parse_model_arg(a.models[i], i));
        }
    }
    if (!a.prior_probs.empty()) {
        config.prior_probs = a.prior_probs;
    }
    if ((a.alpha0_opt->count() > 0) != (a.sigma0_opt->count() > 0)) {
        throw std::invalid_argument("--alpha0 and --sigma0 must be given together");
    }
    if (a.alpha0_opt->count() > 0) {
        if (!(a.sigma0 > 0.0)) {
            throw std::invalid_argument("--sigma0 must be positive");
        }
        config.theta0 = NullParams{a.alpha0, a.sigma0};
    }
    if (!config.data_path) {
        throw std::invalid_argument("compare needs a data file (--data or config 'data')");
    }
    if (config.models.empty()) {
        throw std::invalid_argument("compare needs at least one model (--model or config 'models')");
    }

    const CsvImport import = ingest_csv(*config.data_path);
    for (const auto& w : import.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    const auto models = parse_models(config.models, import.data.num_groups());
    const ComparisonReport report =
        compare(import.data, models, config.prior_probs, config.settings, RandomSource(config.seed, 0), config.theta0);

    if (g.output == "records") {
        std::cout << report_record(report, config).dump() << "\n";
    } else {
        std::cout << format_report(report);
        for (const auto& b : report.breakdowns) {
            if (b.evidence && b.evidence->method == EvidenceMethod::Quadrature &&
                b.evidence->node_doubling_delta > 1e-6) {
                std::cerr << "warning: model " << b.model_name << ": quadrature node-doubling delta "
                          << b.evidence->node_doubling_delta << "\n";
            }
            if (b.posterior_region && b.posterior_acceptance < 0.05) {
                std::cerr << "warning: model " << b.model_name << ": eta acceptance rate " << b.posterior_acceptance
                          << "\n";
            }
        }
    }
    return 0;
}

struct SimulateArgs {
    std::string scenario;
    long reps = 0;
    int n_per_group = 0;
    std::string config;
    std::vector<std::string> models;
    CLI::Option* reps_opt = nullptr;
    CLI::Option* n_opt = nullptr;
};

int run_simulate(const SimulateArgs& a, const GlobalOptions& g) {
    RunConfig config = a.config.empty() ? RunConfig{} : load_run_config(a.config);
    apply_globals(g, config);
    if (!a.scenario.empty()) {
        config.scenario = a.scenario;
        config.data_path.reset();
    }
    if (!config.scenario) {
        throw std::invalid_argument("simulate needs a scenario name");
    }
    if (a.reps_opt->count() > 0) config.replications = a.reps;
    if (a.n_opt->count() > 0) config.n_per_group = a.n_per_group;
    if (!config.replications) config.replications = 50;
    if (!config.n_per_group) config.n_per_group = 25;
    if (!a.models.empty()) {
        config.models.clear();
        for (std::size_t i = 0; i < a.models.size(); ++i) {
            config.models.push_back(parse_model_arg(a.models[i], i));
        }
    }
    if (config.models.empty()) {
        config.models = preset_models(*config.scenario);
    }
    if (!config.prior_probs.empty() || config.theta0) {
        throw std::invalid_argument("simulate uses uniform model priors and a per-dataset theta0");
    }

    const SimScenario scenario =
        preset_scenario(*config.scenario, *config.n_per_group, *config.replications, config.seed);
    const auto models = parse_models(config.models, scenario.num_groups());

    SimulationOptions options;
    options.jobs = g.jobs;
    options.cancel = &g_cancel;
    if (g.output == "records") {
        options.on_record = [](const ReplicationRecord& rec) {
            std::cout << replication_record(rec).dump() << "\n" << std::flush;
        };
    }
    std::signal(SIGINT, on_sigint);
    const SummaryTable table = run_simulation_study(scenario, models, config.settings, options);
    if (g.output == "records") {
        std::cout << summary_record(table, config).dump() << "\n";
    } else {
        std::cout << format_summary(table);
    }
    if (g_cancel.load()) {
        std::cerr << "interrupted after " << table.replications << " replications\n";
        return 130;
    }
    return 0;
}

struct PowerArgs {
    std::vector<double> deltas;
    std::vector<int> ns;
    double sigma = 1.0;
    double z = 1.96;
};

int run_power(const PowerArgs& a, const GlobalOptions& g) {
    std::vector<PowerRow> rows;
    if (a.deltas.empty() && a.ns.empty() && a.sigma == 1.0 && a.z == 1.96) {
        rows = default_power_table();
    } else {
        rows = power_table(a.deltas.empty() ? std::vector<double>{0.2, 0.3, 0.4} : a.deltas, a.sigma,
                           a.ns.empty() ? std::vector<int>{25, 50} : a.ns, a.z);
    }
    if (g.output == "records") {
        std::cout << power_record(rows).dump() << "\n";
    } else {
        std::cout << format_power(rows);
    }
    return 0;
}

// Fast invariant checks that need no external data.
int run_selftest() {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS " : "FAIL ") << name << " (" << detail << ")\n";
        failures += ok ? 0 : 1;
    };
    auto show = [](double v) {
        std::ostringstream s;
        s << v;
        return s.str();
    };

    {
        const auto m = parse_model_spec("mu2 < mu1 < mu4 < {mu3 = mu5}", 5);
        const auto again = parse_model_spec(to_spec_string(m), 5);
        report("dsl-roundtrip", m == again, to_spec_string(m));
    }
    {
        const auto rule = gauss_jacobi_unit(16, -0.5, -0.5);
        double worst = 0.0;
        for (int k = 1; k <= 16; ++k) {
            const double node = std::pow(std::cos((2.0 * k - 1.0) * std::numbers::pi / 64.0), 2);
            double best = 1.0;
            for (double x : rule.nodes) best = std::min(best, std::abs(x - node));
            worst = std::max(worst, best);
        }
        report("arcsine-quadrature-nodes", worst < 1e-12, "max error " + show(worst));
    }
    {
        const double p = difference_power(0.2, 1.0, 1.0, 25, 25);
        report("power-2s-25", std::abs(p - 0.1051) < 1e-3, show(p));
    }
    {
        const SimScenario s = preset_scenario("pop3", 10, 1, 3);
        const AnovaData data = generate_scenario(s, 0);
        const auto models = parse_models(preset_models("pop3"), 5);
        ComparisonSettings settings;
        settings.prior_draws = 20000;
        settings.mcmc_iterations = 6000;
        settings.burnin = 1000;
        const auto rep = compare(data, models, {}, settings, RandomSource(3, 0));
        double sum = 0.0;
        for (double p : rep.posterior_probs) sum += p;
        report("pmp-normalization", std::abs(sum - 1.0) < 1e-12, "sum - 1 = " + show(sum - 1.0));
        bool additive = true;
        for (const auto& b : rep.breakdowns) {
            additive = additive && (b.log_bf_c_vs_0 == b.log_bf_e_vs_0 + b.log_bf_c_vs_e);
        }
        report("bf-additivity", additive, "exact");
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compare constrained one-way ANOVA models with conditional intrinsic priors"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    g.seed_opt = app.add_option("--seed", g.seed, "Base random seed (default 1)");
    g.prior_opt = app.add_option("--prior-draws", g.prior_draws, "Prior draws for region probabilities");
    g.mcmc_opt = app.add_option("--mcmc-iters", g.mcmc_iters, "Posterior chain length including burn-in");
    g.burnin_opt = app.add_option("--burnin", g.burnin, "Discarded posterior sweeps");
    g.nodes_opt = app.add_option("--quadrature-nodes", g.quadrature_nodes, "Gauss-Jacobi nodes for the evidence");
    g.method_opt = app.add_option("--evidence-method", g.evidence_method, "quadrature or chib")
                       ->check(CLI::IsMember({"quadrature", "chib"}));
    app.add_option("--output", g.output, "text or records")->check(CLI::IsMember({"text", "records"}));
    app.add_option("--jobs", g.jobs, "Worker threads for simulate")->check(CLI::PositiveNumber);

    CompareArgs ca;
    auto* compare_cmd = app.add_subcommand("compare", "Compare models on a CSV dataset");
    compare_cmd->add_option("--data", ca.data, "CSV file with columns group,response");
    compare_cmd->add_option("--model", ca.models, "Model as \"NAME: SPEC\", repeatable");
    compare_cmd->add_option("--config", ca.config, "JSON run configuration");
    compare_cmd->add_option("--prior-probs", ca.prior_probs, "Prior model probabilities, in model order")
        ->delimiter(',');
    ca.alpha0_opt = compare_cmd->add_option("--alpha0", ca.alpha0, "Override the null mean");
    ca.sigma0_opt = compare_cmd->add_option("--sigma0", ca.sigma0, "Override the null standard deviation");

    SimulateArgs sa;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a simulation study on a preset scenario");
    simulate_cmd->add_option("scenario", sa.scenario, "Preset name (pop1, pop2s, pop2m, pop2l, pop3, ex2-...)");
    sa.reps_opt = simulate_cmd->add_option("--reps", sa.reps, "Replications (default 50)");
    sa.n_opt = simulate_cmd->add_option("--n-per-group", sa.n_per_group, "Group size (default 25)");
    simulate_cmd->add_option("--config", sa.config, "JSON run configuration");
    simulate_cmd->add_option("--model", sa.models, "Model as \"NAME: SPEC\", repeatable");

    PowerArgs pa;
    auto* power_cmd = app.add_subcommand("power", "Power of a two-group mean comparison");
    power_cmd->add_option("--deltas", pa.deltas, "Mean differences")->delimiter(',');
    power_cmd->add_option("--ns", pa.ns, "Group sizes")->delimiter(',');
    power_cmd->add_option("--sigma", pa.sigma, "Common standard deviation")->check(CLI::PositiveNumber);
    power_cmd->add_option("--z", pa.z, "Critical value");

    auto* selftest_cmd = app.add_subcommand("selftest", "Run quick internal consistency checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "cipanova: error: " << e.what() << "\n";
        return e.get_exit_code() == 0 ? 2 : e.get_exit_code();
    }

    try {
        if (compare_cmd->parsed()) return run_compare(ca, g);
        if (simulate_cmd->parsed()) return run_simulate(sa, g);
        if (power_cmd->parsed()) return run_power(pa, g);
        if (selftest_cmd->parsed()) return run_selftest();
    } catch (const std::exception& e) {
        std::cerr << "cipanova: error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
