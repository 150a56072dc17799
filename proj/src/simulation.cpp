#include "cipanova/simulation.hpp"

#include <algorithm>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

namespace cipanova {

double SummaryTable::percent_for(const std::string& model) const {
    for (std::size_t i = 0; i < model_names.size(); ++i) {
        if (model_names[i] == model) {
            return top_percent[i];
        }
    }
    throw std::invalid_argument("model '" + model + "' not in summary");
}

ReplicationRecord run_replication(const SimScenario& scenario, const std::vector<ConstraintModel>& models,
                                  const ComparisonSettings& settings, long replication) {
    const AnovaData data = generate_scenario(scenario, replication);
    const RandomSource inference =
        RandomSource(scenario.base_seed, static_cast<std::uint64_t>(replication)).derive(1);
    ReplicationRecord rec;
    rec.scenario = scenario.name;
    rec.seed = scenario.base_seed;
    rec.replication = replication;
    rec.n_per_group = scenario.n_per_group;
    rec.report = compare(data, models, {}, settings, inference);
    const auto& pmp = rec.report.posterior_probs;
    const auto top = static_cast<std::size_t>(std::max_element(pmp.begin(), pmp.end()) - pmp.begin());
    rec.top_model = rec.report.breakdowns[top].model_name;
    rec.correct_model_pmp = pmp[rec.report.index_of(scenario.true_model)];
    return rec;
}

SummaryTable summarize(const SimScenario& scenario, const std::vector<ConstraintModel>& models,
                       const std::vector<ReplicationRecord>& records) {
    SummaryTable table;
    table.scenario = scenario.name;
    table.n_per_group = scenario.n_per_group;
    table.true_model = scenario.true_model;
    table.replications = static_cast<long>(records.size());
    std::vector<long> counts(models.size(), 0);
    std::vector<double> correct;
    for (const auto& m : models) {
        table.model_names.push_back(m.name);
    }
    for (const auto& rec : records) {
        for (std::size_t k = 0; k < models.size(); ++k) {
            if (models[k].name == rec.top_model) {
                ++counts[k];
            }
        }
        correct.push_back(rec.correct_model_pmp);
    }
    for (long c : counts) {
        table.top_percent.push_back(records.empty() ? 0.0
                                                    : 100.0 * static_cast<double>(c) /
                                                          static_cast<double>(records.size()));
    }
    if (!correct.empty()) {
        std::sort(correct.begin(), correct.end());
        const std::size_t m = correct.size();
        table.median_correct_pmp = (m % 2 == 1) ? correct[m / 2] : 0.5 * (correct[m / 2 - 1] + correct[m / 2]);
    }
    return table;
}

SummaryTable run_simulation_study(const SimScenario& scenario, const std::vector<ConstraintModel>& models,
                                  const ComparisonSettings& settings, const SimulationOptions& options) {
    bool has_true = false;
    for (const auto& m : models) {
        has_true = has_true || m.name == scenario.true_model;
    }
    if (!has_true) {
        throw std::invalid_argument("model list lacks the scenario's true model '" + scenario.true_model + "'");
    }

    const long total = scenario.replications;
    std::vector<std::optional<ReplicationRecord>> results(static_cast<std::size_t>(total));
    std::mutex mutex;
    long next = 0;
    long emitted = 0;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            long r;
            {
                std::lock_guard lock(mutex);
                if (next >= total || failure || (options.cancel && options.cancel->load())) {
                    return;
                }
                r = next++;
            }
            try {
                ReplicationRecord rec = run_replication(scenario, models, settings, r);
                std::lock_guard lock(mutex);
                results[static_cast<std::size_t>(r)] = std::move(rec);
                while (emitted < total && results[static_cast<std::size_t>(emitted)]) {
                    if (options.on_record) {
                        options.on_record(*results[static_cast<std::size_t>(emitted)]);
                    }
                    ++emitted;
                }
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                return;
            }
        }
    };

    const int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int j = 0; j < jobs; ++j) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    // Aggregate the in-order prefix so a cancelled run still reports a
    // well-defined, reproducible subset.
    std::vector<ReplicationRecord> done;
    for (long r = 0; r < emitted; ++r) {
        done.push_back(std::move(*results[static_cast<std::size_t>(r)]));
    }
    return summarize(scenario, models, done);
}

}  // namespace cipanova
