#include "cipanova/scenarios.hpp"

#include "cipanova/random.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cipanova {

namespace {

struct Population {
    std::vector<double> means;
    std::vector<double> sds;
    const char* true_model;
};

const std::map<std::string, Population>& homoscedastic() {
    static const std::map<std::string, Population> table{
        {"pop1", {{0, 0, 0, 0, 0}, {1, 1, 1, 1, 1}, "M0"}},
        {"pop2s", {{0, 0.2, 0.4, 0.6, 0.8}, {1, 1, 1, 1, 1}, "M2"}},
        {"pop2m", {{0, 0.3, 0.6, 0.9, 1.2}, {1, 1, 1, 1, 1}, "M2"}},
        {"pop2l", {{0, 0.4, 0.8, 1.2, 1.6}, {1, 1, 1, 1, 1}, "M2"}},
        {"pop3", {{2.23, 1.33, 3.23, 2.33, 3.23}, {1.55, 1.55, 1.55, 1.55, 1.55}, "M3"}},
    };
    return table;
}

const std::map<std::string, Population>& heteroscedastic_means() {
    static const std::map<std::string, Population> table{
        {"pop1", {{0, 0, 0, 0, 0}, {}, "M0"}},
        {"pop2s", {{0, 0.7, 1.4, 2.1, 2.8}, {}, "M2"}},
        {"pop2m", {{0, 1.1, 2.2, 3.3, 4.4}, {}, "M2"}},
        {"pop2l", {{0, 1.4, 2.8, 4.2, 5.6}, {}, "M2"}},
    };
    return table;
}

const std::map<std::string, std::vector<double>>& heteroscedastic_sds() {
    static const std::map<std::string, std::vector<double>> table{
        {"F1", {3, 3, 3, 3, 3}},
        {"F11", {1.4, 2.2, 3, 3.8, 4.6}},
        {"F25", {1, 2, 3, 4, 5}},
    };
    return table;
}

const ModelDef kM0{"M0", "mu1 = mu2 = mu3 = mu4 = mu5"};
const ModelDef kM2{"M2", "mu1 < mu2 < mu3 < mu4 < mu5"};
const ModelDef kM3{"M3", "mu2 < mu1 < mu4 < {mu3 = mu5}"};
const ModelDef kMe{"Me", "mu1, mu2, mu3, mu4, mu5"};

}  // namespace

double SimScenario::heteroscedasticity_ratio() const {
    const auto [lo, hi] = std::minmax_element(sds.begin(), sds.end());
    return (*hi * *hi) / (*lo * *lo);
}

std::vector<ConstraintModel> parse_models(const std::vector<ModelDef>& defs, int num_groups) {
    std::vector<ConstraintModel> out;
    out.reserve(defs.size());
    for (const auto& d : defs) {
        out.push_back(parse_model_spec(d.spec, num_groups, d.name));
    }
    return out;
}

std::vector<std::string> preset_names() {
    std::vector<std::string> names;
    for (const auto& [name, _] : homoscedastic()) {
        names.push_back(name);
    }
    for (const auto& [pop, _] : heteroscedastic_means()) {
        for (const auto& [f, __] : heteroscedastic_sds()) {
            names.push_back("ex2-" + pop + "-" + f);
        }
    }
    return names;
}

SimScenario preset_scenario(const std::string& name, int n_per_group, long replications, std::uint64_t base_seed) {
    if (n_per_group < 1 || replications < 1) {
        throw std::invalid_argument("group size and replication count must be positive");
    }
    SimScenario s;
    s.name = name;
    s.n_per_group = n_per_group;
    s.replications = replications;
    s.base_seed = base_seed;
    if (const auto it = homoscedastic().find(name); it != homoscedastic().end()) {
        s.means = it->second.means;
        s.sds = it->second.sds;
        s.true_model = it->second.true_model;
        return s;
    }
    if (name.starts_with("ex2-")) {
        const auto dash = name.rfind('-');
        const std::string pop = name.substr(4, dash - 4);
        const std::string f = name.substr(dash + 1);
        const auto m = heteroscedastic_means().find(pop);
        const auto v = heteroscedastic_sds().find(f);
        if (m != heteroscedastic_means().end() && v != heteroscedastic_sds().end()) {
            s.means = m->second.means;
            s.sds = v->second;
            s.true_model = m->second.true_model;
            return s;
        }
    }
    throw std::invalid_argument("unknown scenario preset '" + name + "'");
}

std::vector<ModelDef> preset_models(const std::string& name) {
    if (homoscedastic().contains(name)) {
        return {kM0, kM2, kM3, kMe};
    }
    if (name.starts_with("ex2-")) {
        return {kM0, kM2, kMe};
    }
    throw std::invalid_argument("unknown scenario preset '" + name + "'");
}

AnovaData generate_scenario(const SimScenario& scenario, long replication) {
    if (scenario.means.size() != scenario.sds.size() || scenario.means.empty()) {
        throw std::invalid_argument("scenario needs one standard deviation per group mean");
    }
    RandomSource rng = RandomSource(scenario.base_seed, static_cast<std::uint64_t>(replication)).derive(0);
    std::vector<int> groups;
    std::vector<double> y;
    for (int j = 0; j < scenario.num_groups(); ++j) {
        if (!(scenario.sds[j] > 0.0)) {
            throw std::invalid_argument("scenario standard deviations must be positive");
        }
        for (int i = 0; i < scenario.n_per_group; ++i) {
            groups.push_back(j);
            y.push_back(scenario.means[j] + scenario.sds[j] * rng.normal());
        }
    }
    return AnovaData::from_labels(std::move(groups), std::move(y), scenario.num_groups());
}

}  // namespace cipanova
