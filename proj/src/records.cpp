#include "cipanova/records.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace cipanova {

using nlohmann::json;

namespace {

std::string fixed(double v, int decimals) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string general(double v) {
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "0";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

// JSON has no infinities; −∞ log BFs are written as null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class T>
T get_field(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("config field '") + key + "' is missing or has the wrong type");
    }
}

json region_json(const RegionProbEstimate& r) {
    return {{"estimate", r.estimate}, {"hits", r.hits}, {"total", r.total}};
}

json breakdown_json(const BfBreakdown& b) {
    json j = {{"model", b.model_name},
              {"log_bf_e_vs_0", number_or_null(b.log_bf_e_vs_0)},
              {"log_bf_c_vs_e", number_or_null(b.log_bf_c_vs_e)},
              {"log_bf_c_vs_0", number_or_null(b.log_bf_c_vs_0)}};
    if (b.prior_region) {
        j["prior_region"] = region_json(*b.prior_region);
    }
    if (b.posterior_region) {
        j["posterior_region"] = region_json(*b.posterior_region);
        j["posterior_acceptance"] = b.posterior_acceptance;
    }
    if (b.evidence) {
        const auto& e = *b.evidence;
        json ej = {{"method", std::string(to_string(e.method))},
                   {"log_marginal", e.log_marginal},
                   {"eta_mode", e.eta_mode}};
        if (e.method == EvidenceMethod::Chib) {
            ej["iterations"] = e.nodes_or_iters;
            ej["standard_error"] = e.standard_error;
            ej["acceptance_rate"] = e.acceptance_rate;
        } else {
            ej["nodes"] = e.nodes_or_iters;
            ej["node_doubling_delta"] = e.node_doubling_delta;
        }
        j["evidence"] = ej;
    }
    if (b.below_resolution) {
        j["below_resolution"] = true;
        j["log_bf_c_vs_e_upper_bound"] = b.log_bound;
    }
    return j;
}

json report_body(const ComparisonReport& report) {
    json models = json::array();
    for (std::size_t k = 0; k < report.breakdowns.size(); ++k) {
        json m = breakdown_json(report.breakdowns[k]);
        m["prior_prob"] = report.prior_probs[k];
        m["posterior_prob"] = report.posterior_probs[k];
        models.push_back(m);
    }
    return {{"theta0", {{"alpha0", report.theta0.alpha0}, {"sigma0", report.theta0.sigma0}}}, {"models", models}};
}

}  // namespace

json to_json(const ComparisonSettings& s) {
    return {{"prior_draws", s.prior_draws},
            {"mcmc_iterations", s.mcmc_iterations},
            {"burnin", s.burnin},
            {"quadrature_nodes", s.quadrature_nodes},
            {"evidence_method", std::string(to_string(s.evidence_method))},
            {"chib_iterations", s.chib_iterations}};
}

RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    static const char* const known[] = {"data",   "scenario", "n_per_group", "replications", "models",
                                        "prior_probs", "theta0", "sampler", "seed"};
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* k : known) {
            ok = ok || key == k;
        }
        if (!ok) {
            throw ConfigError("unknown config field '" + key + "'");
        }
    }
    RunConfig c;
    if (j.contains("data")) {
        c.data_path = get_field<std::string>(j, "data");
    }
    if (j.contains("scenario")) {
        c.scenario = get_field<std::string>(j, "scenario");
    }
    if (c.data_path && c.scenario) {
        throw ConfigError("config may name a data file or a scenario, not both");
    }
    if (j.contains("n_per_group")) {
        c.n_per_group = get_field<int>(j, "n_per_group");
    }
    if (j.contains("replications")) {
        c.replications = get_field<long>(j, "replications");
    }
    if (j.contains("models")) {
        const json& models = j.at("models");
        if (!models.is_array()) {
            throw ConfigError("config field 'models' must be an array");
        }
        for (const auto& m : models) {
            if (!m.is_object()) {
                throw ConfigError("each model needs 'name' and 'spec'");
            }
            c.models.push_back({get_field<std::string>(m, "name"), get_field<std::string>(m, "spec")});
        }
    }
    if (j.contains("prior_probs")) {
        c.prior_probs = get_field<std::vector<double>>(j, "prior_probs");
    }
    if (j.contains("theta0")) {
        const json& t = j.at("theta0");
        c.theta0 = NullParams{get_field<double>(t, "alpha0"), get_field<double>(t, "sigma0")};
        if (!(c.theta0->sigma0 > 0.0)) {
            throw ConfigError("theta0.sigma0 must be positive");
        }
    }
    if (j.contains("sampler")) {
        const json& s = j.at("sampler");
        auto& st = c.settings;
        if (s.contains("prior_draws")) st.prior_draws = get_field<long>(s, "prior_draws");
        if (s.contains("mcmc_iterations")) st.mcmc_iterations = get_field<long>(s, "mcmc_iterations");
        if (s.contains("burnin")) st.burnin = get_field<long>(s, "burnin");
        if (s.contains("quadrature_nodes")) st.quadrature_nodes = get_field<int>(s, "quadrature_nodes");
        if (s.contains("chib_iterations")) st.chib_iterations = get_field<long>(s, "chib_iterations");
        if (s.contains("evidence_method")) {
            try {
                st.evidence_method = parse_evidence_method(get_field<std::string>(s, "evidence_method"));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
    }
    if (j.contains("seed")) {
        c.seed = get_field<std::uint64_t>(j, "seed");
    }
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
    }
    return parse_run_config(j);
}

json to_json(const RunConfig& c) {
    json j;
    if (c.data_path) {
        j["data"] = *c.data_path;
    }
    if (c.scenario) {
        j["scenario"] = *c.scenario;
    }
    if (c.n_per_group) {
        j["n_per_group"] = *c.n_per_group;
    }
    if (c.replications) {
        j["replications"] = *c.replications;
    }
    json models = json::array();
    for (const auto& m : c.models) {
        models.push_back({{"name", m.name}, {"spec", m.spec}});
    }
    j["models"] = models;
    if (!c.prior_probs.empty()) {
        j["prior_probs"] = c.prior_probs;
    }
    if (c.theta0) {
        j["theta0"] = {{"alpha0", c.theta0->alpha0}, {"sigma0", c.theta0->sigma0}};
    }
    j["sampler"] = to_json(c.settings);
    j["seed"] = c.seed;
    return j;
}

json report_record(const ComparisonReport& report, const RunConfig& config) {
    json j = {{"record", "comparison"}, {"config", to_json(config)}, {"seed", config.seed}};
    j.update(report_body(report));
    return j;
}

json replication_record(const ReplicationRecord& rec) {
    json j = {{"record", "replication"},
              {"scenario", rec.scenario},
              {"seed", rec.seed},
              {"replication", rec.replication},
              {"n_per_group", rec.n_per_group},
              {"top_model", rec.top_model},
              {"correct_model_pmp", rec.correct_model_pmp}};
    j.update(report_body(rec.report));
    return j;
}

json summary_record(const SummaryTable& t, const RunConfig& config) {
    json top = json::object();
    for (std::size_t k = 0; k < t.model_names.size(); ++k) {
        top[t.model_names[k]] = t.top_percent[k];
    }
    return {{"record", "summary"},
            {"config", to_json(config)},
            {"seed", config.seed},
            {"scenario", t.scenario},
            {"n_per_group", t.n_per_group},
            {"true_model", t.true_model},
            {"replications", t.replications},
            {"top_percent", top},
            {"median_correct_pmp", t.median_correct_pmp}};
}

json power_record(const std::vector<PowerRow>& rows) {
    json out = json::array();
    for (const auto& r : rows) {
        out.push_back({{"population", r.label}, {"n_per_group", r.n_per_group}, {"delta", r.delta}, {"sd", r.sd},
                       {"power", r.power}});
    }
    return {{"record", "power"}, {"rows", out}};
}

std::string format_report(const ComparisonReport& report) {
    std::ostringstream out;
    out << "theta0: alpha0 = " << fixed(report.theta0.alpha0, 4) << ", sigma0 = " << fixed(report.theta0.sigma0, 4)
        << "\n";
    std::size_t width = 5;
    for (const auto& b : report.breakdowns) {
        width = std::max(width, b.model_name.size());
    }
    const double reference =
        report.display_reference == "null" ? 0.0 : report.find(report.display_reference).log_bf_c_vs_0;
    out << pad_right("Model", width) << pad_left("BF vs " + report.display_reference, 16) << pad_left("log BF_k0", 12)
        << pad_left("prior", 8) << pad_left("PMP", 10) << "\n";
    for (std::size_t k = 0; k < report.breakdowns.size(); ++k) {
        const auto& b = report.breakdowns[k];
        std::string bf = general(std::exp(report.display_log_bf[k]));
        if (b.below_resolution) {
            bf = "<" + general(std::exp(b.log_bf_e_vs_0 + b.log_bound - reference));
        }
        out << pad_right(b.model_name, width) << pad_left(bf, 16) << pad_left(fixed(b.log_bf_c_vs_0, 3), 12)
            << pad_left(fixed(report.prior_probs[k], 3), 8) << pad_left(fixed(report.posterior_probs[k], 4), 10)
            << "\n";
    }
    return out.str();
}

std::string format_summary(const SummaryTable& t) {
    std::ostringstream out;
    out << "scenario " << t.scenario << ", n_j = " << t.n_per_group << ", replications = " << t.replications
        << ", true model " << t.true_model << "\n";
    out << pad_right("n_j", 6);
    for (const auto& name : t.model_names) {
        out << pad_left(name, 10);
    }
    out << pad_left("median PMP", 13) << "\n";
    out << pad_right(std::to_string(t.n_per_group), 6);
    for (double p : t.top_percent) {
        out << pad_left(fixed(p, 0), 10);
    }
    out << pad_left(fixed(t.median_correct_pmp, 2), 13) << "\n";
    return out.str();
}

std::string format_power(const std::vector<PowerRow>& rows) {
    std::ostringstream out;
    out << pad_right("Population", 12) << pad_left("n_j", 6) << pad_left("delta", 8) << pad_left("sd", 9)
        << pad_left("power", 8) << "\n";
    for (const auto& r : rows) {
        out << pad_right(r.label.empty() ? "-" : r.label, 12) << pad_left(std::to_string(r.n_per_group), 6)
            << pad_left(fixed(r.delta, 2), 8) << pad_left(fixed(r.sd, 4), 9) << pad_left(fixed(r.power, 3), 8)
            << "\n";
    }
    return out.str();
}

}  // namespace cipanova
