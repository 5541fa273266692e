#ifndef NRPERC_EXPERIMENTS_CONFIG_HPP
#define NRPERC_EXPERIMENTS_CONFIG_HPP

// Experiment configuration and its JSON form. Parsing fails closed: unknown
// keys, a missing or wrong `version`, and infeasible schedules are rejected
// before any sampling starts.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrperc/errors.hpp"
#include "nrperc/params.hpp"

namespace nrperc::experiments {

using nlohmann::json;

inline constexpr int kConfigVersion = 1;

enum class Experiment {
    multi_giant,
    single_vs_multi,
    exploration_limit,
    repeat_fraction,
    residual_components,
    core_giant,
    core_weight,
    one_neighborhood,
    theory_tables,
};

inline const std::vector<std::pair<Experiment, std::string>>& experiment_names() {
    static const std::vector<std::pair<Experiment, std::string>> names = {
        {Experiment::multi_giant, "multi_giant"},
        {Experiment::single_vs_multi, "single_vs_multi"},
        {Experiment::exploration_limit, "exploration_limit"},
        {Experiment::repeat_fraction, "repeat_fraction"},
        {Experiment::residual_components, "residual_components"},
        {Experiment::core_giant, "core_giant"},
        {Experiment::core_weight, "core_weight"},
        {Experiment::one_neighborhood, "one_neighborhood"},
        {Experiment::theory_tables, "theory_tables"},
    };
    return names;
}

inline std::string to_string(Experiment e) {
    for (const auto& [k, name] : experiment_names()) {
        if (k == e) return name;
    }
    return "unknown";
}

inline Experiment parse_experiment(const std::string& s) {
    for (const auto& [k, name] : experiment_names()) {
        if (name == s) return k;
    }
    throw ConfigError("unknown experiment '" + s + "'");
}

inline bool is_core_experiment(Experiment e) {
    return e == Experiment::core_giant || e == Experiment::core_weight ||
           e == Experiment::one_neighborhood;
}

/// Percolation mode an experiment runs in unless the config overrides it.
inline PercolationMode default_mode(Experiment e) {
    if (e == Experiment::single_vs_multi || is_core_experiment(e)) return PercolationMode::single;
    return PercolationMode::multi;
}

enum class OutputFormat { csv, json };

struct ExperimentConfig {
    Experiment experiment = Experiment::multi_giant;
    double tau = 2.5;
    double C = 1.0;
    std::vector<std::int64_t> n_grid = {10000};
    LambdaRule lambda_rule = LambdaRule::power(0.1);
    std::optional<PercolationMode> mode;
    double a = 1.0;
    std::optional<double> T;  // exploration horizon in units of beta_n; default 1.5 zeta
    std::optional<double> t;  // diagnostic time for repeat/residual experiments
    std::int64_t replicas = 1;
    std::uint64_t master_seed = 1;
    int threads = 1;
    std::string output_path;
    OutputFormat output_format = OutputFormat::json;
    bool record_timing = false;
    std::vector<double> a_grid = {1, 4, 10, 100, 1000, 10000};
    std::vector<double> eps_grid = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};

    PercolationMode effective_mode() const { return mode.value_or(default_mode(experiment)); }
};

/// Checks ranges and that every n in the grid yields a feasible schedule.
inline void validate(const ExperimentConfig& c) {
    if (c.replicas < 1) throw ConfigError("replicas must be >= 1");
    if (c.threads < 1) throw ConfigError("threads must be >= 1");
    if (c.n_grid.empty()) throw ConfigError("n_grid must be nonempty");
    for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
        if (c.n_grid[i] < 1) throw ConfigError("n_grid entries must be >= 1");
        if (i > 0 && c.n_grid[i] <= c.n_grid[i - 1]) {
            throw ConfigError("n_grid must be strictly ascending");
        }
    }
    if (c.n_grid.back() > static_cast<std::int64_t>(0xffffffffLL)) {
        throw ConfigError("n_grid entries must fit 32-bit vertex ids");
    }
    try {
        (void)derive_constants(c.tau, c.C);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid model parameters: ") + e.what());
    }
    if (!(c.a > 0)) throw ConfigError("a must be positive");
    if (c.T && !(*c.T > 0)) throw ConfigError("T must be positive");
    if (c.t && !(*c.t > 0)) throw ConfigError("t must be positive");
    if (c.experiment == Experiment::theory_tables) return;
    for (auto n : c.n_grid) {
        const ModelParams p = ModelParams::make(c.tau, c.C, n);
        try {
            const PercolationSchedule s = make_schedule(p, c.effective_mode(), c.lambda_rule);
            if (is_core_experiment(c.experiment)) (void)core_prefix_size(s, c.a);
        } catch (const ScheduleInfeasible& e) {
            throw ConfigError(std::string("config rejected before sampling: ") + e.what());
        } catch (const CoreEmpty& e) {
            throw ConfigError(std::string("config rejected before sampling: ") + e.what());
        } catch (const CoreExceedsGraph& e) {
            throw ConfigError(std::string("config rejected before sampling: ") + e.what());
        }
    }
}

inline json to_json(const ExperimentConfig& c) {
    json j;
    j["version"] = kConfigVersion;
    j["experiment"] = to_string(c.experiment);
    j["tau"] = c.tau;
    j["C"] = c.C;
    j["n_grid"] = c.n_grid;
    j["lambda_rule"] = {{"kind", c.lambda_rule.kind_name()}, {"value", c.lambda_rule.value}};
    j["mode"] = nrperc::to_string(c.effective_mode());
    j["a"] = c.a;
    j["T"] = c.T ? json(*c.T) : json(nullptr);
    j["t"] = c.t ? json(*c.t) : json(nullptr);
    j["replicas"] = c.replicas;
    j["master_seed"] = c.master_seed;
    j["threads"] = c.threads;
    j["output_path"] = c.output_path;
    j["output_format"] = c.output_format == OutputFormat::csv ? "csv" : "json";
    j["record_timing"] = c.record_timing;
    j["a_grid"] = c.a_grid;
    j["eps_grid"] = c.eps_grid;
    return j;
}

inline ExperimentConfig config_from_json(const json& j) {
    static const std::set<std::string> known = {
        "version", "experiment",   "tau",           "C",      "n_grid",
        "lambda_rule", "mode",     "a",             "T",      "t",
        "replicas", "master_seed", "threads",       "output_path", "output_format",
        "record_timing", "a_grid", "eps_grid"};
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");
    }
    if (!j.contains("version")) throw ConfigError("config is missing the 'version' field");
    if (j.at("version") != kConfigVersion) {
        throw ConfigError("unsupported config version " + j.at("version").dump() +
                          " (expected " + std::to_string(kConfigVersion) + ")");
    }
    if (!j.contains("experiment")) throw ConfigError("config is missing the 'experiment' field");

    ExperimentConfig c;
    try {
        c.experiment = parse_experiment(j.at("experiment").get<std::string>());
        if (j.contains("tau")) c.tau = j.at("tau").get<double>();
        if (j.contains("C")) c.C = j.at("C").get<double>();
        if (j.contains("n_grid")) c.n_grid = j.at("n_grid").get<std::vector<std::int64_t>>();
        if (j.contains("lambda_rule")) {
            const json& r = j.at("lambda_rule");
            for (const auto& [key, _] : r.items()) {
                if (key != "kind" && key != "value") {
                    throw ConfigError("unknown lambda_rule field '" + key + "'");
                }
            }
            c.lambda_rule =
                LambdaRule::parse(r.at("kind").get<std::string>(), r.at("value").get<double>());
        }
        if (j.contains("mode") && !j.at("mode").is_null()) {
            c.mode = parse_mode(j.at("mode").get<std::string>());
        }
        if (j.contains("a")) c.a = j.at("a").get<double>();
        if (j.contains("T") && !j.at("T").is_null()) c.T = j.at("T").get<double>();
        if (j.contains("t") && !j.at("t").is_null()) c.t = j.at("t").get<double>();
        if (j.contains("replicas")) c.replicas = j.at("replicas").get<std::int64_t>();
        if (j.contains("master_seed")) c.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("threads")) c.threads = j.at("threads").get<int>();
        if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
        if (j.contains("output_format")) {
            const auto f = j.at("output_format").get<std::string>();
            if (f == "csv") {
                c.output_format = OutputFormat::csv;
            } else if (f == "json") {
                c.output_format = OutputFormat::json;
            } else {
                throw ConfigError("output_format must be csv or json");
            }
        }
        if (j.contains("record_timing")) c.record_timing = j.at("record_timing").get<bool>();
        if (j.contains("a_grid")) c.a_grid = j.at("a_grid").get<std::vector<double>>();
        if (j.contains("eps_grid")) c.eps_grid = j.at("eps_grid").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid config: ") + e.what());
    }
    validate(c);
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

}  // namespace nrperc::experiments

#endif  // NRPERC_EXPERIMENTS_CONFIG_HPP
