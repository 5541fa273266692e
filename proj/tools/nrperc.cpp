// Command-line front end: theory tables, single samples, exploration traces
// and the Monte Carlo experiments.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nrperc/nrperc.hpp"

using namespace nrperc;
using namespace nrperc::experiments;

namespace {

/// Flags shared by every subcommand that builds a model or an experiment.
struct ModelFlags {
    double tau = 2.5;
    double C = 1.0;
    std::int64_t n = 10000;
    std::string lambda_kind = "power";
    double lambda_value = 0.1;
    std::string mode;
    std::uint64_t seed = 1;

    CLI::Option* tau_opt = nullptr;
    CLI::Option* C_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* kind_opt = nullptr;
    CLI::Option* value_opt = nullptr;
    CLI::Option* seed_opt = nullptr;

    void add_to(CLI::App& app) {
        tau_opt = app.add_option("--tau", tau, "power-law exponent in (2, 3)")->capture_default_str();
        C_opt = app.add_option("--C", C, "weight scale C > 0")->capture_default_str();
        n_opt = app.add_option("--n", n, "number of vertices")->capture_default_str();
        kind_opt = app.add_option("--lambda-kind", lambda_kind, "constant | power | log_power")
                       ->capture_default_str();
        value_opt = app.add_option("--lambda-value", lambda_value, "lambda rule parameter")
                        ->capture_default_str();
        app.add_option("--mode", mode, "multi | single (default depends on the command)");
        seed_opt = app.add_option("--seed", seed, "master seed")->capture_default_str();
    }

    PercolationMode resolved_mode(PercolationMode fallback) const {
        return mode.empty() ? fallback : parse_mode(mode);
    }

    PercolationSchedule schedule(const ModelParams& p, PercolationMode fallback) const {
        return make_schedule(p, resolved_mode(fallback), LambdaRule::parse(lambda_kind, lambda_value));
    }
};

/// Output flags shared by the commands that write a report.
struct OutputFlags {
    std::string out;
    std::string format = "json";

    void add_to(CLI::App& app) {
        app.add_option("--out", out, "output path (default: stdout)");
        app.add_option("--format", format, "json | csv")
            ->check(CLI::IsMember({"json", "csv"}))
            ->capture_default_str();
    }

    OutputFormat parsed() const { return format == "csv" ? OutputFormat::csv : OutputFormat::json; }

    void emit(const std::string& contents) const {
        if (out.empty()) {
            std::cout << contents;
        } else {
            write_atomically(out, contents);
        }
    }
};

/// One experiment subcommand: a config file, optionally overridden by flags.
struct ExperimentCommand {
    Experiment experiment;
    ModelFlags model;
    OutputFlags output;
    std::string config_path;
    std::int64_t replicas = 1;
    int threads = 1;
    double a = 1.0;
    double T = 0;
    double t = 0;
    bool timing = false;
    std::vector<std::int64_t> n_grid;

    CLI::Option* replicas_opt = nullptr;
    CLI::Option* threads_opt = nullptr;
    CLI::Option* a_opt = nullptr;
    CLI::Option* T_opt = nullptr;
    CLI::Option* t_opt = nullptr;
    CLI::Option* grid_opt = nullptr;

    void add_to(CLI::App& app) {
        app.add_option("--config", config_path, "JSON experiment config")->check(CLI::ExistingFile);
        model.add_to(app);
        output.add_to(app);
        grid_opt = app.add_option("--n-grid", n_grid, "ascending list of n (overrides --n)");
        replicas_opt = app.add_option("--replicas", replicas, "replicas per n")->capture_default_str();
        threads_opt = app.add_option("--threads", threads, "worker threads")->capture_default_str();
        a_opt = app.add_option("--a", a, "core parameter a > 0")->capture_default_str();
        T_opt = app.add_option("--T", T, "exploration horizon in units of beta_n");
        t_opt = app.add_option("--t", t, "diagnostic time in units of beta_n");
        app.add_flag("--timing", timing, "record per-replica runtimes");
    }

    ExperimentConfig config() const {
        ExperimentConfig c;
        if (!config_path.empty()) c = load_config(config_path);
        c.experiment = experiment;
        if (model.tau_opt->count()) c.tau = model.tau;
        if (model.C_opt->count()) c.C = model.C;
        if (grid_opt->count()) {
            c.n_grid = n_grid;
        } else if (model.n_opt->count() || config_path.empty()) {
            c.n_grid = {model.n};
        }
        if (model.kind_opt->count() || model.value_opt->count()) {
            c.lambda_rule = LambdaRule::parse(model.lambda_kind, model.lambda_value);
        }
        if (!model.mode.empty()) c.mode = parse_mode(model.mode);
        if (model.seed_opt->count()) c.master_seed = model.seed;
        if (replicas_opt->count()) c.replicas = replicas;
        if (threads_opt->count()) c.threads = threads;
        if (a_opt->count()) c.a = a;
        if (T_opt->count()) c.T = T;
        if (t_opt->count()) c.t = t;
        if (timing) c.record_timing = true;
        if (!output.out.empty()) c.output_path = output.out;
        if (output.format == "csv") c.output_format = OutputFormat::csv;
        validate(c);
        return c;
    }

    void run() const {
        const ExperimentConfig c = config();
        const ExperimentResult r = execute(c);
        output.emit(render(r, c.output_format));
    }
};

MultiGraph as_multigraph(const SimpleGraph& g) {
    MultiGraph m;
    m.n = g.n;
    m.total_edge_count = g.edges.size();
    for (const auto& [u, v] : g.edges) m.edges.push_back({u, v, 1});
    return m;
}

void write_file(const std::string& path, const std::string& contents) {
    if (path.empty() || path == "-") {
        std::cout << contents;
    } else {
        write_atomically(path, contents);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Percolation on scale-free Norros-Reittu graphs"};
    app.require_subcommand(1);

    // theory
    auto* theory = app.add_subcommand("theory", "constants, core limits and operator norms");
    ExperimentConfig theory_cfg;
    theory_cfg.experiment = Experiment::theory_tables;
    OutputFlags theory_out;
    theory->add_option("--tau", theory_cfg.tau, "power-law exponent")->capture_default_str();
    theory->add_option("--C", theory_cfg.C, "weight scale")->capture_default_str();
    theory->add_option("--a", theory_cfg.a, "core parameter for the operator norms")
        ->capture_default_str();
    theory->add_option("--a-grid", theory_cfg.a_grid, "core parameters for the limit table");
    theory->add_option("--eps-grid", theory_cfg.eps_grid, "truncations for the operator norm");
    theory_out.add_to(*theory);

    // generate
    auto* generate = app.add_subcommand("generate", "sample one percolated graph");
    ModelFlags gen_model;
    gen_model.add_to(*generate);
    std::string edges_path = "-";
    std::string components_path;
    std::optional<double> pi_override;
    bool simple = false;
    generate->add_option("--out", edges_path, "edge list path ('-' for stdout)");
    generate->add_option("--components", components_path, "component size CSV path");
    generate->add_option("--pi", pi_override, "retention probability (overrides the schedule)");
    generate->add_flag("--simple", simple, "collapse to the single-edge graph before percolating");

    // explore
    auto* explore = app.add_subcommand("explore", "run the exploration process once");
    ModelFlags exp_model;
    exp_model.add_to(*explore);
    OutputFlags exp_out;
    exp_out.add_to(*explore);
    std::optional<double> explore_T;
    std::string trajectory_path;
    explore->add_option("--T", explore_T, "horizon in units of beta_n (default 1.5 zeta)");
    explore->add_option("--trajectory", trajectory_path, "trajectory CSV path");

    // experiments
    std::vector<std::pair<ExperimentCommand, CLI::App*>> commands;
    const std::vector<std::tuple<std::string, Experiment, std::string>> experiment_commands = {
        {"run", Experiment::multi_giant, "run the experiment named in --config"},
        {"giant", Experiment::multi_giant, "largest and second component of MNR(pi w)"},
        {"single-vs-multi", Experiment::single_vs_multi, "coupled single/multi giants"},
        {"core", Experiment::core_giant, "core giant, its weight and one-neighbourhood"},
        {"residual", Experiment::residual_components, "largest component left after exploration"},
        {"repeat-fraction", Experiment::repeat_fraction, "repeat marks during exploration"},
    };
    commands.reserve(experiment_commands.size());
    for (const auto& [name, e, help] : experiment_commands) {
        auto* sub = app.add_subcommand(name, help);
        commands.emplace_back(ExperimentCommand{e, {}, {}, {}, 1, 1, 1.0, 0, 0, false, {}}, sub);
        commands.back().first.add_to(*sub);
    }
    commands.front().second->get_option("--config")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (theory->parsed()) {
            theory_cfg.output_path = theory_out.out;
            const auto r = execute(theory_cfg);
            theory_out.emit(render(r, theory_out.parsed()));
            return 0;
        }
        if (generate->parsed()) {
            const auto p = ModelParams::make(gen_model.tau, gen_model.C, gen_model.n);
            const auto ws = build_weights(p);
            const double pi = pi_override ? *pi_override
                                          : gen_model.schedule(p, simple ? PercolationMode::single
                                                                          : PercolationMode::multi)
                                                .pi_n;
            Rng rng = make_rng(derive_seed(gen_model.seed, static_cast<std::uint64_t>(p.n), 0));
            MultiGraph g;
            if (simple) {
                g = as_multigraph(percolate_simple(collapse_to_simple(sample_mnr(ws, rng)), pi, rng));
            } else {
                g = sample_percolated_mnr_direct(ws, pi, rng);
            }
            check_invariants(g);
            std::ostringstream edges;
            write_edge_list(edges, g);
            write_file(edges_path, edges.str());
            if (!components_path.empty()) {
                std::ostringstream comps;
                write_component_table(comps, component_sizes(g));
                write_file(components_path, comps.str());
            }
            return 0;
        }
        if (explore->parsed()) {
            const auto p = ModelParams::make(exp_model.tau, exp_model.C, exp_model.n);
            const auto ws = build_weights(p);
            const auto k = compute_constants(p);
            const auto s = exp_model.schedule(p, PercolationMode::multi);
            const double T = explore_T.value_or(1.5 * k.zeta);
            Rng rng = make_rng(derive_seed(exp_model.seed, static_cast<std::uint64_t>(p.n), 0));
            const auto tr = run_exploration(ws, s, steps_for(T, s.beta_n), rng);
            check_trace_invariants(tr);
            if (!trajectory_path.empty()) {
                std::ostringstream os;
                write_trajectory_csv(os, tr);
                write_file(trajectory_path, os.str());
            }
            const json summary{
                {"schedule", schedule_json(s)},
                {"T", T},
                {"steps", tr.steps},
                {"sup_distance", sup_distance_to_limit(tr, s, p, k, T)},
                {"largest_excursion", largest_excursion(tr)},
                {"largest_excursion_over_beta", largest_excursion(tr) / s.beta_n},
                {"repeats", tr.repeats.back()},
                {"repeat_fraction", repeat_fraction(tr, s, T)},
                {"zeta", k.zeta}};
            if (exp_out.parsed() == OutputFormat::csv) {
                std::ostringstream os;
                os << "key,value\n";
                for (const auto& [key, v] : summary.items()) {
                    if (v.is_number()) os << key << ',' << v.dump() << '\n';
                }
                exp_out.emit(os.str());
            } else {
                exp_out.emit(summary.dump(2) + "\n");
            }
            return 0;
        }
        for (auto& [cmd, sub] : commands) {
            if (!sub->parsed()) continue;
            if (sub->get_name() == "run") {
                cmd.experiment = load_config(cmd.config_path).experiment;
            }
            cmd.run();
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
