#ifndef NRPERC_EXPERIMENTS_SUITES_HPP
#define NRPERC_EXPERIMENTS_SUITES_HPP

// One replica of each experiment, plus the theory payload embedded in its
// report. Every sampled graph and trace goes through the structural checks
// before any statistic is taken from it.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nrperc/components.hpp"
#include "nrperc/errors.hpp"
#include "nrperc/experiments/config.hpp"
#include "nrperc/exploration.hpp"
#include "nrperc/graph.hpp"
#include "nrperc/graphgen.hpp"
#include "nrperc/params.hpp"
#include "nrperc/rng.hpp"
#include "nrperc/theory.hpp"
#include "nrperc/union_find.hpp"

namespace nrperc::experiments {

using Stats = std::map<std::string, double>;

/// Everything about one grid point that replicas share read-only.
struct GridPoint {
    ModelParams params;
    WeightSequence weights;
    PercolationSchedule schedule;
    TheoryConstants constants;
    MarkSampler marks;
    double T = 0;  // exploration horizon in units of beta_n
    double t = 0;  // diagnostic time for repeat_fraction / residual_components

    GridPoint(const ExperimentConfig& c, std::int64_t n)
        : params(ModelParams::make(c.tau, c.C, n)),
          weights(build_weights(params)),
          schedule(make_schedule(params, c.effective_mode(), c.lambda_rule)),
          constants(compute_constants(params)),
          marks(weights) {
        T = c.T.value_or(1.5 * constants.zeta);
        if (c.t) {
            t = *c.t;
        } else if (c.experiment == Experiment::residual_components) {
            t = forward_degree_horizon(0.25, params);
        } else {
            t = constants.zeta;
        }
    }
};

/// Default (u, v) grid for the kernel check: {a/4, a/2, a}^2.
inline std::vector<std::pair<double, double>> kernel_grid(double a) {
    std::vector<std::pair<double, double>> g;
    for (double u : {a / 4, a / 2, a}) {
        for (double v : {a / 4, a / 2, a}) g.emplace_back(u, v);
    }
    return g;
}

inline std::int64_t steps_for(double t, double beta_n) {
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(t * beta_n)));
}

inline Stats multi_giant_replica(const GridPoint& gp, Rng& rng) {
    const auto& s = gp.schedule;
    const MultiGraph g = sample_percolated_mnr_direct(gp.weights, gp.marks, s.pi_n, rng);
    check_invariants(g);
    const ComponentSummary cs = component_sizes(g);
    return {{"giant", static_cast<double>(cs.giant_size())},
            {"second", static_cast<double>(cs.second_size)},
            {"giant_over_beta", cs.giant_size() / s.beta_n},
            {"second_over_beta", cs.second_size / s.beta_n},
            {"edges", static_cast<double>(g.total_edge_count)}};
}

inline Stats single_vs_multi_replica(const GridPoint& gp, Rng& rng) {
    const auto& s = gp.schedule;
    const MultiGraph full = sample_mnr(gp.weights, gp.marks, rng);
    check_invariants(full);
    const CoupledPercolation cp = percolate_coupled(full, s.pi_n, rng);
    check_invariants(cp.multi);
    check_invariants(cp.simple);
    if (!is_subgraph_of(cp.simple, cp.multi)) {
        throw InvariantViolation("coupled simple graph is not a subgraph of the multigraph");
    }
    const auto multi = component_sizes(cp.multi).giant_size();
    const auto single = component_sizes(cp.simple).giant_size();
    if (multi < single) throw InvariantViolation("|C(1)| < |C*(1)| under the monotone coupling");
    return {{"multi_giant", static_cast<double>(multi)},
            {"single_giant", static_cast<double>(single)},
            {"multi_over_beta", multi / s.beta_n},
            {"single_over_beta", single / s.beta_n},
            {"diff_over_beta", (multi - single) / s.beta_n}};
}

inline Stats exploration_replica(const GridPoint& gp, Rng& rng) {
    const auto& s = gp.schedule;
    const auto& p = gp.params;
    const auto& k = gp.constants;
    const ExplorationTrace tr = run_exploration(gp.weights, s, gp.marks, steps_for(gp.T, s.beta_n), rng);
    check_trace_invariants(tr);
    const double half = k.zeta / 2.0;
    const double zbar_half = rescaled_walk(tr, s, {half}).front().second;
    return {{"sup_distance", sup_distance_to_limit(tr, s, p, k, gp.T)},
            {"zbar_half_zeta", zbar_half},
            {"deviation_half_zeta", std::abs(zbar_half - limit_curve_z(half, p, k))},
            {"largest_excursion_over_beta", largest_excursion(tr) / s.beta_n},
            {"repeat_fraction_T", repeat_fraction(tr, s, gp.T)}};
}

inline Stats repeat_fraction_replica(const GridPoint& gp, Rng& rng) {
    const auto& s = gp.schedule;
    const ExplorationTrace tr = run_exploration(gp.weights, s, gp.marks, steps_for(gp.t, s.beta_n), rng);
    check_trace_invariants(tr);
    return {{"repeat_fraction", repeat_fraction(tr, s, gp.t)},
            {"repeats", static_cast<double>(tr.repeats.back())},
            {"pi_n", s.pi_n}};
}

inline Stats residual_replica(const GridPoint& gp, Rng& rng) {
    const auto& s = gp.schedule;
    const auto largest = residual_largest_component(gp.weights, s, gp.t, rng);
    return {{"residual_largest", static_cast<double>(largest)},
            {"residual_over_beta", largest / s.beta_n}};
}

inline Stats core_replica(const GridPoint& gp, double a, Rng& rng) {
    const auto& s = gp.schedule;
    const MultiGraph full = sample_mnr(gp.weights, gp.marks, rng);
    check_invariants(full);
    const SimpleGraph snr = collapse_to_simple(full);
    const SimpleGraph g = percolate_simple(snr, s.pi_n, rng);
    check_invariants(g);

    const CoreReport r = analyze_core(g, gp.weights, s, a);
    const SimpleGraph core = extract_core(g, r.core_size);
    const CoreGiant cg = core_giant_and_weight(core, gp.weights, s);

    // N_1 is a union of neighbourhoods, so it is at most the summed outside degree
    std::vector<char> member(static_cast<std::size_t>(g.n), 0);
    for (Vertex v : cg.members) member[v] = 1;
    const auto limit = static_cast<Vertex>(r.core_size);
    std::int64_t outside_degree = 0;
    for (const auto& [u, v] : g.edges) {
        if (member[u] && v >= limit) ++outside_degree;
        if (member[v] && u >= limit) ++outside_degree;
    }
    if (r.one_neighborhood_size > outside_degree) {
        throw InvariantViolation("one-neighbourhood exceeds the summed outside degree");
    }
    // the core giant and its one-neighbourhood sit inside one component of g
    UnionFind uf(static_cast<std::size_t>(g.n));
    for (const auto& [u, v] : g.edges) uf.unite(u, v);
    const auto host = static_cast<std::int64_t>(uf.set_size(cg.members.front()));
    if (host < r.core_giant_size + r.one_neighborhood_size) {
        throw InvariantViolation("component of the core giant is smaller than core giant + N_1");
    }
    std::int64_t giant = 0;
    for (std::uint32_t v = 0; v < g.n; ++v) {
        if (uf.find(v) == v) giant = std::max<std::int64_t>(giant, uf.set_size(v));
    }

    const double scale = static_cast<double>(gp.params.n) *
                         std::pow(s.pi_n, 1.0 / (3.0 - gp.params.tau));
    const double weight = r.core_giant_weight;
    return {{"core_size", static_cast<double>(r.core_size)},
            {"core_giant_size", static_cast<double>(r.core_giant_size)},
            {"core_giant_fraction", static_cast<double>(r.core_giant_size) / r.core_size},
            {"core_giant_weight", weight},
            {"core_giant_weight_scaled", weight / scale},
            {"one_neighborhood", static_cast<double>(r.one_neighborhood_size)},
            {"one_neighborhood_ratio", r.one_neighborhood_size / weight},
            {"one_neighborhood_gap", std::abs(r.one_neighborhood_size - weight) / weight},
            {"giant_over_beta", giant / s.beta_n},
            {"host_component_over_beta", host / s.beta_n}};
}

inline Stats run_replica(const ExperimentConfig& c, const GridPoint& gp, Rng& rng) {
    switch (c.experiment) {
        case Experiment::multi_giant: return multi_giant_replica(gp, rng);
        case Experiment::single_vs_multi: return single_vs_multi_replica(gp, rng);
        case Experiment::exploration_limit: return exploration_replica(gp, rng);
        case Experiment::repeat_fraction: return repeat_fraction_replica(gp, rng);
        case Experiment::residual_components: return residual_replica(gp, rng);
        case Experiment::core_giant:
        case Experiment::core_weight:
        case Experiment::one_neighborhood: return core_replica(gp, c.a, rng);
        case Experiment::theory_tables: break;
    }
    throw DomainError("experiment " + to_string(c.experiment) + " has no replicas");
}

inline json constants_json(const ModelParams& p, const TheoryConstants& k) {
    return json{{"tau", p.tau},     {"C", p.C},       {"alpha", p.alpha}, {"eta", p.eta},
                {"eta_s", p.eta_s}, {"c_F", p.c_F},   {"mu", p.mu},       {"kappa", k.kappa},
                {"zeta", k.zeta},   {"rho_star_inf", k.rho_star_inf},
                {"c_F_bar", k.c_F_bar}};
}

inline json schedule_json(const PercolationSchedule& s) {
    json j{{"n", s.n}, {"mode", to_string(s.mode)}, {"lambda_n", s.lambda_n},
           {"pi_n", s.pi_n}, {"beta_n", s.beta_n}};
    if (s.N_n) j["N_n"] = *s.N_n;
    return j;
}

/// Reference tables: a-grid of core limits and eps-grid of truncated operator norms.
inline json theory_tables_json(const ExperimentConfig& c) {
    const ModelParams p = ModelParams::make(c.tau, c.C, 1);
    const TheoryConstants k = compute_constants(p);
    json a_table = json::array();
    for (double a : c.a_grid) {
        try {
            const CoreLimit cl = core_limit(a, p);
            a_table.push_back(json{{"a", a},
                                   {"rho_star_a", cl.rho_star_a},
                                   {"scaled_rho_star_a", std::pow(a, 1.0 - p.alpha) * cl.rho_star_a},
                                   {"zeta_a", cl.zeta_a},
                                   {"rho_a_mean", cl.rho_a_mean},
                                   {"gap_to_zeta", (k.zeta - cl.zeta_a) / k.zeta}});
        } catch (const NumericalFailure& e) {
            throw NumericalFailure("theory_tables at a = " + std::to_string(a) + ": " + e.what(),
                                   e.last_residual());
        }
    }
    json norms = json::array();
    const double a_ref = c.a;
    for (double eps : c.eps_grid) {
        if (!(eps > 0 && eps < a_ref)) continue;
        norms.push_back(json{{"eps", eps}, {"a", a_ref},
                             {"operator_norm", truncated_operator_norm(eps, a_ref, p)}});
    }
    return json{{"constants", constants_json(p, k)},
                {"z_argmax", limit_curve_argmax(p, k)},
                {"z_max", limit_curve_max(p, k)},
                {"a_table", a_table},
                {"operator_norms", norms}};
}

/// Theory targets shared by every grid point of one experiment.
inline std::map<std::string, double> targets_for(const ExperimentConfig& c) {
    const ModelParams p = ModelParams::make(c.tau, c.C, 1);
    const TheoryConstants k = compute_constants(p);
    std::map<std::string, double> t;
    switch (c.experiment) {
        case Experiment::multi_giant:
            t["giant_over_beta"] = k.zeta;
            t["second_over_beta"] = 0.0;
            break;
        case Experiment::single_vs_multi:
            t["multi_over_beta"] = k.zeta;
            t["single_over_beta"] = k.zeta;
            t["diff_over_beta"] = 0.0;
            break;
        case Experiment::exploration_limit: {
            t["sup_distance"] = 0.0;
            t["deviation_half_zeta"] = 0.0;
            t["zbar_half_zeta"] = limit_curve_z(k.zeta / 2.0, p, k);
            t["largest_excursion_over_beta"] = k.zeta;
            break;
        }
        case Experiment::repeat_fraction:
            t["slope_vs_pi"] = (c.tau - 2.0) / (3.0 - c.tau);
            break;
        case Experiment::residual_components:
            t["residual_over_beta"] = 0.0;
            break;
        case Experiment::core_giant:
        case Experiment::core_weight:
        case Experiment::one_neighborhood: {
            const CoreLimit cl = core_limit(c.a, p);
            t["core_giant_fraction"] = cl.rho_a_mean;
            t["core_giant_weight_scaled"] = cl.zeta_a;
            t["one_neighborhood_ratio"] = 1.0;
            t["one_neighborhood_gap"] = 0.0;
            t["giant_over_beta"] = k.zeta;
            break;
        }
        case Experiment::theory_tables: break;
    }
    return t;
}

/// Theory section of a report: constants, schedules per n and experiment-specific curves.
inline json theory_json(const ExperimentConfig& c, const std::vector<const GridPoint*>& grid) {
    if (c.experiment == Experiment::theory_tables) return theory_tables_json(c);
    const ModelParams p = ModelParams::make(c.tau, c.C, 1);
    const TheoryConstants k = compute_constants(p);
    json j{{"constants", constants_json(p, k)}, {"targets", targets_for(c)}};
    json schedules = json::array();
    for (const GridPoint* gp : grid) {
        json row = schedule_json(gp->schedule);
        row["T"] = gp->T;
        row["t"] = gp->t;
        if (is_core_experiment(c.experiment)) {
            json kc = json::array();
            for (const auto& kk : kernel_convergence_check(gp->schedule, gp->weights, c.a,
                                                           kernel_grid(c.a))) {
                kc.push_back(json{{"u", kk.u}, {"v", kk.v}, {"empirical", kk.empirical},
                                  {"limit", kk.limit}, {"ratio", kk.ratio}});
            }
            row["kernel_check"] = kc;
            row["core_size"] = core_prefix_size(gp->schedule, c.a);
        }
        if (c.experiment == Experiment::residual_components ||
            c.experiment == Experiment::repeat_fraction) {
            row["forward_degree_asymptote"] = forward_degree_asymptote(gp->t, p);
        }
        schedules.push_back(std::move(row));
    }
    j["schedules"] = schedules;

    if (c.experiment == Experiment::exploration_limit) {
        const double T = grid.empty() ? 1.5 * k.zeta : grid.front()->T;
        json curve = json::array();
        constexpr int kSamples = 60;
        for (int i = 0; i <= kSamples; ++i) {
            const double t = T * i / kSamples;
            curve.push_back(json{{"t", t}, {"z", limit_curve_z(t, p, k)}});
        }
        j["z_curve"] = curve;
        j["z_max"] = limit_curve_max(p, k);
        j["z_argmax"] = limit_curve_argmax(p, k);
    }
    if (is_core_experiment(c.experiment)) {
        const CoreLimit cl = core_limit(c.a, p);
        j["core_limit"] = json{{"a", cl.a}, {"rho_star_a", cl.rho_star_a},
                               {"zeta_a", cl.zeta_a}, {"rho_a_mean", cl.rho_a_mean}};
    }
    return j;
}

}  // namespace nrperc::experiments

#endif  // NRPERC_EXPERIMENTS_SUITES_HPP
