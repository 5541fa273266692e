#ifndef NRPERC_EXPLORATION_HPP
#define NRPERC_EXPLORATION_HPP

// Mark-based breadth-first construction of MNR_n(pi w) and the walks it
// induces.
//
// Marks M_1, M_2, ... are i.i.d. with P(M = i) = w_i / l_n. A fresh mark is a
// newly found vertex and brings Poisson(pi w_i) potential neighbours; a
// repeated mark finds nothing. Every step consumes one potential neighbour
// when there is one. The walk Z(l) = Z(l-1) + X(l) - 1 tracks this stack up
// to its running minimum, and S(l) replaces X(l) by its mean pi w_{M_l}.
//
// Only the size of the potential stack is stored: which potential vertex is
// consumed never matters, since the next mark is drawn independently.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "nrperc/errors.hpp"
#include "nrperc/graphgen.hpp"
#include "nrperc/params.hpp"
#include "nrperc/rng.hpp"
#include "nrperc/theory.hpp"
#include "nrperc/union_find.hpp"

namespace nrperc {

/// A maximal run of steps exploring one component. Steps are 1-based and inclusive.
struct Excursion {
    std::int64_t start_step = 0;
    std::int64_t end_step = 0;
    std::int64_t real_vertices = 0;  // fresh marks inside the run = component size

    std::int64_t length() const { return end_step - start_step + 1; }
};

struct ExplorationTrace {
    std::int64_t steps = 0;
    std::vector<std::int64_t> Z;                      // Z[0] = 0
    std::vector<double> S;                            // S[0] = 0
    std::vector<std::int64_t> repeats;                // R(l), R(0) = 0
    std::vector<std::int64_t> potential_stack_size;   // after step l
    std::vector<std::int64_t> new_mark;               // 1-based vertex id on fresh steps, 0 on repeats
    std::vector<Vertex> explored_order;               // V_l = first (l - R(l)) entries
    std::vector<Excursion> excursions;                // closed excursions, in order
    std::optional<Excursion> open_excursion;          // still running when the step budget ran out

    /// Number of distinct vertices found up to step l.
    std::int64_t explored_count(std::int64_t l) const { return l - repeats[static_cast<std::size_t>(l)]; }
};

struct ExplorationOptions {
    /// Stop once every vertex has been found and the stack is empty, instead of
    /// running the full step budget. Used to read off all component sizes.
    bool stop_when_exhausted = false;
};

inline ExplorationTrace run_exploration(const WeightSequence& ws, const PercolationSchedule& s,
                                        const MarkSampler& marks, std::int64_t max_steps, Rng& rng,
                                        ExplorationOptions opt = {}) {
    if (max_steps < 1) throw DomainError("run_exploration: max_steps must be >= 1");
    const auto budget = static_cast<std::size_t>(max_steps);

    ExplorationTrace tr;
    tr.Z.reserve(budget + 1);
    tr.S.reserve(budget + 1);
    tr.repeats.reserve(budget + 1);
    tr.potential_stack_size.reserve(budget + 1);
    tr.new_mark.reserve(budget + 1);
    tr.Z.push_back(0);
    tr.S.push_back(0.0);
    tr.repeats.push_back(0);
    tr.potential_stack_size.push_back(0);
    tr.new_mark.push_back(0);

    std::vector<char> explored(ws.size(), 0);
    std::int64_t pot = 0;
    std::int64_t found = 0;
    Excursion current;
    bool in_excursion = false;
    const auto n = static_cast<std::int64_t>(ws.size());

    for (std::int64_t l = 1; l <= max_steps; ++l) {
        const Vertex m = marks(rng);
        const bool fresh = !explored[m];
        std::int64_t X = 0;
        if (fresh) {
            explored[m] = 1;
            ++found;
            tr.explored_order.push_back(m);
            X = static_cast<std::int64_t>(poisson(rng, s.pi_n * ws[m]));
            if (pot == 0) {
                // empty stack: the fresh vertex roots a new component
                in_excursion = true;
                current = Excursion{l, l, 0};
            }
            ++current.real_vertices;
        }
        if (pot > 0) --pot;
        pot += X;

        tr.Z.push_back(tr.Z.back() + X - 1);
        tr.S.push_back(tr.S.back() + (fresh ? s.pi_n * ws[m] : 0.0) - 1.0);
        tr.repeats.push_back(tr.repeats.back() + (fresh ? 0 : 1));
        tr.potential_stack_size.push_back(pot);
        tr.new_mark.push_back(fresh ? static_cast<std::int64_t>(m) + 1 : 0);
        tr.steps = l;

        if (in_excursion && pot == 0) {
            current.end_step = l;
            tr.excursions.push_back(current);
            in_excursion = false;
        }
        if (opt.stop_when_exhausted && found == n && pot == 0) break;
    }
    if (in_excursion) {
        current.end_step = tr.steps;
        tr.open_excursion = current;
    }
    return tr;
}

inline ExplorationTrace run_exploration(const WeightSequence& ws, const PercolationSchedule& s,
                                        std::int64_t max_steps, Rng& rng,
                                        ExplorationOptions opt = {}) {
    const MarkSampler marks(ws);
    return run_exploration(ws, s, marks, max_steps, rng, opt);
}

/// Largest number of real vertices in any excursion (closed or open).
inline std::int64_t largest_excursion(const ExplorationTrace& tr) {
    std::int64_t best = 0;
    for (const auto& e : tr.excursions) best = std::max(best, e.real_vertices);
    if (tr.open_excursion) best = std::max(best, tr.open_excursion->real_vertices);
    return best;
}

/// Throws InvariantViolation unless the walk identities hold at every step:
/// Z drops by exactly one on repeats, R is nondecreasing with R(l) <= l,
/// |V_l| = l - R(l), and excursions are disjoint and ordered.
inline void check_trace_invariants(const ExplorationTrace& tr) {
    const auto len = static_cast<std::size_t>(tr.steps) + 1;
    if (tr.Z.size() != len || tr.S.size() != len || tr.repeats.size() != len ||
        tr.potential_stack_size.size() != len || tr.new_mark.size() != len) {
        throw InvariantViolation("trace arrays do not have steps + 1 entries");
    }
    if (tr.Z[0] != 0 || tr.repeats[0] != 0) throw InvariantViolation("trace does not start at 0");
    std::int64_t running_min = 0;
    for (std::size_t l = 1; l < len; ++l) {
        // the stack is empty exactly when Z reaches a new strict running minimum
        const bool new_min = tr.Z[l] < running_min;
        if (new_min != (tr.potential_stack_size[l] == 0)) {
            throw InvariantViolation("potential stack disagrees with the running minimum of Z");
        }
        running_min = std::min(running_min, tr.Z[l]);
        const std::int64_t dz = tr.Z[l] - tr.Z[l - 1];
        const std::int64_t dr = tr.repeats[l] - tr.repeats[l - 1];
        if (dz < -1) throw InvariantViolation("Z decreased by more than one");
        if (dr != 0 && dr != 1) throw InvariantViolation("repeat count is not a counter");
        if (dr == 1 && (dz != -1 || tr.new_mark[l] != 0)) {
            throw InvariantViolation("repeated mark did not decrement Z by exactly one");
        }
        if (dr == 0 && tr.new_mark[l] == 0) throw InvariantViolation("fresh step has no mark");
        if (tr.repeats[l] > static_cast<std::int64_t>(l)) throw InvariantViolation("R(l) > l");
    }
    const std::int64_t found = tr.explored_count(tr.steps);
    if (found != static_cast<std::int64_t>(tr.explored_order.size())) {
        throw InvariantViolation("|V_l| != l - R(l)");
    }
    std::int64_t last_end = 0;
    std::int64_t in_excursions = 0;
    for (const auto& e : tr.excursions) {
        if (e.start_step <= last_end || e.end_step < e.start_step || e.real_vertices < 1) {
            throw InvariantViolation("excursions overlap or are malformed");
        }
        last_end = e.end_step;
        in_excursions += e.real_vertices;
    }
    if (tr.open_excursion) in_excursions += tr.open_excursion->real_vertices;
    if (in_excursions != found) {
        throw InvariantViolation("excursion vertex counts do not add up to |V_l|");
    }
}

namespace detail {

inline std::int64_t step_at(double t, double beta_n, std::int64_t steps, const char* who) {
    if (!(t >= 0.0)) throw DomainError(std::string(who) + ": t must be nonnegative");
    const auto l = static_cast<std::int64_t>(std::floor(t * beta_n));
    if (l > steps) {
        throw RangeError(std::string(who) + ": floor(t*beta_n) = " + std::to_string(l) +
                         " exceeds the trace length " + std::to_string(steps));
    }
    return l;
}

}  // namespace detail

/// (t, beta_n^{-1} Z(floor(t beta_n))) on the given grid.
inline std::vector<std::pair<double, double>> rescaled_walk(const ExplorationTrace& tr,
                                                            const PercolationSchedule& s,
                                                            const std::vector<double>& grid) {
    std::vector<std::pair<double, double>> out;
    out.reserve(grid.size());
    for (double t : grid) {
        const auto l = detail::step_at(t, s.beta_n, tr.steps, "rescaled_walk");
        out.emplace_back(t, static_cast<double>(tr.Z[static_cast<std::size_t>(l)]) / s.beta_n);
    }
    return out;
}

/// max over steps l <= floor(T beta_n) of |Z(l)/beta_n - curve(l/beta_n)|.
inline double sup_distance_to_curve(const ExplorationTrace& tr, double beta_n, double T,
                                    const std::function<double(double)>& curve) {
    const auto last = detail::step_at(T, beta_n, tr.steps, "sup_distance_to_limit");
    double best = 0.0;
    for (std::int64_t l = 0; l <= last; ++l) {
        const double t = static_cast<double>(l) / beta_n;
        const double d =
            std::abs(static_cast<double>(tr.Z[static_cast<std::size_t>(l)]) / beta_n - curve(t));
        best = std::max(best, d);
    }
    return best;
}

inline double sup_distance_to_limit(const ExplorationTrace& tr, const PercolationSchedule& s,
                                    const ModelParams& p, const TheoryConstants& k, double T) {
    return sup_distance_to_curve(tr, s.beta_n, T,
                                 [&](double t) { return limit_curve_z(t, p, k); });
}

/// R(floor(t beta_n)) / beta_n.
inline double repeat_fraction(const ExplorationTrace& tr, const PercolationSchedule& s, double t) {
    const auto l = detail::step_at(t, s.beta_n, tr.steps, "repeat_fraction");
    return static_cast<double>(tr.repeats[static_cast<std::size_t>(l)]) / s.beta_n;
}

/// nu_n(t) = sum_{i not in V} wbar_i^2 / sum_{i not in V} wbar_i at step floor(t beta_n).
inline double empirical_forward_degree(const ExplorationTrace& tr, const WeightSequence& ws,
                                       const PercolationSchedule& s, double t) {
    const auto l = detail::step_at(t, s.beta_n, tr.steps, "empirical_forward_degree");
    long double sq = 0.0L, lin = 0.0L;
    for (double w : ws.weights) {
        const double wb = s.pi_n * w;
        sq += wb * wb;
        lin += wb;
    }
    const auto found = static_cast<std::size_t>(tr.explored_count(l));
    for (std::size_t k = 0; k < found; ++k) {
        const double wb = s.pi_n * ws[tr.explored_order[k]];
        sq -= wb * wb;
        lin -= wb;
    }
    if (lin <= 0.0L) return 0.0;
    return static_cast<double>(sq / lin);
}

/// Largest component of MNR_n(pi w) restricted to the vertices not found in
/// the first floor(t beta_n) exploration steps. Given the explored set, that
/// restriction is again a Norros-Reittu graph: pairs i, j outside it carry
/// Poisson(wbar_i wbar_j / lbar_n) edges.
inline std::int64_t residual_largest_component(const WeightSequence& ws,
                                               const PercolationSchedule& s, double t, Rng& rng) {
    if (!(t > 0.0)) throw DomainError("residual_largest_component: t must be positive");
    const auto steps = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(t * s.beta_n)));
    const MarkSampler marks(ws);
    const ExplorationTrace tr = run_exploration(ws, s, marks, steps, rng);

    std::vector<char> explored(ws.size(), 0);
    for (Vertex v : tr.explored_order) explored[v] = 1;
    std::vector<Vertex> rest;
    rest.reserve(ws.size() - tr.explored_order.size());
    for (std::size_t v = 0; v < ws.size(); ++v) {
        if (!explored[v]) rest.push_back(static_cast<Vertex>(v));
    }
    if (rest.empty()) return 0;

    const MarkSampler rest_marks(ws, rest);
    const double lbar = s.pi_n * ws.ell_n;
    const double rest_weight = s.pi_n * rest_marks.total_weight();
    const std::uint64_t m = poisson(rng, rest_weight * rest_weight / (2.0 * lbar));
    UnionFind uf(ws.size());
    std::int64_t best = 1;
    for (std::uint64_t k = 0; k < m; ++k) {
        const Vertex a = rest_marks(rng);
        const Vertex b = rest_marks(rng);
        if (a != b) {
            uf.unite(a, b);
            best = std::max<std::int64_t>(best, uf.set_size(a));
        }
    }
    return best;
}

/// Trajectory CSV: `step,Z,S,repeats,new_mark`, one row per step.
inline void write_trajectory_csv(std::ostream& os, const ExplorationTrace& tr) {
    os << "step,Z,S,repeats,new_mark\n";
    for (std::int64_t l = 1; l <= tr.steps; ++l) {
        const auto i = static_cast<std::size_t>(l);
        os << l << ',' << tr.Z[i] << ',' << tr.S[i] << ',' << tr.repeats[i] << ','
           << tr.new_mark[i] << '\n';
    }
}

}  // namespace nrperc

#endif  // NRPERC_EXPLORATION_HPP
