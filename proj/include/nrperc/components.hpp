#ifndef NRPERC_COMPONENTS_HPP
#define NRPERC_COMPONENTS_HPP

// Connected components, the high-weight core and its one-neighbourhood.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "nrperc/errors.hpp"
#include "nrperc/graph.hpp"
#include "nrperc/params.hpp"
#include "nrperc/union_find.hpp"

namespace nrperc {

struct ComponentSummary {
    std::vector<std::int64_t> sizes;  // non-increasing, sums to n
    std::vector<Vertex> giant_members;  // sorted
    std::int64_t second_size = 0;

    std::int64_t giant_size() const { return sizes.empty() ? 0 : sizes.front(); }
};

namespace detail {

inline ComponentSummary summarize_forest(UnionFind& uf) {
    const auto n = uf.size();
    ComponentSummary s;
    if (n == 0) return s;

    // First visit of a root in increasing vertex order gives the component's smallest id.
    std::vector<std::uint32_t> roots;
    std::vector<char> seen(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        const auto r = uf.find(v);
        if (!seen[r]) {
            seen[r] = 1;
            roots.push_back(r);
        }
    }
    std::uint32_t giant_root = roots.front();
    std::uint32_t giant_size = uf.set_size(giant_root);
    s.sizes.reserve(roots.size());
    for (auto r : roots) {
        const auto sz = uf.set_size(r);
        s.sizes.push_back(sz);
        if (sz > giant_size) {  // strict: ties keep the earlier (smaller-id) component
            giant_size = sz;
            giant_root = r;
        }
    }
    std::sort(s.sizes.begin(), s.sizes.end(), std::greater<>());
    s.second_size = s.sizes.size() > 1 ? s.sizes[1] : 0;
    s.giant_members.reserve(giant_size);
    for (std::uint32_t v = 0; v < n; ++v) {
        if (uf.find(v) == giant_root) s.giant_members.push_back(v);
    }
    return s;
}

}  // namespace detail

/// Union-find over the edge list; multiplicities and loops are irrelevant.
inline ComponentSummary component_sizes(const SimpleGraph& g) {
    UnionFind uf(static_cast<std::size_t>(g.n));
    for (const auto& [u, v] : g.edges) uf.unite(u, v);
    return detail::summarize_forest(uf);
}

inline ComponentSummary component_sizes(const MultiGraph& g) {
    UnionFind uf(static_cast<std::size_t>(g.n));
    for (const auto& e : g.edges) {
        if (e.u != e.v) uf.unite(e.u, e.v);
    }
    return detail::summarize_forest(uf);
}

/// Component table as CSV `rank,size`.
inline void write_component_table(std::ostream& os, const ComponentSummary& s) {
    os << "rank,size\n";
    for (std::size_t r = 0; r < s.sizes.size(); ++r) os << (r + 1) << ',' << s.sizes[r] << '\n';
}

/// Subgraph induced on the first `core_size` vertices (the highest weights).
inline SimpleGraph extract_core(const SimpleGraph& g, std::int64_t core_size) {
    if (core_size < 1 || core_size > g.n) {
        throw RangeError("extract_core: core_size must lie in [1, n]");
    }
    SimpleGraph core;
    core.n = core_size;
    const auto limit = static_cast<Vertex>(core_size);
    for (const auto& e : g.edges) {
        if (e.first < limit && e.second < limit) core.edges.push_back(e);
    }
    return core;
}

struct KernelCheck {
    double u = 0;
    double v = 0;
    double empirical = 0;  // N_n(a) pi_n (1 - exp(-w_i w_j / l_n)), i = ceil(u N_n), j = ceil(v N_n)
    double limit = 0;      // a c_F^2/mu (uv)^{-alpha}
    double ratio = 0;
};

/// Compares the finite-n core edge kernel with its rank-one limit on a (u,v) grid.
inline std::vector<KernelCheck> kernel_convergence_check(
    const PercolationSchedule& s, const WeightSequence& ws, double a,
    const std::vector<std::pair<double, double>>& grid) {
    if (s.mode != PercolationMode::single || !s.N_n) {
        throw DomainError("kernel_convergence_check requires a single-mode schedule");
    }
    const ModelParams& p = ws.params;
    const double Nn = *s.N_n;
    const double Nna = std::floor(a * Nn);
    std::vector<KernelCheck> out;
    out.reserve(grid.size());
    for (const auto& [u, v] : grid) {
        if (!(u > 0.0 && u <= a && v > 0.0 && v <= a)) {
            throw DomainError("kernel_convergence_check: u, v must lie in (0, a]");
        }
        const double iu = std::ceil(u * Nn);
        const double iv = std::ceil(v * Nn);
        if (iu < 1 || iv < 1 || iu > static_cast<double>(ws.size()) ||
            iv > static_cast<double>(ws.size())) {
            throw RangeError("kernel_convergence_check: vertex index outside [1, n]");
        }
        const double wi = ws[static_cast<std::size_t>(iu) - 1];
        const double wj = ws[static_cast<std::size_t>(iv) - 1];
        KernelCheck k;
        k.u = u;
        k.v = v;
        k.empirical = Nna * s.pi_n * -std::expm1(-wi * wj / ws.ell_n);
        k.limit = a * p.c_F * p.c_F / p.mu * std::pow(u * v, -p.alpha);
        k.ratio = k.empirical / k.limit;
        out.push_back(k);
    }
    return out;
}

struct CoreGiant {
    std::int64_t core_size = 0;
    std::int64_t core_giant_size = 0;
    double core_giant_weight = 0;  // sum of pi_n w_i over the core giant
    std::vector<Vertex> members;
};

inline CoreGiant core_giant_and_weight(const SimpleGraph& core, const WeightSequence& ws,
                                       const PercolationSchedule& s) {
    const ComponentSummary cs = component_sizes(core);
    CoreGiant g;
    g.core_size = core.n;
    g.core_giant_size = cs.giant_size();
    long double weight = 0.0L;
    for (Vertex v : cs.giant_members) weight += s.pi_n * ws[v];
    g.core_giant_weight = static_cast<double>(weight);
    g.members = cs.giant_members;
    return g;
}

/// Number of vertices outside the core adjacent to at least one member.
inline std::int64_t one_neighborhood(const SimpleGraph& g, const std::vector<Vertex>& members,
                                     std::int64_t core_size) {
    std::vector<char> is_member(static_cast<std::size_t>(g.n), 0);
    for (Vertex v : members) {
        if (static_cast<std::int64_t>(v) >= core_size) {
            throw DomainError("one_neighborhood: members must lie inside the core");
        }
        is_member[v] = 1;
    }
    std::vector<char> hit(static_cast<std::size_t>(g.n), 0);
    std::int64_t count = 0;
    const auto limit = static_cast<Vertex>(core_size);
    for (const auto& [u, v] : g.edges) {
        // u < v, so only v can be outside when u is a member, and vice versa
        if (is_member[u] && v >= limit && !hit[v]) {
            hit[v] = 1;
            ++count;
        }
        if (is_member[v] && u >= limit && !hit[u]) {
            hit[u] = 1;
            ++count;
        }
    }
    return count;
}

struct CoreReport {
    double a = 0;
    std::int64_t core_size = 0;
    std::int64_t core_giant_size = 0;
    double core_giant_weight = 0;
    std::int64_t one_neighborhood_size = 0;
    std::vector<KernelCheck> kernel_check;
};

inline CoreReport analyze_core(const SimpleGraph& percolated, const WeightSequence& ws,
                               const PercolationSchedule& s, double a,
                               const std::vector<std::pair<double, double>>& grid = {}) {
    CoreReport r;
    r.a = a;
    r.core_size = core_prefix_size(s, a);
    const SimpleGraph core = extract_core(percolated, r.core_size);
    const CoreGiant cg = core_giant_and_weight(core, ws, s);
    r.core_giant_size = cg.core_giant_size;
    r.core_giant_weight = cg.core_giant_weight;
    r.one_neighborhood_size = one_neighborhood(percolated, cg.members, r.core_size);
    if (!grid.empty()) r.kernel_check = kernel_convergence_check(s, ws, a, grid);
    return r;
}

}  // namespace nrperc

#endif  // NRPERC_COMPONENTS_HPP
