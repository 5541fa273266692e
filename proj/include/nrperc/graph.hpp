#ifndef NRPERC_GRAPH_HPP
#define NRPERC_GRAPH_HPP

// Multigraph and simple-graph containers. Vertices are 0-based: vertex v
// carries the (v+1)-th largest weight. Text formats use 1-based ids.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nrperc/errors.hpp"

namespace nrperc {

using Vertex = std::uint32_t;

struct MultiEdge {
    Vertex u = 0;  // u <= v; u == v is a self-loop
    Vertex v = 0;
    std::uint32_t multiplicity = 1;

    friend bool operator==(const MultiEdge&, const MultiEdge&) = default;
};

struct MultiGraph {
    std::int64_t n = 0;
    std::vector<MultiEdge> edges;  // sorted by (u, v), pairs distinct
    std::uint64_t total_edge_count = 0;

    /// Degree of every vertex; a self-loop of multiplicity k adds 2k.
    std::vector<std::uint64_t> degrees() const {
        std::vector<std::uint64_t> deg(static_cast<std::size_t>(n), 0);
        for (const auto& e : edges) {
            deg[e.u] += e.multiplicity;
            deg[e.v] += e.multiplicity;
        }
        return deg;
    }
};

struct SimpleGraph {
    std::int64_t n = 0;
    std::vector<std::pair<Vertex, Vertex>> edges;  // u < v, sorted, distinct
};

/// Packs the unordered pair {u, v} into a sortable key with the smaller id first.
inline std::uint64_t pair_key(Vertex a, Vertex b) {
    const Vertex lo = std::min(a, b);
    const Vertex hi = std::max(a, b);
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

/// Turns a bag of pair keys into a sorted multigraph edge list. Consumes `keys`.
inline MultiGraph aggregate_pairs(std::int64_t n, std::vector<std::uint64_t>& keys) {
    std::sort(keys.begin(), keys.end());
    MultiGraph g;
    g.n = n;
    g.total_edge_count = keys.size();
    for (std::size_t i = 0; i < keys.size();) {
        std::size_t j = i;
        while (j < keys.size() && keys[j] == keys[i]) ++j;
        g.edges.push_back({static_cast<Vertex>(keys[i] >> 32),
                           static_cast<Vertex>(keys[i] & 0xffffffffULL),
                           static_cast<std::uint32_t>(j - i)});
        i = j;
    }
    return g;
}

// --- structural invariants ------------------------------------------------

inline void check_invariants(const MultiGraph& g) {
    std::uint64_t total = 0;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const auto& e = g.edges[k];
        if (e.u > e.v) throw InvariantViolation("multigraph edge with u > v");
        if (static_cast<std::int64_t>(e.v) >= g.n) throw InvariantViolation("multigraph endpoint out of range");
        if (e.multiplicity < 1) throw InvariantViolation("multigraph edge with multiplicity 0");
        if (k > 0 && pair_key(g.edges[k - 1].u, g.edges[k - 1].v) >= pair_key(e.u, e.v)) {
            throw InvariantViolation("multigraph edge list not sorted/distinct");
        }
        total += e.multiplicity;
    }
    if (total != g.total_edge_count) throw InvariantViolation("multigraph total_edge_count mismatch");
    std::uint64_t degree_sum = 0;
    for (auto d : g.degrees()) degree_sum += d;
    if (degree_sum != 2 * g.total_edge_count) {
        throw InvariantViolation("degree-sum identity violated");
    }
}

inline void check_invariants(const SimpleGraph& g) {
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const auto& [u, v] = g.edges[k];
        if (!(u < v)) throw InvariantViolation("simple graph edge with u >= v");
        if (static_cast<std::int64_t>(v) >= g.n) throw InvariantViolation("simple graph endpoint out of range");
        if (k > 0 && g.edges[k - 1] >= g.edges[k]) {
            throw InvariantViolation("simple graph edge list not sorted/distinct");
        }
    }
}

/// True when every edge of `s` is a non-loop pair present in `m`.
inline bool is_subgraph_of(const SimpleGraph& s, const MultiGraph& m) {
    std::size_t j = 0;
    for (const auto& [u, v] : s.edges) {
        const std::uint64_t key = pair_key(u, v);
        while (j < m.edges.size() && pair_key(m.edges[j].u, m.edges[j].v) < key) ++j;
        if (j == m.edges.size() || pair_key(m.edges[j].u, m.edges[j].v) != key) return false;
    }
    return true;
}

// --- text edge-list format --------------------------------------------------
// Header "n m" with m the number of edge lines, then one "i j multiplicity"
// line per distinct pair, 1-based, loops written with i == j.

inline void write_edge_list(std::ostream& os, const MultiGraph& g) {
    os << g.n << ' ' << g.edges.size() << '\n';
    for (const auto& e : g.edges) {
        os << (e.u + 1) << ' ' << (e.v + 1) << ' ' << e.multiplicity << '\n';
    }
}

inline MultiGraph read_edge_list(std::istream& is) {
    MultiGraph g;
    std::size_t m = 0;
    if (!(is >> g.n >> m)) throw std::runtime_error("edge list: missing 'n m' header");
    std::vector<std::uint64_t> keys;
    for (std::size_t k = 0; k < m; ++k) {
        std::int64_t i = 0, j = 0, mult = 0;
        if (!(is >> i >> j >> mult)) {
            throw std::runtime_error("edge list: truncated at line " + std::to_string(k + 2));
        }
        if (i < 1 || j < 1 || i > g.n || j > g.n || mult < 1) {
            throw std::runtime_error("edge list: bad edge at line " + std::to_string(k + 2));
        }
        for (std::int64_t c = 0; c < mult; ++c) {
            keys.push_back(pair_key(static_cast<Vertex>(i - 1), static_cast<Vertex>(j - 1)));
        }
    }
    return aggregate_pairs(g.n, keys);
}

}  // namespace nrperc

#endif  // NRPERC_GRAPH_HPP
