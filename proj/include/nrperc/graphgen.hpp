#ifndef NRPERC_GRAPHGEN_HPP
#define NRPERC_GRAPHGEN_HPP

// Norros-Reittu samplers. MNR_n(w) is drawn by Poissonization: Poisson(l_n/2)
// edges whose endpoints are i.i.d. marks with P(i) = w_i/l_n. Summing over
// ordered endpoints, the pair {i,j} receives Poisson(w_i w_j/l_n) edges and
// the loop {i,i} Poisson(w_i^2/(2 l_n)), independently across pairs.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <vector>

#include "nrperc/errors.hpp"
#include "nrperc/graph.hpp"
#include "nrperc/params.hpp"
#include "nrperc/rng.hpp"

namespace nrperc {

/// Draws vertices with probability proportional to weight, by binary search
/// over cumulative sums. Optionally restricted to a subset of vertices.
class MarkSampler {
public:
    explicit MarkSampler(const WeightSequence& ws) {
        cumulative_.reserve(ws.size());
        long double acc = 0.0L;
        for (double w : ws.weights) {
            acc += w;
            cumulative_.push_back(static_cast<double>(acc));
        }
        total_ = cumulative_.back();
    }

    /// Restricted to `vertices` (each drawn with probability w_v / sum over the subset).
    MarkSampler(const WeightSequence& ws, std::vector<Vertex> vertices) : ids_(std::move(vertices)) {
        cumulative_.reserve(ids_.size());
        long double acc = 0.0L;
        for (Vertex v : ids_) {
            acc += ws[v];
            cumulative_.push_back(static_cast<double>(acc));
        }
        total_ = cumulative_.empty() ? 0.0 : cumulative_.back();
    }

    double total_weight() const { return total_; }
    bool empty() const { return cumulative_.empty(); }

    Vertex operator()(Rng& rng) const {
        const double x = uniform01(rng) * total_;
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
        if (it == cumulative_.end()) --it;
        const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
        return ids_.empty() ? static_cast<Vertex>(idx) : ids_[idx];
    }

private:
    std::vector<double> cumulative_;
    std::vector<Vertex> ids_;
    double total_ = 0;
};

namespace detail {

inline void check_retention(double pi, const char* who) {
    if (!(pi > 0.0 && pi <= 1.0)) {
        std::ostringstream os;
        os << who << ": retention probability must lie in (0,1], got " << pi;
        throw DomainError(os.str());
    }
}

inline MultiGraph poissonized_sample(std::int64_t n, const MarkSampler& marks, double edge_rate,
                                     Rng& rng) {
    const std::uint64_t m = poisson(rng, edge_rate);
    std::vector<std::uint64_t> keys;
    keys.reserve(m);
    for (std::uint64_t k = 0; k < m; ++k) {
        const Vertex a = marks(rng);
        const Vertex b = marks(rng);
        keys.push_back(pair_key(a, b));
    }
    return aggregate_pairs(n, keys);
}

}  // namespace detail

/// MNR_n(w): X_ij ~ Poisson(w_i w_j / l_n) edges between every pair, loops included.
inline MultiGraph sample_mnr(const WeightSequence& ws, Rng& rng) {
    const MarkSampler marks(ws);
    return detail::poissonized_sample(static_cast<std::int64_t>(ws.size()), marks, ws.ell_n / 2.0,
                                      rng);
}

inline MultiGraph sample_mnr(const WeightSequence& ws, const MarkSampler& marks, Rng& rng) {
    return detail::poissonized_sample(static_cast<std::int64_t>(ws.size()), marks, ws.ell_n / 2.0,
                                      rng);
}

/// SNR_n(w) from MNR_n(w): keep {i,j} once iff X_ij >= 1 and i != j.
inline SimpleGraph collapse_to_simple(const MultiGraph& g) {
    SimpleGraph s;
    s.n = g.n;
    s.edges.reserve(g.edges.size());
    for (const auto& e : g.edges) {
        if (e.u != e.v) s.edges.emplace_back(e.u, e.v);
    }
    return s;
}

/// Keeps each edge copy independently with probability pi.
inline MultiGraph percolate_multigraph(const MultiGraph& g, double pi, Rng& rng) {
    detail::check_retention(pi, "percolate_multigraph");
    if (pi == 1.0) return g;
    MultiGraph out;
    out.n = g.n;
    for (const auto& e : g.edges) {
        std::binomial_distribution<std::uint32_t> keep(e.multiplicity, pi);
        const std::uint32_t k = keep(rng);
        if (k > 0) {
            out.edges.push_back({e.u, e.v, k});
            out.total_edge_count += k;
        }
    }
    return out;
}

/// Keeps each simple edge independently with probability pi.
inline SimpleGraph percolate_simple(const SimpleGraph& g, double pi, Rng& rng) {
    detail::check_retention(pi, "percolate_simple");
    if (pi == 1.0) return g;
    SimpleGraph out;
    out.n = g.n;
    for (const auto& e : g.edges) {
        if (uniform01(rng) < pi) out.edges.push_back(e);
    }
    return out;
}

/// MNR_n(pi w) sampled directly; equal in law to percolate_multigraph(sample_mnr(w), pi).
inline MultiGraph sample_percolated_mnr_direct(const WeightSequence& ws, double pi, Rng& rng) {
    detail::check_retention(pi, "sample_percolated_mnr_direct");
    // Marks are unchanged by scaling all weights; only the edge rate scales.
    const MarkSampler marks(ws);
    return detail::poissonized_sample(static_cast<std::int64_t>(ws.size()), marks,
                                      pi * ws.ell_n / 2.0, rng);
}

inline MultiGraph sample_percolated_mnr_direct(const WeightSequence& ws, const MarkSampler& marks,
                                               double pi, Rng& rng) {
    detail::check_retention(pi, "sample_percolated_mnr_direct");
    return detail::poissonized_sample(static_cast<std::int64_t>(ws.size()), marks,
                                      pi * ws.ell_n / 2.0, rng);
}

struct CoupledPercolation {
    MultiGraph multi;
    SimpleGraph simple;
};

/// Percolates a multigraph and its simple collapse on one probability space,
/// so that every retained simple edge is also retained in the multigraph.
///
/// For a pair with multiplicity k a single uniform U decides both sides: the
/// simple edge survives iff U <= pi, the multigraph keeps at least one copy
/// iff U <= 1 - (1-pi)^k. Given at least one copy survives, the number kept
/// is 1 + Binomial(k - J, pi) where J is the index of the first kept copy,
/// a geometric variable truncated to {1..k}.
inline CoupledPercolation percolate_coupled(const MultiGraph& g, double pi, Rng& rng) {
    detail::check_retention(pi, "percolate_coupled");
    CoupledPercolation out;
    out.multi.n = g.n;
    out.simple.n = g.n;
    const double log_fail = (pi < 1.0) ? std::log1p(-pi) : 0.0;
    for (const auto& e : g.edges) {
        const std::uint32_t k = e.multiplicity;
        const double U = uniform01(rng);
        const double any_kept = (pi < 1.0) ? -std::expm1(static_cast<double>(k) * log_fail) : 1.0;
        if (U <= pi && e.u != e.v) out.simple.edges.emplace_back(e.u, e.v);
        if (U > any_kept) continue;

        std::uint32_t kept = k;
        if (pi < 1.0 && k > 1) {
            // first kept index J in {1..k}: P(J <= j | J <= k) = (1-(1-pi)^j) / (1-(1-pi)^k)
            const double V = uniform01(rng);
            const double j_real = std::log1p(-V * any_kept) / log_fail;
            auto J = static_cast<std::uint32_t>(std::ceil(j_real));
            J = std::clamp<std::uint32_t>(J, 1, k);
            std::uint32_t rest = 0;
            if (J < k) {
                std::binomial_distribution<std::uint32_t> more(k - J, pi);
                rest = more(rng);
            }
            kept = 1 + rest;
        } else if (pi < 1.0) {
            kept = 1;
        }
        out.multi.edges.push_back({e.u, e.v, kept});
        out.multi.total_edge_count += kept;
    }
    return out;
}

}  // namespace nrperc

#endif  // NRPERC_GRAPHGEN_HPP
