#include <cmath>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "nrperc/components.hpp"
#include "nrperc/graphgen.hpp"
#include "nrperc/params.hpp"
#include "support/stats.hpp"

using namespace nrperc;
using nrperc::testing::binomial_pmf;
using nrperc::testing::chi_square_gof;
using nrperc::testing::ks_two_sample;
using nrperc::testing::poisson_pmf;

namespace {

constexpr double kLevel = 0.01;

std::uint32_t multiplicity(const MultiGraph& g, Vertex u, Vertex v) {
    if (u > v) std::swap(u, v);
    for (const auto& e : g.edges) {
        if (e.u == u && e.v == v) return e.multiplicity;
    }
    return 0;
}

}  // namespace

TEST(SampleMnr, SingleVertexOnlyLoops) {
    const auto ws = weights_from_values({3.0});
    Rng rng = make_rng(1);
    std::map<std::int64_t, std::int64_t> counts;
    for (int r = 0; r < 20000; ++r) {
        const auto g = sample_mnr(ws, rng);
        check_invariants(g);
        for (const auto& e : g.edges) ASSERT_EQ(e.u, e.v);
        ++counts[static_cast<std::int64_t>(g.total_edge_count)];
    }
    const auto chi = chi_square_gof(counts, [](std::int64_t k) { return poisson_pmf(k, 1.5); });
    EXPECT_GT(chi.p_value, kLevel) << "chi2=" << chi.statistic;
}

TEST(SampleMnr, TwoVertexPairLaw) {
    const auto ws = weights_from_values({1.0, 1.0});
    Rng rng = make_rng(2);
    std::map<std::int64_t, std::int64_t> counts;
    std::int64_t present = 0;
    const int reps = 100000;
    for (int r = 0; r < reps; ++r) {
        const auto g = sample_mnr(ws, rng);
        const auto k = multiplicity(g, 0, 1);
        ++counts[k];
        present += collapse_to_simple(g).edges.size();
    }
    const auto chi = chi_square_gof(counts, [](std::int64_t k) { return poisson_pmf(k, 0.5); });
    EXPECT_GT(chi.p_value, kLevel) << "chi2=" << chi.statistic;
    const double p = 1 - std::exp(-0.5);
    EXPECT_LT(std::abs(present / double(reps) - p), 3 * std::sqrt(p * (1 - p) / reps));
}

TEST(SampleMnr, FiveVertexAllPairs) {
    const std::vector<double> w = {3.0, 2.0, 1.5, 1.0, 0.5};
    const auto ws = weights_from_values(w);
    Rng rng = make_rng(3);
    const int reps = 100000;
    std::map<std::pair<int, int>, std::map<std::int64_t, std::int64_t>> counts;
    std::map<std::pair<int, int>, std::int64_t> present;
    for (int r = 0; r < reps; ++r) {
        const auto g = sample_mnr(ws, rng);
        check_invariants(g);
        std::map<std::pair<int, int>, std::int64_t> seen;
        for (const auto& e : g.edges) seen[{int(e.u), int(e.v)}] = e.multiplicity;
        for (int i = 0; i < 5; ++i) {
            for (int j = i; j < 5; ++j) {
                const auto it = seen.find({i, j});
                const auto k = it == seen.end() ? 0 : it->second;
                ++counts[{i, j}][k];
                if (i != j && k > 0) ++present[{i, j}];
            }
        }
    }
    for (int i = 0; i < 5; ++i) {
        for (int j = i; j < 5; ++j) {
            // loops carry rate w_i^2 / (2 l_n)
            const double mean = w[i] * w[j] / ws.ell_n / (i == j ? 2.0 : 1.0);
            const auto chi =
                chi_square_gof(counts[{i, j}], [&](std::int64_t k) { return poisson_pmf(k, mean); });
            EXPECT_GT(chi.p_value, kLevel) << "pair " << i << "," << j;
            if (i != j) {
                const double p = -std::expm1(-w[i] * w[j] / ws.ell_n);
                EXPECT_LT(std::abs(present[{i, j}] / double(reps) - p),
                          3 * std::sqrt(p * (1 - p) / reps))
                    << "pair " << i << "," << j;
            }
        }
    }
}

TEST(SampleMnr, EdgeCountConcentration) {
    const auto ws = build_weights(ModelParams::make(2.5, 1.0, 100000));
    Rng rng = make_rng(4);
    const auto g = sample_mnr(ws, rng);
    check_invariants(g);
    const double mean = ws.ell_n / 2.0;
    EXPECT_LT(std::abs(static_cast<double>(g.total_edge_count) - mean), 4.0 * std::sqrt(mean));
}

TEST(Collapse, DropsLoopsAndMultiplicity) {
    EXPECT_TRUE(collapse_to_simple(MultiGraph{3, {}, 0}).edges.empty());
    MultiGraph g{3, {{0, 0, 1}, {0, 2, 3}}, 4};
    const auto s = collapse_to_simple(g);
    ASSERT_EQ(s.edges.size(), 1u);
    EXPECT_EQ(s.edges[0], (std::pair<Vertex, Vertex>{0, 2}));
    check_invariants(s);
}

TEST(PercolateMultigraph, IdentityAtOne) {
    const auto ws = build_weights(ModelParams::make(2.5, 1.0, 300));
    Rng rng = make_rng(5);
    const auto g = sample_mnr(ws, rng);
    const auto h = percolate_multigraph(g, 1.0, rng);
    EXPECT_EQ(h.edges, g.edges);
    EXPECT_THROW(percolate_multigraph(g, 0.0, rng), DomainError);
    EXPECT_THROW(percolate_multigraph(g, 1.5, rng), DomainError);
}

TEST(PercolateMultigraph, BinomialThinning) {
    const MultiGraph g{2, {{0, 1, 5}}, 5};
    Rng rng = make_rng(6);
    std::map<std::int64_t, std::int64_t> counts;
    for (int r = 0; r < 100000; ++r) {
        const auto h = percolate_multigraph(g, 0.4, rng);
        check_invariants(h);
        ++counts[multiplicity(h, 0, 1)];
    }
    const auto chi =
        chi_square_gof(counts, [](std::int64_t k) { return binomial_pmf(k, 5, 0.4); });
    EXPECT_GT(chi.p_value, kLevel) << "chi2=" << chi.statistic;
}

TEST(PercolateSimple, Bernoulli) {
    const SimpleGraph g{2, {{0, 1}}};
    Rng rng = make_rng(7);
    int kept = 0;
    const int reps = 100000;
    for (int r = 0; r < reps; ++r) kept += static_cast<int>(percolate_simple(g, 0.3, rng).edges.size());
    EXPECT_LT(std::abs(kept / double(reps) - 0.3), 3 * std::sqrt(0.21 / reps));
}

TEST(DirectSampler, TwoVertexRate) {
    // pi w_1 w_2 / l_n after scaling every weight by pi = 0.5
    const auto ws = weights_from_values({1.0, 1.0});
    Rng rng = make_rng(1);
    std::map<std::int64_t, std::int64_t> counts;
    for (int r = 0; r < 100000; ++r) {
        ++counts[multiplicity(sample_percolated_mnr_direct(ws, 0.5, rng), 0, 1)];
    }
    const auto chi = chi_square_gof(counts, [](std::int64_t k) { return poisson_pmf(k, 0.25); });
    EXPECT_GT(chi.p_value, kLevel) << "chi2=" << chi.statistic;
}

TEST(DirectSampler, SameLawAsTwoStep) {
    const auto ws = build_weights(ModelParams::make(2.5, 1.0, 500));
    Rng a = make_rng(9), b = make_rng(10);
    std::vector<double> edges_direct, edges_two_step, giant_direct, giant_two_step;
    for (int r = 0; r < 10000; ++r) {
        const auto d = sample_percolated_mnr_direct(ws, 0.3, a);
        const auto t = percolate_multigraph(sample_mnr(ws, b), 0.3, b);
        check_invariants(d);
        check_invariants(t);
        edges_direct.push_back(static_cast<double>(d.total_edge_count));
        edges_two_step.push_back(static_cast<double>(t.total_edge_count));
        giant_direct.push_back(static_cast<double>(component_sizes(d).giant_size()));
        giant_two_step.push_back(static_cast<double>(component_sizes(t).giant_size()));
    }
    EXPECT_GT(ks_two_sample(edges_direct, edges_two_step).p_value, kLevel);
    EXPECT_GT(ks_two_sample(giant_direct, giant_two_step).p_value, kLevel);
    // and the edge count is Poisson(pi l_n / 2)
    std::map<std::int64_t, std::int64_t> counts;
    for (double e : edges_direct) ++counts[static_cast<std::int64_t>(e)];
    const double mean = 0.3 * ws.ell_n / 2.0;
    const auto chi = chi_square_gof(counts, [&](std::int64_t k) { return poisson_pmf(k, mean); });
    EXPECT_GT(chi.p_value, kLevel);
}

TEST(DirectSampler, FullRetentionMatchesMnr) {
    const auto ws = build_weights(ModelParams::make(2.5, 1.0, 200));
    Rng a = make_rng(11), b = make_rng(12);
    std::vector<double> x, y;
    for (int r = 0; r < 5000; ++r) {
        x.push_back(static_cast<double>(sample_percolated_mnr_direct(ws, 1.0, a).total_edge_count));
        y.push_back(static_cast<double>(sample_mnr(ws, b).total_edge_count));
    }
    EXPECT_GT(ks_two_sample(x, y).p_value, kLevel);
}

TEST(Coupling, FullRetentionKeepsEverything) {
    const auto ws = build_weights(ModelParams::make(2.5, 1.0, 300));
    Rng rng = make_rng(13);
    const auto g = sample_mnr(ws, rng);
    const auto cp = percolate_coupled(g, 1.0, rng);
    EXPECT_EQ(cp.multi.edges, g.edges);
    EXPECT_EQ(cp.simple.edges, collapse_to_simple(g).edges);
}

TEST(Coupling, SingleCopyPairsPerfectlyCorrelated) {
    const MultiGraph g{2, {{0, 1, 1}}, 1};
    Rng rng = make_rng(14);
    int both = 0;
    const int reps = 100000;
    for (int r = 0; r < reps; ++r) {
        const auto cp = percolate_coupled(g, 0.35, rng);
        const bool m = !cp.multi.edges.empty();
        const bool s = !cp.simple.edges.empty();
        ASSERT_EQ(m, s);
        both += m;
    }
    EXPECT_LT(std::abs(both / double(reps) - 0.35), 3 * std::sqrt(0.35 * 0.65 / reps));
}

TEST(Coupling, MarginalsAreBinomialAndBernoulli) {
    const MultiGraph g{2, {{0, 1, 5}}, 5};
    Rng rng = make_rng(15);
    std::map<std::int64_t, std::int64_t> counts;
    int simple = 0;
    const int reps = 100000;
    for (int r = 0; r < reps; ++r) {
        const auto cp = percolate_coupled(g, 0.4, rng);
        ASSERT_TRUE(is_subgraph_of(cp.simple, cp.multi));
        ++counts[multiplicity(cp.multi, 0, 1)];
        simple += static_cast<int>(cp.simple.edges.size());
    }
    const auto chi =
        chi_square_gof(counts, [](std::int64_t k) { return binomial_pmf(k, 5, 0.4); });
    EXPECT_GT(chi.p_value, kLevel) << "chi2=" << chi.statistic;
    EXPECT_LT(std::abs(simple / double(reps) - 0.4), 3 * std::sqrt(0.24 / reps));
}

TEST(Coupling, GiantDominationEveryRun) {
    const auto ws = build_weights(ModelParams::make(2.5, 1.0, 2000));
    Rng rng = make_rng(16);
    for (int r = 0; r < 200; ++r) {
        const auto g = sample_mnr(ws, rng);
        const auto cp = percolate_coupled(g, 0.3, rng);
        check_invariants(cp.multi);
        check_invariants(cp.simple);
        ASSERT_TRUE(is_subgraph_of(cp.simple, cp.multi));
        ASSERT_GE(component_sizes(cp.multi).giant_size(), component_sizes(cp.simple).giant_size());
    }
}

TEST(Coupling, EqualGiantsWhenNoParallelEdges) {
    // every multiplicity 1 and no loops: both sides see the same uniforms
    MultiGraph g{6, {{0, 1, 1}, {1, 2, 1}, {3, 4, 1}, {4, 5, 1}, {2, 3, 1}}, 5};
    Rng rng = make_rng(17);
    for (int r = 0; r < 1000; ++r) {
        const auto cp = percolate_coupled(g, 0.6, rng);
        ASSERT_EQ(component_sizes(cp.multi).giant_size(), component_sizes(cp.simple).giant_size());
    }
}

TEST(MarkSampler, ProportionalToWeight) {
    const auto ws = build_weights(ModelParams::make(2.5, 1.0, 100));
    const MarkSampler marks(ws);
    Rng rng = make_rng(18);
    std::map<std::int64_t, std::int64_t> counts;
    const int draws = 1000000;
    for (int r = 0; r < draws; ++r) ++counts[marks(rng)];
    // chi-square with one cell per vertex
    double stat = 0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
        const double e = draws * ws[i] / ws.ell_n;
        const double d = static_cast<double>(counts[static_cast<std::int64_t>(i)]) - e;
        stat += d * d / e;
    }
    const double p = boost::math::gamma_q((ws.size() - 1) / 2.0, stat / 2.0);
    EXPECT_GT(p, kLevel) << "chi2=" << stat;
}

TEST(MarkSampler, SubsetRestriction) {
    const auto ws = weights_from_values({5.0, 1.0, 2.0, 2.0});
    const MarkSampler marks(ws, {1, 3});
    EXPECT_DOUBLE_EQ(marks.total_weight(), 3.0);
    Rng rng = make_rng(19);
    int ones = 0;
    const int reps = 60000;
    for (int r = 0; r < reps; ++r) {
        const Vertex v = marks(rng);
        ASSERT_TRUE(v == 1 || v == 3);
        ones += v == 1;
    }
    EXPECT_LT(std::abs(ones / double(reps) - 1.0 / 3.0), 3 * std::sqrt(2.0 / 9.0 / reps));
}
