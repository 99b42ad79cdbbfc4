#include <random>

#include <gtest/gtest.h>

#include "ssemod/generators.hpp"
#include "ssemod/metrics.hpp"
#include "ssemod/oracle.hpp"
#include "test_support.hpp"

using namespace ssemod;
using namespace ssemod::testing;

TEST(Measure, Examples)
{
    EXPECT_DOUBLE_EQ(measure(cycle_graph(4), NodeSet(4, {0, 1})), 0.5);
    EXPECT_DOUBLE_EQ(measure(disjoint_cliques(2, 4), NodeSet(8, {0, 1, 2, 3})), 0.5);
    EXPECT_DOUBLE_EQ(measure(complete_graph(5), NodeSet(5, {0})), 0.2);
    EXPECT_THROW(measure(complete_graph(5), NodeSet(5, {})), PreconditionError);
    EXPECT_THROW(measure(complete_graph(5), NodeSet::all(5)), PreconditionError);
}

TEST(Expansion, Examples)
{
    EXPECT_DOUBLE_EQ(expansion(disjoint_cliques(2, 4), NodeSet(8, {0, 1, 2, 3})), 0.0);
    EXPECT_DOUBLE_EQ(expansion(complete_graph(4), NodeSet(4, {0})), 1.0);
    EXPECT_DOUBLE_EQ(expansion(cycle_graph(4), NodeSet(4, {0, 1})), 0.5);
    EXPECT_THROW(expansion(Graph(4, {{0, 1}}), NodeSet(4, {2, 3})), PreconditionError);
}

TEST(Expansion, MatchesEdgeByEdgeCountAndDensityComplements)
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        int n = 4 + static_cast<int>(rng() % 20);
        auto g = random_graph(n, 0.35, rng);
        auto labels = random_labels(n, 2, rng);
        std::vector<Node> side;
        for (int v = 0; v < n; ++v)
            if (labels[v] == 0) side.push_back(v);
        NodeSet s(n, side);
        if (s.empty() || s.size() == n || degree_sum(g, s) == 0) continue;
        EXPECT_DOUBLE_EQ(expansion(g, s), naive_expansion(g, side));
        EXPECT_EQ(density(g, s) + expansion(g, s), 1.0);
    }
}

TEST(ModularitySet, Examples)
{
    auto two = disjoint_cliques(2, 4);
    EXPECT_NEAR(modularity_set(two, NodeSet::all(8)), 0.0, 1e-15);
    EXPECT_NEAR(modularity_set(two, NodeSet(8, {0, 1, 2, 3})), 0.25, 1e-15);
    EXPECT_NEAR(modularity_set(complete_graph(4), NodeSet(4, {0, 1})), -1.0 / 12.0, 1e-15);
    EXPECT_NEAR(modularity_set_closed_form(complete_graph(4), NodeSet(4, {0, 1})), -1.0 / 12.0, 1e-15);
    EXPECT_THROW(modularity_set(Graph(3, {}), NodeSet(3, {0})), PreconditionError);
}

TEST(ModularityClustering, Examples)
{
    auto two = clique_union(2, 4);
    EXPECT_NEAR(modularity_clustering(two, Clustering::from_labels({0, 0, 0, 0, 1, 1, 1, 1})), 0.5, 1e-15);
    auto three = clique_union(3, 4);
    EXPECT_NEAR(modularity_clustering(three, Clustering::from_labels({0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2})),
                2.0 / 3.0, 1e-15);
    auto p = petersen();
    EXPECT_NEAR(modularity_clustering(p, Clustering(10, {NodeSet::all(10)})), 0.0, 1e-15);
}

TEST(ModularityClustering, AgreesWithDefinitionalSum)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 500; ++t) {
        int n = 4 + static_cast<int>(rng() % 29);
        auto g = random_graph(n, 0.1 + 0.5 * (rng() % 100) / 100.0, rng);
        auto labels = random_labels(n, 6, rng);
        auto c = Clustering::from_labels(labels);
        double summed = 0.0;
        for (const auto& part : c.parts()) summed += modularity_set(g, part);
        double simplified = modularity_clustering(g, c);
        ASSERT_NEAR(summed, simplified, 1e-10);
        ASSERT_NEAR(naive_modularity(g, labels), simplified, 1e-10);
        ASSERT_NEAR(modularity_fraction(g, c).value(), simplified, 1e-12);
    }
}

TEST(ClusteringMetrics, Invariants)
{
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        int n = 4 + static_cast<int>(rng() % 20);
        auto g = random_graph(n, 0.3, rng);
        auto c = Clustering::from_labels(random_labels(n, 5, rng));
        auto cm = clustering_metrics(g, c);
        std::int64_t edges = 0, degrees = 0;
        for (int i = 0; i < c.size(); ++i) {
            edges += cm.internal_edges[i];
            degrees += cm.degree_sums[i];
            for (int j = i + 1; j < c.size(); ++j) edges += cm.cross_edges[i][j];
            EXPECT_EQ(cm.internal_edges[i], internal_edges(g, c.parts()[i]));
        }
        EXPECT_EQ(edges, g.num_edges());
        EXPECT_EQ(degrees, 2 * g.num_edges());
    }
}

TEST(ModularitySet, ComplementSymmetry)
{
    std::mt19937_64 rng(13);
    for (int t = 0; t < 300; ++t) {
        int n = 3 + static_cast<int>(rng() % 25);
        auto g = random_graph(n, 0.3, rng);
        auto labels = random_labels(n, 2, rng);
        std::vector<Node> side;
        for (int v = 0; v < n; ++v)
            if (labels[v] == 0) side.push_back(v);
        NodeSet s(n, side);
        if (s.empty() || s.size() == n) continue;
        EXPECT_NEAR(modularity_set(g, s), modularity_set(g, s.complement()), 1e-12);
    }
}

TEST(TwoClusterObjective, Examples)
{
    EXPECT_DOUBLE_EQ(two_cluster_objective(0.5, 1.0), 0.5);
    EXPECT_NEAR(two_cluster_objective(0.5, 0.8), 0.3, 1e-15);
    EXPECT_NEAR(two_cluster_objective(0.3, 0.8), 0.3, 1e-15);
    EXPECT_NEAR(two_cluster_objective(0.4599, 0.919999), 2 * 0.4599 * (0.919999 - 0.4599), 1e-15);
}

TEST(TwoClusterObjective, SymmetricAboutHalfDensity)
{
    for (int i = 1; i <= 20; ++i) {
        const double dens = i / 20.0;
        for (int j = 0; j < 10; ++j) {
            const double delta = dens / 2.0 * j / 10.0;
            EXPECT_NEAR(two_cluster_objective(dens / 2 + delta, dens), two_cluster_objective(dens / 2 - delta, dens),
                        1e-15);
        }
    }
}

TEST(TwoClusterObjective, EqualsModularityOnRegularGraphs)
{
    std::mt19937_64 rng(21);
    for (int t = 0; t < 200; ++t) {
        int n = 6 + 2 * static_cast<int>(rng() % 20);
        int d = 3 + static_cast<int>(rng() % 3);
        auto g = random_regular(n, d, rng());
        auto labels = random_labels(n, 2, rng);
        std::vector<Node> side;
        for (int v = 0; v < n; ++v)
            if (labels[v] == 0) side.push_back(v);
        NodeSet s(n, side);
        if (s.empty() || s.size() == n) continue;
        const double q = modularity_clustering(g, TwoPartition(s).as_clustering());
        EXPECT_NEAR(q, two_cluster_objective(measure(g, s), density(g, s)), 1e-12);
        EXPECT_NEAR(q, two_cluster_objective(measure(g, s.complement()), density(g, s.complement())), 1e-12);
    }
}

// --- oracle -----------------------------------------------------------------

TEST(OptExact, Examples)
{
    auto k4 = opt_exact(complete_graph(4));
    EXPECT_NEAR(k4.value, 0.0, 1e-15);
    EXPECT_EQ(k4.instances_enumerated, 15u);

    auto two = opt_exact(clique_union(2, 4));
    EXPECT_NEAR(two.value, 0.5, 1e-12);
    const auto& w = std::get<Clustering>(two.witness);
    ASSERT_EQ(w.size(), 2);
    EXPECT_EQ(w.parts()[0], NodeSet(8, {0, 1, 2, 3}));
    EXPECT_EQ(two.instances_enumerated, 4140u); // Bell(8)

    auto three = opt_exact(clique_union(3, 4));
    EXPECT_NEAR(three.value, 2.0 / 3.0, 1e-12);
    EXPECT_EQ(three.instances_enumerated, 4213597u); // Bell(12)

    EXPECT_THROW(opt_exact(complete_graph(14)), BudgetExceeded);
    EXPECT_THROW(opt_exact(Graph(3, {})), PreconditionError);
}

TEST(OptExact, MatchesNaiveEnumerationAndWitness)
{
    std::mt19937_64 rng(17);
    for (int t = 0; t < 30; ++t) {
        int n = 3 + static_cast<int>(rng() % 6);
        auto g = random_graph(n, 0.45, rng);
        auto r = opt_exact(g);
        EXPECT_NEAR(r.value, naive_opt(g), 1e-12);
        EXPECT_NEAR(modularity_clustering(g, std::get<Clustering>(r.witness)), r.value, 1e-12);
        EXPECT_GE(r.value, 0.0);
        EXPECT_LT(r.value, 1.0);
    }
}

TEST(Opt2Exact, Examples)
{
    EXPECT_NEAR(opt2_exact(clique_union(2, 4)).value, 0.5, 1e-12);

    auto k4 = opt2_exact(complete_graph(4));
    EXPECT_EQ(k4.value, 0.0);
    EXPECT_EQ(std::get<Clustering>(k4.witness).size(), 1);
    EXPECT_NEAR(k4.best_split, -1.0 / 8.0, 1e-15); // one node against a triangle
    EXPECT_EQ(k4.instances_enumerated, 8u); // 7 splits + the single community

    auto c6 = cycle_graph(6);
    auto r = opt2_exact(c6);
    EXPECT_NEAR(r.value, naive_opt2(c6), 1e-12);
    EXPECT_NEAR(r.value, 1.0 / 6.0, 1e-12); // two paths of 3: 4/6 - 2*(6/12)^2
    EXPECT_GE(r.value, opt_exact(c6).value / 2.0);
}

TEST(Opt2Exact, MatchesNaiveAndBoundsOpt)
{
    std::mt19937_64 rng(19);
    for (int t = 0; t < 40; ++t) {
        int n = 3 + static_cast<int>(rng() % 7);
        auto g = random_graph(n, 0.4, rng);
        auto two = opt2_exact(g);
        auto all = opt_exact(g);
        EXPECT_NEAR(two.value, naive_opt2(g), 1e-12);
        EXPECT_NEAR(modularity_clustering(g, std::get<Clustering>(two.witness)), two.value, 1e-12);
        EXPECT_GE(two.value + 1e-12, all.value / 2.0);
        EXPECT_GE(all.value + 1e-12, two.value);
    }
}

TEST(Opt2Exact, BestSplitEqualsBestObjectiveOnRegularGraphs)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto g = random_regular(12, 3, seed);
        auto r = opt2_exact(g);
        double best_f = -1.0;
        for (std::uint64_t mask = 1; mask + 1 < (1u << 12); ++mask) {
            std::vector<Node> side;
            for (int i = 0; i < 12; ++i)
                if (mask >> i & 1) side.push_back(i);
            NodeSet s(12, side);
            best_f = std::max(best_f, two_cluster_objective(measure(g, s), density(g, s)));
        }
        EXPECT_NEAR(r.best_split, best_f, 1e-12);
    }
}

TEST(SseExact, Examples)
{
    EXPECT_EQ(sse_exact(clique_union(2, 4), 4, 4).value, 0.0);
    auto k8 = sse_exact(complete_graph(8), 4, 4);
    EXPECT_NEAR(k8.value, 4.0 / 7.0, 1e-15);
    EXPECT_EQ(k8.instances_enumerated, 70u);
    EXPECT_NEAR(sse_exact(cycle_graph(8), 4, 4).value, 0.25, 1e-15);
    EXPECT_THROW(sse_exact(complete_graph(23), 1, 2), BudgetExceeded);
    EXPECT_THROW(sse_exact(complete_graph(5), 3, 2), PreconditionError);
}

TEST(SseExact, MatchesNaiveAndWitness)
{
    std::mt19937_64 rng(23);
    for (int t = 0; t < 30; ++t) {
        int n = 4 + static_cast<int>(rng() % 9);
        auto g = random_graph(n, 0.5, rng);
        int lo = 1 + static_cast<int>(rng() % (n - 1));
        int hi = lo + static_cast<int>(rng() % (n - lo));
        double naive = naive_min_expansion(g, lo, hi);
        if (naive > 1.5) continue; // every set in the band is isolated
        auto r = sse_exact(g, lo, hi);
        EXPECT_NEAR(r.value, naive, 1e-15);
        const auto& w = std::get<NodeSet>(r.witness);
        EXPECT_NEAR(naive_expansion(g, w.members()), r.value, 1e-15);
    }
}
