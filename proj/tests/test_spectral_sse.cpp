#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <random>

#include <gtest/gtest.h>

#include "ssemod/generators.hpp"
#include "ssemod/metrics.hpp"
#include "ssemod/oracle.hpp"
#include "ssemod/spectral.hpp"
#include "ssemod/sse.hpp"
#include "test_support.hpp"

using namespace ssemod;
using namespace ssemod::testing;

namespace {

/// Gives a temporary graph a lifetime long enough for a non-owning view.
const Graph& keep(Graph g)
{
    static std::deque<Graph> store;
    return store.emplace_back(std::move(g));
}

bool connected(const Graph& g)
{
    std::vector<char> seen(g.num_nodes(), 0);
    std::queue<Node> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
        Node v = q.front();
        q.pop();
        for (Node w : g.neighbors(v))
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                q.push(w);
            }
    }
    return count == g.num_nodes();
}

void expect_spectrum(const std::vector<double>& got, std::vector<double> want)
{
    std::sort(want.begin(), want.end(), std::greater<>());
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-9) << i;
}

std::vector<double> spectrum_of(const Graph& g) { return eigenvalues(walk_matrix(ResidualView::fresh(g))); }

} // namespace

TEST(WalkMatrix, FreshCompleteGraph)
{
    auto k4 = complete_graph(4);
    auto w = walk_matrix(ResidualView::fresh(k4));
    EXPECT_EQ(w.denominator, 3);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) EXPECT_EQ(w.numerator(i, j), i == j ? 0 : 1);
}

TEST(WalkMatrix, RemovingADisconnectedBlock)
{
    auto two = disjoint_cliques(2, 4);
    auto w = walk_matrix(ResidualView(two, NodeSet(8, {0, 1, 2, 3})));
    auto k4 = walk_matrix(ResidualView::fresh(keep(complete_graph(4))));
    EXPECT_EQ(w.order, 4);
    EXPECT_EQ(w.numerators, k4.numerators);
    EXPECT_EQ(w.denominator, 3);
}

TEST(WalkMatrix, ReRegularizedCycle)
{
    // C4 minus node 0: survivors 1, 2, 3; nodes 1 and 3 each lost one edge.
    auto w = walk_matrix(ResidualView(keep(cycle_graph(4)), NodeSet(4, {0})));
    EXPECT_EQ(w.order, 3);
    EXPECT_EQ(w.denominator, 2);
    const std::vector<int> expected{1, 1, 0, //
                                    1, 0, 1, //
                                    0, 1, 1};
    EXPECT_EQ(w.numerators, expected);
    auto dense = w.dense();
    EXPECT_DOUBLE_EQ(dense(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(dense(1, 1), 0.0);
    EXPECT_DOUBLE_EQ(dense(0, 1), 0.5);
}

TEST(WalkMatrix, RowsSumToOneExactlyAndSymmetric)
{
    std::mt19937_64 rng(31);
    for (int t = 0; t < 30; ++t) {
        auto g = random_regular(30, 4, rng());
        std::vector<Node> removed;
        for (Node v = 0; v < 30; ++v)
            if (rng() % 3 == 0) removed.push_back(v);
        if (static_cast<int>(removed.size()) == 30) continue;
        auto w = walk_matrix(ResidualView(g, NodeSet(30, removed)));
        for (int i = 0; i < w.order; ++i) {
            int row = 0;
            for (int j = 0; j < w.order; ++j) {
                row += w.numerator(i, j);
                EXPECT_EQ(w.numerator(i, j), w.numerator(j, i));
                if (i != j) EXPECT_TRUE(w.numerator(i, j) == 0 || w.numerator(i, j) == 1);
            }
            EXPECT_EQ(row, w.denominator);
        }
    }
}

TEST(WalkMatrix, RejectsIrregularOrEmpty)
{
    EXPECT_THROW(ResidualView::fresh(keep(path_graph(3))), PreconditionError);
    EXPECT_THROW(ResidualView(keep(complete_graph(3)), NodeSet::all(3)), PreconditionError);
    EXPECT_THROW(walk_matrix(ResidualView::fresh(keep(Graph(3, {})))), PreconditionError);
}

TEST(ResidualView, LoopsNeverCrossACut)
{
    // C6 minus node 0; the arc {1, 2} lost edge {0,1} to a loop and cuts only {2,3}.
    auto c6 = cycle_graph(6);
    ResidualView view(c6, NodeSet(6, {0}));
    NodeSet arc(6, {1, 2});
    EXPECT_EQ(view.cut(arc), 1);
    EXPECT_DOUBLE_EQ(view.expansion(arc), 1.0 / 4.0);
    EXPECT_THROW(view.cut(NodeSet(6, {0, 1})), PreconditionError);
}

TEST(Eigenvalues, KnownSpectra)
{
    expect_spectrum(spectrum_of(complete_graph(4)), {1, -1.0 / 3, -1.0 / 3, -1.0 / 3});
    expect_spectrum(spectrum_of(disjoint_cliques(2, 4)), {1, 1, -1.0 / 3, -1.0 / 3, -1.0 / 3, -1.0 / 3, -1.0 / 3, -1.0 / 3});
    expect_spectrum(spectrum_of(petersen()), {1, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0 / 3, -2.0 / 3, -2.0 / 3,
                                              -2.0 / 3, -2.0 / 3});
    // Cycle C_n: cos(2 pi k / n).
    std::vector<double> cyc;
    for (int k = 0; k < 9; ++k) cyc.push_back(std::cos(2 * M_PI * k / 9));
    expect_spectrum(spectrum_of(cycle_graph(9)), cyc);
}

TEST(Eigenvalues, DisjointUnionIsMultisetUnion)
{
    auto a = random_regular(10, 3, 4);
    auto b = petersen();
    std::vector<Edge> e = a.edges();
    for (const auto& x : b.edges()) e.push_back({x.u + 10, x.v + 10});
    auto un = spectrum_of(Graph(20, e));
    auto sa = spectrum_of(a);
    auto sb = spectrum_of(b);
    sa.insert(sa.end(), sb.begin(), sb.end());
    expect_spectrum(un, sa);
}

TEST(ThresholdRank, Goldens)
{
    EXPECT_EQ(threshold_rank(complete_graph(4), 0.5), 1);
    EXPECT_EQ(threshold_rank(disjoint_cliques(2, 4), 0.5), 2);
    EXPECT_EQ(threshold_rank(petersen(), 0.5), 5);
    // |lambda| = tau exactly does not count.
    EXPECT_EQ(threshold_rank(petersen(), 2.0 / 3.0), 1);
    EXPECT_EQ(threshold_rank(petersen(), 1.0 / 3.0), 5);
    EXPECT_THROW(threshold_rank(petersen(), 1.0), PreconditionError);
}

TEST(ThresholdRank, MonotoneAndComponentBound)
{
    std::vector<Graph> graphs{complete_graph(5), disjoint_cliques(3, 4), petersen(), cycle_graph(12),
                              random_regular(40, 3, 2), matched_clique_union(4, 5, 1)};
    for (const auto& g : graphs) {
        auto view = ResidualView::fresh(g);
        int prev = g.num_nodes() + 1;
        for (int i = 0; i < 20; ++i) {
            double tau = i / 20.0;
            int r = threshold_rank(view, tau);
            EXPECT_LE(r, prev) << tau;
            prev = r;
        }
        EXPECT_GE(threshold_rank(view, 1 - 1e-6), 1);
    }
    EXPECT_EQ(threshold_rank(disjoint_cliques(3, 4), 1 - 1e-6), 3);
    // Eigenvalue 1 sits on the boundary at tau = 1 - 1e-9 and is not counted.
    EXPECT_EQ(threshold_rank(disjoint_cliques(3, 4), 1 - 1e-9), 0);
}

// --- sse_low_rank -------------------------------------------------------------

TEST(SizeWindow, InwardRounding)
{
    auto p = ParamProfile::desk();
    auto w = size_window(25, 100, p);
    EXPECT_EQ(w.lo, 23); // 0.92 * 25 = 23 exactly
    EXPECT_EQ(w.hi, 27);
    w = size_window(1, 10, p);
    EXPECT_EQ(w.lo, 1);
    EXPECT_EQ(w.hi, 1);
    w = size_window(5, 10, p);
    EXPECT_EQ(w.lo, 5);
    EXPECT_EQ(w.hi, 5);
}

TEST(SseLowRank, Examples)
{
    auto p = ParamProfile::desk();
    auto two = disjoint_cliques(2, 4);
    auto r = sse_low_rank(ResidualView::fresh(two), 4, p);
    EXPECT_EQ(r.set, NodeSet(8, {0, 1, 2, 3}));
    EXPECT_EQ(r.phi, 0.0);
    EXPECT_EQ(r.method, SseMethod::Exhaustive);

    auto k8 = sse_low_rank(ResidualView::fresh(keep(complete_graph(8))), 4, p);
    EXPECT_EQ(k8.set.size(), 4);
    EXPECT_NEAR(k8.phi, 4.0 / 7.0, 1e-15);

    auto c8 = sse_low_rank(ResidualView::fresh(keep(cycle_graph(8))), 4, p);
    EXPECT_EQ(c8.set, NodeSet(8, {0, 1, 2, 3}));
    EXPECT_NEAR(c8.phi, 0.25, 1e-15);
}

TEST(SseLowRank, Errors)
{
    auto p = ParamProfile::desk();
    auto view = ResidualView::fresh(keep(cycle_graph(8)));
    EXPECT_THROW(sse_low_rank(view, 0, p), PreconditionError);
    EXPECT_THROW(sse_low_rank(view, 5, p), PreconditionError);
    auto wide = p;
    wide.n_exact = 0;
    EXPECT_THROW(sse_low_rank(ResidualView::fresh(keep(clique_union(21, 4))), 10, wide), BudgetExceeded);
}

TEST(SseLowRank, SubspacePathFindsUncutBlocks)
{
    auto p = ParamProfile::desk();
    p.n_exact = 0;
    auto r = sse_low_rank(ResidualView::fresh(keep(disjoint_cliques(2, 4))), 4, p);
    EXPECT_EQ(r.method, SseMethod::SubspaceEnumeration);
    EXPECT_EQ(r.phi, 0.0);
    EXPECT_EQ(r.set.size(), 4);

    auto six = clique_union(6, 5);
    auto r6 = sse_low_rank(ResidualView::fresh(six), 15, p);
    EXPECT_EQ(r6.phi, 0.0);
    EXPECT_EQ(r6.set.size(), 15);
}

TEST(SseLowRank, ContractAgainstExhaustiveOracle)
{
    auto p = ParamProfile::desk();
    std::mt19937_64 rng(41);
    int graphs = 0;
    while (graphs < 20) {
        int n = 8 + 2 * static_cast<int>(rng() % 4); // 8..14
        auto g = random_regular(n, 3, rng());
        if (!connected(g)) continue;
        ++graphs;
        auto view = ResidualView::fresh(g);
        for (int s = 1; s <= n / 2; ++s) {
            auto r = sse_low_rank(view, s, p);
            EXPECT_GE(r.set.size(), 0.92 * s);
            EXPECT_LE(r.set.size(), 1.08 * s);
            auto w = size_window(s, n, p);
            double phi_star = sse_exact(g, w.lo, w.hi).value;
            EXPECT_LE(r.phi, phi_star + p.phi_slack + 1e-12);
            EXPECT_DOUBLE_EQ(r.phi, expansion(g, r.set));
        }
    }
}

// --- sse_high_rank_extract ----------------------------------------------------

TEST(SseHighRankExtract, PicksOneUncutClique)
{
    auto g = clique_union(12, 4);
    auto r = sse_high_rank_extract(ResidualView::fresh(g), ParamProfile::desk());
    EXPECT_EQ(r.phi, 0.0);
    EXPECT_EQ(r.set.size(), 4);
    EXPECT_EQ(r.method, SseMethod::Sweep);
    // All four nodes in one block.
    EXPECT_EQ(r.set.members().front() / 4, r.set.members().back() / 4);
}

TEST(SseHighRankExtract, CompleteGraphFailsExplicitly)
{
    // K8 has threshold rank 1 < sqrt(8), and no small subset has expansion <= 0.1 either.
    EXPECT_THROW(sse_high_rank_extract(ResidualView::fresh(keep(complete_graph(8))), ParamProfile::desk()), Error);
    EXPECT_NEAR(sse_exact(complete_graph(8), 1, 7).value, 1.0 / 7.0, 1e-15);
}

TEST(SseHighRankExtract, NoQualifyingSetIsReported)
{
    // C40 is high rank at 0.95 but any arc within the size cap has expansion >= 1/|arc| > 0.01.
    auto p = ParamProfile::desk();
    p.extract_phi_budget = 0.01;
    auto c40 = cycle_graph(40);
    auto view = ResidualView::fresh(c40);
    ASSERT_TRUE(is_high_rank(threshold_rank(view, p.tau_extract), 40, p.gamma));
    EXPECT_THROW(sse_high_rank_extract(view, p), SolverFailure);
}

TEST(SseHighRankExtract, MatchedCliqueUnionBlock)
{
    auto g = matched_clique_union(16, 8, 0);
    auto p = ParamProfile::desk();
    auto view = ResidualView::fresh(g);
    ASSERT_TRUE(is_high_rank(threshold_rank(view, p.tau_extract), 128, p.gamma));
    auto r = sse_high_rank_extract(view, p);
    EXPECT_LE(r.phi, 2.0 / 56.0 + 1e-15);
    EXPECT_LE(r.set.size(), extraction_size_cap(128, p.size_cap_exponent));
    EXPECT_DOUBLE_EQ(r.phi, view.expansion(r.set));
}

// --- extract_partition --------------------------------------------------------

namespace {

void check_trace(const Graph& g, const ExtractionTrace& t, const ParamProfile& p)
{
    const int n = g.num_nodes();
    std::vector<int> owner(n, -1);
    std::vector<Node> removed;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
        const auto& step = t.steps[i];
        ResidualView view(g, NodeSet(n, removed));
        EXPECT_EQ(view.order(), step.residual_order);
        EXPECT_LE(view.expansion(step.part), p.extract_phi_budget + 1e-12);
        EXPECT_EQ(view.expansion(step.part), step.phi);
        EXPECT_LE(step.part.size(), extraction_size_cap(view.order(), p.size_cap_exponent));
        EXPECT_TRUE(is_high_rank(threshold_rank(view, p.tau_case), view.order(), p.gamma));
        for (Node v : step.part) {
            EXPECT_EQ(owner[v], -1);
            owner[v] = static_cast<int>(i);
            removed.push_back(v);
        }
    }
    for (Node v : t.residual) {
        EXPECT_EQ(owner[v], -1);
        owner[v] = -2;
    }
    for (int v = 0; v < n; ++v) EXPECT_NE(owner[v], -1) << v;
    if (!t.residual.empty()) {
        ResidualView last(g, t.residual.complement());
        EXPECT_FALSE(is_high_rank(threshold_rank(last, p.tau_case), last.order(), p.gamma));
    }
    EXPECT_LE(static_cast<int>(t.steps.size()), n);
}

} // namespace

TEST(ExtractPartition, TwoCliquesAreLowRank)
{
    auto g = disjoint_cliques(2, 4);
    auto t = extract_partition(g, ParamProfile::desk());
    EXPECT_TRUE(t.steps.empty());
    EXPECT_EQ(t.residual, NodeSet::all(8));
    EXPECT_EQ(t.final_rank, 2);
}

TEST(ExtractPartition, TwentyCliques)
{
    auto g = clique_union(20, 4);
    auto p = ParamProfile::desk();
    auto t = extract_partition(g, p);
    check_trace(g, t, p);
    // c remaining components stay high rank while c >= sqrt(4c), i.e. c >= 4.
    EXPECT_EQ(t.residual.size(), 12);
    EXPECT_EQ(t.steps.size(), 17u);
    EXPECT_LE(t.residual.size() / 4, static_cast<int>(std::ceil(std::sqrt(t.residual.size()))) - 1);
}

TEST(ExtractPartition, DenseComplementIsLowRank)
{
    auto g = complement_3regular(24, 0);
    auto t = extract_partition(g, ParamProfile::desk());
    EXPECT_TRUE(t.steps.empty());
    EXPECT_EQ(t.residual.size(), 24);
}

TEST(ExtractPartition, MatchedCliquesAndCycles)
{
    auto p = ParamProfile::desk();
    for (const auto& g : {matched_clique_union(16, 8, 0), matched_clique_union(20, 6, 0), cycle_graph(120)}) {
        auto t = extract_partition(g, p);
        check_trace(g, t, p);
        EXPECT_FALSE(t.steps.empty());
    }
}

TEST(ExtractPartition, FailureCarriesPartialTrace)
{
    auto p = ParamProfile::desk();
    p.extract_phi_budget = 0.01;
    try {
        extract_partition(cycle_graph(40), p);
        FAIL() << "expected ExtractionFailure";
    } catch (const ExtractionFailure& e) {
        EXPECT_TRUE(e.partial().steps.empty());
        EXPECT_EQ(e.partial().residual.size(), 40);
    }
}
