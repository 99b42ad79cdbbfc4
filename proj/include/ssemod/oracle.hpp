#pragma once

#include <bit>
#include <cstdint>
#include <variant>
#include <vector>

#include "ssemod/error.hpp"
#include "ssemod/graph.hpp"
#include "ssemod/metrics.hpp"

namespace ssemod {

inline constexpr int kOptExactMaxNodes = 13;
inline constexpr int kOpt2ExactMaxNodes = 26;
inline constexpr int kSseExactMaxNodes = 22;

struct OracleResult
{
    double value = 0.0;
    /// Clustering for the modularity optima, NodeSet for minimum expansion.
    std::variant<Clustering, NodeSet> witness;
    std::uint64_t instances_enumerated = 0;
};

struct Opt2Result : OracleResult
{
    /// Best modularity over partitions into exactly two non-empty parts (may be negative).
    double best_split = 0.0;
    /// Witness side of best_split.
    NodeSet best_split_side;
};

namespace detail {

inline std::vector<std::uint64_t> adjacency_masks(const Graph& g)
{
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(g.num_nodes()), 0);
    for (const auto& e : g.edges()) {
        adj[e.u] |= std::uint64_t{1} << e.v;
        adj[e.v] |= std::uint64_t{1} << e.u;
    }
    return adj;
}

inline NodeSet set_from_mask(int n, std::uint64_t mask)
{
    std::vector<Node> m;
    for (int i = 0; i < n; ++i) {
        if (mask >> i & 1) {
            m.push_back(i);
        }
    }
    return NodeSet(n, std::move(m));
}

/// Depth-first restricted-growth-string enumeration with incremental m_i, D_i.
class PartitionEnumerator
{
public:
    explicit PartitionEnumerator(const Graph& g)
        : g_(g), n_(g.num_nodes()), m_(g.num_edges()), label_(static_cast<std::size_t>(n_), 0),
          degsum_(static_cast<std::size_t>(n_) + 1, 0)
    {
    }

    void run()
    {
        if (n_ == 0) {
            return;
        }
        // Node 0 always opens block 0.
        label_[0] = 0;
        degsum_[0] = g_.degree(0);
        inside_sum_ = 0;
        sq_sum_ = static_cast<std::int64_t>(degsum_[0]) * degsum_[0];
        recurse(1, 1);
    }

    std::int64_t best_numerator() const { return best_num_; }
    const std::vector<int>& best_labels() const { return best_labels_; }
    std::uint64_t count() const { return count_; }

private:
    void recurse(int v, int blocks)
    {
        if (v == n_) {
            ++count_;
            std::int64_t num = 4 * m_ * inside_sum_ - sq_sum_;
            if (count_ == 1 || num > best_num_) {
                best_num_ = num;
                best_labels_ = label_;
            }
            return;
        }
        const int dv = g_.degree(v);
        for (int b = 0; b <= blocks; ++b) {
            int links = 0;
            for (Node w : g_.neighbors(v)) {
                if (w < v && label_[w] == b) {
                    ++links;
                }
            }
            const std::int64_t old_d = degsum_[b];
            label_[v] = b;
            degsum_[b] += dv;
            inside_sum_ += links;
            sq_sum_ += (old_d + dv) * (old_d + dv) - old_d * old_d;
            recurse(v + 1, b == blocks ? blocks + 1 : blocks);
            sq_sum_ -= (old_d + dv) * (old_d + dv) - old_d * old_d;
            inside_sum_ -= links;
            degsum_[b] = old_d;
        }
    }

    const Graph& g_;
    int n_;
    std::int64_t m_;
    std::vector<int> label_;
    std::vector<std::int64_t> degsum_;
    std::int64_t inside_sum_ = 0;
    std::int64_t sq_sum_ = 0;
    std::int64_t best_num_ = 0;
    std::vector<int> best_labels_;
    std::uint64_t count_ = 0;
};

} // namespace detail

/// OPT(G): maximum modularity over every set partition of V.
inline OracleResult opt_exact(const Graph& g)
{
    if (g.num_edges() == 0) {
        throw PreconditionError("opt_exact: graph has no edges");
    }
    if (g.num_nodes() > kOptExactMaxNodes) {
        throw BudgetExceeded("opt_exact: n=" + std::to_string(g.num_nodes()) + " exceeds " +
                             std::to_string(kOptExactMaxNodes));
    }
    detail::PartitionEnumerator en(g);
    en.run();
    OracleResult res;
    res.value = ModularityFraction{en.best_numerator(), g.num_edges()}.value();
    res.witness = Clustering::from_labels(en.best_labels());
    res.instances_enumerated = en.count();
    return res;
}

/// OPT_2(G): best of the single community (value 0) and every two-part split.
inline Opt2Result opt2_exact(const Graph& g)
{
    const int n = g.num_nodes();
    if (g.num_edges() == 0) {
        throw PreconditionError("opt2_exact: graph has no edges");
    }
    if (n > kOpt2ExactMaxNodes) {
        throw BudgetExceeded("opt2_exact: n=" + std::to_string(n) + " exceeds " +
                             std::to_string(kOpt2ExactMaxNodes));
    }
    const std::int64_t m = g.num_edges();
    const std::int64_t two_m = 2 * m;
    const auto adj = detail::adjacency_masks(g);

    // Side S ranges over non-empty subsets of {0..n-2}; node n-1 always sits in the complement.
    std::uint64_t set = 0;
    std::int64_t inside = 0;
    std::int64_t deg = 0;
    bool found = false;
    std::int64_t best_num = 0;
    std::uint64_t best_set = 0;
    std::uint64_t count = 0;
    const std::uint64_t total = n >= 1 ? std::uint64_t{1} << (n - 1) : 1;
    for (std::uint64_t t = 1; t < total; ++t) {
        int i = std::countr_zero(t);
        std::uint64_t bit = std::uint64_t{1} << i;
        if (set & bit) {
            set &= ~bit;
            inside -= std::popcount(adj[i] & set);
            deg -= g.degree(i);
        } else {
            inside += std::popcount(adj[i] & set);
            set |= bit;
            deg += g.degree(i);
        }
        ++count;
        const std::int64_t cut = deg - 2 * inside;
        const std::int64_t inside_other = m - inside - cut;
        const std::int64_t other_deg = two_m - deg;
        const std::int64_t num = 4 * m * (inside + inside_other) - deg * deg - other_deg * other_deg;
        if (!found || num > best_num) {
            found = true;
            best_num = num;
            best_set = set;
        }
    }
    Opt2Result res;
    res.instances_enumerated = count + 1;
    if (found) {
        res.best_split = ModularityFraction{best_num, m}.value();
        res.best_split_side = detail::set_from_mask(n, best_set);
    } else {
        res.best_split = 0.0;
        res.best_split_side = NodeSet(n, {});
    }
    if (found && best_num > 0) {
        res.value = res.best_split;
        res.witness = TwoPartition(res.best_split_side).as_clustering();
    } else {
        res.value = 0.0;
        res.witness = Clustering(n, {NodeSet::all(n)});
    }
    return res;
}

/// Minimum expansion over all S with size_lo <= |S| <= size_hi and positive degree sum.
inline OracleResult sse_exact(const Graph& g, int size_lo, int size_hi)
{
    const int n = g.num_nodes();
    if (n > kSseExactMaxNodes) {
        throw BudgetExceeded("sse_exact: n=" + std::to_string(n) + " exceeds " +
                             std::to_string(kSseExactMaxNodes));
    }
    if (size_lo < 1 || size_lo > size_hi || size_hi > n - 1) {
        throw PreconditionError("sse_exact: need 1 <= size_lo <= size_hi <= n-1");
    }
    const auto adj = detail::adjacency_masks(g);
    std::uint64_t set = 0;
    std::int64_t inside = 0;
    std::int64_t deg = 0;
    int size = 0;
    bool found = false;
    std::int64_t best_cut = 0;
    std::int64_t best_deg = 1;
    std::uint64_t best_set = 0;
    std::uint64_t count = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t t = 1; t < total; ++t) {
        int i = std::countr_zero(t);
        std::uint64_t bit = std::uint64_t{1} << i;
        if (set & bit) {
            set &= ~bit;
            inside -= std::popcount(adj[i] & set);
            deg -= g.degree(i);
            --size;
        } else {
            inside += std::popcount(adj[i] & set);
            set |= bit;
            deg += g.degree(i);
            ++size;
        }
        if (size < size_lo || size > size_hi || deg == 0) {
            continue;
        }
        ++count;
        const std::int64_t cut = deg - 2 * inside;
        if (!found || cut * best_deg < best_cut * deg) {
            found = true;
            best_cut = cut;
            best_deg = deg;
            best_set = set;
        }
    }
    if (!found) {
        throw PreconditionError("sse_exact: every set in the size band has zero degree sum");
    }
    OracleResult res;
    res.value = static_cast<double>(best_cut) / static_cast<double>(best_deg);
    res.witness = detail::set_from_mask(n, best_set);
    res.instances_enumerated = count;
    return res;
}

} // namespace ssemod
