#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssemod/error.hpp"

namespace ssemod {

using Node = int;

struct Edge
{
    Node u;
    Node v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Immutable simple undirected graph on nodes 0..n-1.
///
/// Edges are stored once with u < v, sorted. Degrees and adjacency lists are
/// built at construction and never change afterwards.
class Graph
{
public:
    Graph() = default;

    /// Throws PreconditionError on self-loops, duplicates or out-of-range ids.
    Graph(int n, std::vector<Edge> edges) : n_(n)
    {
        if (n < 0) {
            throw PreconditionError("negative node count");
        }
        for (auto& e : edges) {
            if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
                throw PreconditionError("edge {" + std::to_string(e.u) + "," + std::to_string(e.v) +
                                        "} out of range for n=" + std::to_string(n));
            }
            if (e.u == e.v) {
                throw PreconditionError("self-loop at node " + std::to_string(e.u));
            }
            if (e.u > e.v) {
                std::swap(e.u, e.v);
            }
        }
        std::sort(edges.begin(), edges.end());
        auto dup = std::adjacent_find(edges.begin(), edges.end());
        if (dup != edges.end()) {
            throw PreconditionError("duplicate edge {" + std::to_string(dup->u) + "," +
                                    std::to_string(dup->v) + "}");
        }
        edges_ = std::move(edges);
        adj_.assign(static_cast<std::size_t>(n), {});
        for (const auto& e : edges_) {
            adj_[e.u].push_back(e.v);
            adj_[e.v].push_back(e.u);
        }
        for (auto& a : adj_) {
            std::sort(a.begin(), a.end());
        }
    }

    int num_nodes() const noexcept { return n_; }
    std::int64_t num_edges() const noexcept { return static_cast<std::int64_t>(edges_.size()); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    int degree(Node v) const { return static_cast<int>(adj_[v].size()); }
    const std::vector<Node>& neighbors(Node v) const { return adj_[v]; }

    bool has_edge(Node u, Node v) const
    {
        const auto& a = adj_[u];
        return std::binary_search(a.begin(), a.end(), v);
    }

    std::int64_t degree_sum() const
    {
        std::int64_t s = 0;
        for (const auto& a : adj_) {
            s += static_cast<std::int64_t>(a.size());
        }
        return s;
    }

    friend bool operator==(const Graph& a, const Graph& b)
    {
        return a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<Node>> adj_;
};

/// Sorted, duplicate-free subset of a graph's node universe.
class NodeSet
{
public:
    NodeSet() = default;

    NodeSet(int universe, std::vector<Node> members) : universe_(universe), members_(std::move(members))
    {
        std::sort(members_.begin(), members_.end());
        if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
            throw PreconditionError("node set contains a repeated node");
        }
        if (!members_.empty() && (members_.front() < 0 || members_.back() >= universe_)) {
            throw PreconditionError("node set member outside 0.." + std::to_string(universe_ - 1));
        }
    }

    static NodeSet all(int universe)
    {
        std::vector<Node> m(static_cast<std::size_t>(universe));
        for (int i = 0; i < universe; ++i) {
            m[i] = i;
        }
        return NodeSet(universe, std::move(m));
    }

    int universe() const noexcept { return universe_; }
    int size() const noexcept { return static_cast<int>(members_.size()); }
    bool empty() const noexcept { return members_.empty(); }
    const std::vector<Node>& members() const noexcept { return members_; }
    auto begin() const noexcept { return members_.begin(); }
    auto end() const noexcept { return members_.end(); }

    bool contains(Node v) const { return std::binary_search(members_.begin(), members_.end(), v); }

    /// Membership as a dense flag vector of length universe().
    std::vector<char> mask() const
    {
        std::vector<char> m(static_cast<std::size_t>(universe_), 0);
        for (Node v : members_) {
            m[v] = 1;
        }
        return m;
    }

    NodeSet complement() const
    {
        std::vector<Node> out;
        out.reserve(static_cast<std::size_t>(universe_ - size()));
        auto it = members_.begin();
        for (Node v = 0; v < universe_; ++v) {
            if (it != members_.end() && *it == v) {
                ++it;
            } else {
                out.push_back(v);
            }
        }
        return NodeSet(universe_, std::move(out));
    }

    friend bool operator==(const NodeSet&, const NodeSet&) = default;

private:
    int universe_ = 0;
    std::vector<Node> members_;
};

/// A set of communities: pairwise-disjoint non-empty parts covering V.
class Clustering
{
public:
    Clustering() = default;

    Clustering(int universe, std::vector<NodeSet> parts) : universe_(universe), parts_(std::move(parts))
    {
        if (parts_.empty()) {
            throw PreconditionError("clustering has no parts");
        }
        std::vector<char> seen(static_cast<std::size_t>(universe_), 0);
        int covered = 0;
        for (const auto& p : parts_) {
            if (p.universe() != universe_) {
                throw PreconditionError("clustering part bound to a different node universe");
            }
            if (p.empty()) {
                throw PreconditionError("clustering has an empty part");
            }
            for (Node v : p) {
                if (seen[v]) {
                    throw PreconditionError("node " + std::to_string(v) + " appears in two parts");
                }
                seen[v] = 1;
                ++covered;
            }
        }
        if (covered != universe_) {
            throw PreconditionError("clustering does not cover every node");
        }
    }

    /// Builds the clustering whose part i is {v : label[v] == i}; labels must be dense 0..k-1.
    static Clustering from_labels(const std::vector<int>& labels)
    {
        int universe = static_cast<int>(labels.size());
        int k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
        std::vector<std::vector<Node>> parts(static_cast<std::size_t>(k));
        for (int v = 0; v < universe; ++v) {
            if (labels[v] < 0) {
                throw PreconditionError("negative community label");
            }
            parts[labels[v]].push_back(v);
        }
        std::vector<NodeSet> sets;
        for (auto& p : parts) {
            sets.emplace_back(universe, std::move(p));
        }
        return Clustering(universe, std::move(sets));
    }

    int universe() const noexcept { return universe_; }
    int size() const noexcept { return static_cast<int>(parts_.size()); }
    const std::vector<NodeSet>& parts() const noexcept { return parts_; }

    std::vector<int> labels() const
    {
        std::vector<int> lab(static_cast<std::size_t>(universe_), -1);
        for (int i = 0; i < size(); ++i) {
            for (Node v : parts_[i]) {
                lab[v] = i;
            }
        }
        return lab;
    }

private:
    int universe_ = 0;
    std::vector<NodeSet> parts_;
};

/// Partition of V into a non-empty set and its non-empty complement.
class TwoPartition
{
public:
    TwoPartition() = default;

    explicit TwoPartition(NodeSet side_a) : side_a_(std::move(side_a)), side_b_(side_a_.complement())
    {
        if (side_a_.empty() || side_b_.empty()) {
            throw PreconditionError("two-partition needs both sides non-empty");
        }
    }

    const NodeSet& side_a() const noexcept { return side_a_; }
    const NodeSet& side_b() const noexcept { return side_b_; }

    Clustering as_clustering() const
    {
        return Clustering(side_a_.universe(), {side_a_, side_b_});
    }

private:
    NodeSet side_a_;
    NodeSet side_b_;
};

// ---------------------------------------------------------------------------
// Edge-list text format
//
//   # comment
//   n
//   u v
//   ...
// ---------------------------------------------------------------------------

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const char* ws = " \t\r\n\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline bool parse_int(std::string_view tok, long long& out)
{
    if (tok.empty()) {
        return false;
    }
    std::size_t i = 0;
    bool neg = false;
    if (tok[0] == '-' || tok[0] == '+') {
        neg = tok[0] == '-';
        i = 1;
    }
    if (i == tok.size()) {
        return false;
    }
    long long v = 0;
    for (; i < tok.size(); ++i) {
        if (tok[i] < '0' || tok[i] > '9') {
            return false;
        }
        v = v * 10 + (tok[i] - '0');
        if (v > (1LL << 40)) {
            return false;
        }
    }
    out = neg ? -v : v;
    return true;
}

inline std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t') {
            ++j;
        }
        if (j > i) {
            out.push_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

} // namespace detail

/// Parses the edge-list document. Errors carry the 1-based line number.
inline Graph load_graph(std::string_view text)
{
    std::optional<int> n;
    std::vector<Edge> edges;
    std::vector<std::size_t> edge_line;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto toks = detail::split_ws(line);
        if (!n) {
            long long v = 0;
            if (toks.size() != 1 || !detail::parse_int(toks[0], v) || v <= 0) {
                throw ParseError(lineno, "expected a positive node count, got '" + std::string(line) + "'");
            }
            n = static_cast<int>(v);
            continue;
        }
        long long u = 0;
        long long v = 0;
        if (toks.size() != 2 || !detail::parse_int(toks[0], u) || !detail::parse_int(toks[1], v)) {
            throw ParseError(lineno, "expected 'u v', got '" + std::string(line) + "'");
        }
        if (u < 0 || v < 0 || u >= *n || v >= *n) {
            throw ParseError(lineno, "node index out of range 0.." + std::to_string(*n - 1));
        }
        if (u == v) {
            throw ParseError(lineno, "self-loop at node " + std::to_string(u));
        }
        edges.push_back({static_cast<Node>(std::min(u, v)), static_cast<Node>(std::max(u, v))});
        edge_line.push_back(lineno);
    }
    if (!n) {
        throw ParseError(std::max<std::size_t>(lineno, 1), "missing node count");
    }
    // Report duplicates against the line of the second occurrence.
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return edges[a] < edges[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (edges[order[i]] == edges[order[i - 1]]) {
            const auto& e = edges[order[i]];
            throw ParseError(edge_line[order[i]], "duplicate edge {" + std::to_string(e.u) + "," +
                                                       std::to_string(e.v) + "}");
        }
    }
    return Graph(*n, std::move(edges));
}

/// Serializes in the edge-list format; `header` lines are emitted as '#' comments.
inline std::string to_edge_list(const Graph& g, const std::vector<std::string>& header = {})
{
    std::ostringstream os;
    for (const auto& h : header) {
        os << "# " << h << '\n';
    }
    os << g.num_nodes() << '\n';
    for (const auto& e : g.edges()) {
        os << e.u << ' ' << e.v << '\n';
    }
    return os.str();
}

inline std::optional<int> is_regular(const Graph& g)
{
    if (g.num_nodes() == 0) {
        return std::nullopt;
    }
    int d = g.degree(0);
    for (Node v = 1; v < g.num_nodes(); ++v) {
        if (g.degree(v) != d) {
            return std::nullopt;
        }
    }
    return d;
}

inline Graph complement(const Graph& g)
{
    std::vector<Edge> out;
    const int n = g.num_nodes();
    for (Node u = 0; u < n; ++u) {
        const auto& a = g.neighbors(u);
        auto it = std::upper_bound(a.begin(), a.end(), u);
        for (Node v = u + 1; v < n; ++v) {
            if (it != a.end() && *it == v) {
                ++it;
            } else {
                out.push_back({u, v});
            }
        }
    }
    return Graph(n, std::move(out));
}

struct InducedSubgraph
{
    Graph graph;
    /// original_id[i] is the node of the parent graph relabeled to i.
    std::vector<Node> original_id;
};

/// Subgraph induced by `s`, relabeled 0..|s|-1 by ascending original id.
inline InducedSubgraph induced_subgraph(const Graph& g, const NodeSet& s)
{
    if (s.empty()) {
        throw PreconditionError("induced_subgraph of an empty node set");
    }
    if (s.universe() != g.num_nodes()) {
        throw PreconditionError("node set bound to a different graph");
    }
    std::vector<int> relabel(static_cast<std::size_t>(g.num_nodes()), -1);
    for (int i = 0; i < s.size(); ++i) {
        relabel[s.members()[i]] = i;
    }
    std::vector<Edge> edges;
    for (const auto& e : g.edges()) {
        if (relabel[e.u] >= 0 && relabel[e.v] >= 0) {
            edges.push_back({relabel[e.u], relabel[e.v]});
        }
    }
    return {Graph(s.size(), std::move(edges)), s.members()};
}

} // namespace ssemod
