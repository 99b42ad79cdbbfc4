#pragma once

#include <cstdint>
#include <vector>

#include "ssemod/error.hpp"
#include "ssemod/graph.hpp"

namespace ssemod {

struct SetMetrics
{
    double mu = 0.0;
    double phi = 0.0;
    double density = 0.0;
    double modularity = 0.0;
};

struct ClusteringMetrics
{
    std::vector<std::int64_t> internal_edges;          // m_i
    std::vector<std::int64_t> degree_sums;             // D_i
    std::vector<std::vector<std::int64_t>> cross_edges; // m_ij, symmetric, zero diagonal
    double modularity = 0.0;
};

/// Modularity as the exact fraction numerator / (4 m^2).
///
/// numerator = 4m * sum_i m_i - sum_i D_i^2, which makes ties between
/// partitions comparable without rounding.
struct ModularityFraction
{
    std::int64_t numerator = 0;
    std::int64_t m = 0;

    double value() const
    {
        return static_cast<double>(numerator) / (4.0 * static_cast<double>(m) * static_cast<double>(m));
    }
};

namespace detail {

inline void require_proper(const Graph& g, const NodeSet& s, const char* op)
{
    if (s.universe() != g.num_nodes()) {
        throw PreconditionError(std::string(op) + ": node set bound to a different graph");
    }
    if (s.empty() || s.size() == g.num_nodes()) {
        throw PreconditionError(std::string(op) + ": requires a non-empty proper subset of V");
    }
}

} // namespace detail

inline std::int64_t degree_sum(const Graph& g, const NodeSet& s)
{
    std::int64_t d = 0;
    for (Node v : s) {
        d += g.degree(v);
    }
    return d;
}

/// Edges with both endpoints in s.
inline std::int64_t internal_edges(const Graph& g, const NodeSet& s)
{
    auto in = s.mask();
    std::int64_t twice = 0;
    for (Node v : s) {
        for (Node w : g.neighbors(v)) {
            twice += in[w];
        }
    }
    return twice / 2;
}

/// Edges with exactly one endpoint in s.
inline std::int64_t cut_edges(const Graph& g, const NodeSet& s)
{
    return degree_sum(g, s) - 2 * internal_edges(g, s);
}

inline double measure(const Graph& g, const NodeSet& s)
{
    detail::require_proper(g, s, "measure");
    return static_cast<double>(s.size()) / static_cast<double>(g.num_nodes());
}

inline double expansion(const Graph& g, const NodeSet& s)
{
    detail::require_proper(g, s, "expansion");
    auto vol = degree_sum(g, s);
    if (vol == 0) {
        throw PreconditionError("expansion: degree sum of the set is zero");
    }
    return static_cast<double>(cut_edges(g, s)) / static_cast<double>(vol);
}

inline double density(const Graph& g, const NodeSet& s) { return 1.0 - expansion(g, s); }

/// M(S) by the definitional double sum over ordered pairs (u, v) in S x S.
///
/// Each internal edge contributes a_{u,v} twice and every diagonal term
/// contributes -d_v^2 / 2m. Quadratic in |S|.
inline double modularity_set(const Graph& g, const NodeSet& s)
{
    if (g.num_edges() == 0) {
        throw PreconditionError("modularity: graph has no edges");
    }
    if (s.universe() != g.num_nodes() || s.empty()) {
        throw PreconditionError("modularity: requires a non-empty subset of V");
    }
    const double two_m = 2.0 * static_cast<double>(g.num_edges());
    double sum = 0.0;
    for (Node u : s) {
        const double du = g.degree(u);
        for (Node v : s) {
            const double a = g.has_edge(u, v) ? 1.0 : 0.0;
            sum += a - du * g.degree(v) / two_m;
        }
    }
    return sum / two_m;
}

/// m_S/m - (D_S/2m)^2, the closed form of modularity_set.
inline double modularity_set_closed_form(const Graph& g, const NodeSet& s)
{
    if (g.num_edges() == 0) {
        throw PreconditionError("modularity: graph has no edges");
    }
    const double m = static_cast<double>(g.num_edges());
    const double ms = static_cast<double>(internal_edges(g, s));
    const double ds = static_cast<double>(degree_sum(g, s));
    return ms / m - (ds / (2.0 * m)) * (ds / (2.0 * m));
}

inline ClusteringMetrics clustering_metrics(const Graph& g, const Clustering& c)
{
    if (g.num_edges() == 0) {
        throw PreconditionError("modularity: graph has no edges");
    }
    if (c.universe() != g.num_nodes()) {
        throw PreconditionError("clustering bound to a different graph");
    }
    const auto k = static_cast<std::size_t>(c.size());
    const auto label = c.labels();
    ClusteringMetrics out;
    out.internal_edges.assign(k, 0);
    out.degree_sums.assign(k, 0);
    out.cross_edges.assign(k, std::vector<std::int64_t>(k, 0));
    for (Node v = 0; v < g.num_nodes(); ++v) {
        out.degree_sums[label[v]] += g.degree(v);
    }
    for (const auto& e : g.edges()) {
        int a = label[e.u];
        int b = label[e.v];
        if (a == b) {
            ++out.internal_edges[a];
        } else {
            ++out.cross_edges[a][b];
            ++out.cross_edges[b][a];
        }
    }
    const double m = static_cast<double>(g.num_edges());
    double q = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double frac = static_cast<double>(out.degree_sums[i]) / (2.0 * m);
        q += static_cast<double>(out.internal_edges[i]) / m - frac * frac;
    }
    out.modularity = q;
    return out;
}

/// M(S) = sum_i (m_i/m - (D_i/2m)^2).
inline double modularity_clustering(const Graph& g, const Clustering& c)
{
    return clustering_metrics(g, c).modularity;
}

inline ModularityFraction modularity_fraction(const Graph& g, const Clustering& c)
{
    auto cm = clustering_metrics(g, c);
    ModularityFraction f;
    f.m = g.num_edges();
    std::int64_t inside = 0;
    std::int64_t squares = 0;
    for (std::size_t i = 0; i < cm.internal_edges.size(); ++i) {
        inside += cm.internal_edges[i];
        squares += cm.degree_sums[i] * cm.degree_sums[i];
    }
    f.numerator = 4 * f.m * inside - squares;
    return f;
}

/// f(mu, D) = 2(mu D - mu^2).
inline double two_cluster_objective(double mu, double density)
{
    return 2.0 * (mu * density - mu * mu);
}

inline SetMetrics set_metrics(const Graph& g, const NodeSet& s)
{
    SetMetrics sm;
    sm.mu = measure(g, s);
    sm.phi = expansion(g, s);
    sm.density = 1.0 - sm.phi;
    sm.modularity = modularity_set(g, s);
    return sm;
}

} // namespace ssemod
