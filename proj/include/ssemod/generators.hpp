#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ssemod/error.hpp"
#include "ssemod/graph.hpp"

namespace ssemod {

namespace detail {

/// Unbiased draw from [0, bound) on top of mt19937_64, identical on every platform.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound)
{
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x = 0;
    do {
        x = rng();
    } while (x >= limit);
    return x % bound;
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& rng)
{
    for (std::size_t i = v.size(); i > 1; --i) {
        std::swap(v[i - 1], v[uniform_below(rng, i)]);
    }
}

inline void append_clique(std::vector<Edge>& edges, Node first, int size)
{
    for (int a = 0; a < size; ++a) {
        for (int b = a + 1; b < size; ++b) {
            edges.push_back({first + a, first + b});
        }
    }
}

} // namespace detail

/// k disjoint copies of K_s; clique i occupies nodes i*s .. i*s+s-1.
inline Graph clique_union(int k, int s)
{
    if (k < 2) {
        throw PreconditionError("clique_union: need k >= 2");
    }
    if (s < 4) {
        throw PreconditionError("clique_union: need clique size s >= 4 (more than 3 nodes per clique)");
    }
    std::vector<Edge> edges;
    for (int i = 0; i < k; ++i) {
        detail::append_clique(edges, i * s, s);
    }
    return Graph(k * s, std::move(edges));
}

/// k disjoint K_s, each missing the edge {u_i, v_i} between its first two nodes, plus the
/// perfect matching u_i -- v_{pi(i)} for a seeded fixed-point-free permutation pi.
inline Graph matched_clique_union(int k, int s, std::uint64_t seed)
{
    if (k < 2) {
        throw PreconditionError("matched_clique_union: need k >= 2");
    }
    if (s < 4) {
        throw PreconditionError("matched_clique_union: need clique size s >= 4");
    }
    std::vector<Edge> edges;
    for (int i = 0; i < k; ++i) {
        const Node base = i * s;
        for (int a = 0; a < s; ++a) {
            for (int b = a + 1; b < s; ++b) {
                if (a == 0 && b == 1) {
                    continue;
                }
                edges.push_back({base + a, base + b});
            }
        }
    }
    std::mt19937_64 rng(seed);
    std::vector<int> perm(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        perm[i] = i;
    }
    // Reshuffle until no u_i is matched back to its own v_i.
    auto has_fixed_point = [&] {
        for (int i = 0; i < k; ++i) {
            if (perm[i] == i) {
                return true;
            }
        }
        return false;
    };
    do {
        detail::shuffle(perm, rng);
    } while (has_fixed_point());
    for (int i = 0; i < k; ++i) {
        edges.push_back({i * s, perm[i] * s + 1});
    }
    return Graph(k * s, std::move(edges));
}

namespace detail {

/// Pairing model with incremental rejection of loops and multi-edges; restarts when stuck.
inline Graph random_regular_sparse(int n, int d, std::mt19937_64& rng)
{
    constexpr int kRestarts = 1000;
    for (int attempt = 0; attempt < kRestarts; ++attempt) {
        std::vector<Node> points;
        points.reserve(static_cast<std::size_t>(n) * d);
        for (Node v = 0; v < n; ++v) {
            for (int j = 0; j < d; ++j) {
                points.push_back(v);
            }
        }
        std::set<std::pair<Node, Node>> chosen;
        bool stuck = false;
        while (!points.empty() && !stuck) {
            bool paired = false;
            for (int tries = 0; tries < 100; ++tries) {
                auto i = uniform_below(rng, points.size());
                auto j = uniform_below(rng, points.size());
                Node a = points[i];
                Node b = points[j];
                if (i == j || a == b) {
                    continue;
                }
                auto key = std::minmax(a, b);
                if (chosen.count(key)) {
                    continue;
                }
                chosen.insert(key);
                // Remove the larger index first so the smaller stays valid.
                for (auto idx : {std::max(i, j), std::min(i, j)}) {
                    points[idx] = points.back();
                    points.pop_back();
                }
                paired = true;
                break;
            }
            stuck = !paired;
        }
        if (!stuck) {
            std::vector<Edge> edges;
            for (const auto& [a, b] : chosen) {
                edges.push_back({a, b});
            }
            return Graph(n, std::move(edges));
        }
    }
    throw BudgetExceeded("random_regular: rejection budget exhausted");
}

} // namespace detail

/// Random d-regular simple graph, deterministic per seed.
///
/// Dense requests (d > (n-1)/2) are built as the complement of a random
/// (n-1-d)-regular graph.
inline Graph random_regular(int n, int d, std::uint64_t seed)
{
    if (n < 1 || d < 0 || d >= n) {
        throw PreconditionError("random_regular: need 0 <= d < n");
    }
    if ((static_cast<long long>(n) * d) % 2 != 0) {
        throw PreconditionError("random_regular: n*d must be even");
    }
    std::mt19937_64 rng(seed);
    if (2 * d > n - 1) {
        return complement(detail::random_regular_sparse(n, n - 1 - d, rng));
    }
    return detail::random_regular_sparse(n, d, rng);
}

/// Complement of a random 3-regular graph: (n-4)-regular on n nodes.
inline Graph complement_3regular(int n, std::uint64_t seed)
{
    if (n < 8 || n % 2 != 0) {
        throw PreconditionError("complement_3regular: need even n >= 8");
    }
    return complement(random_regular(n, 3, seed));
}

} // namespace ssemod
