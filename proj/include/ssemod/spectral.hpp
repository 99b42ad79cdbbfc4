#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "ssemod/error.hpp"
#include "ssemod/graph.hpp"

namespace ssemod {

/// |lambda| must exceed tau by this much to count toward the threshold rank.
inline constexpr double kRankBoundaryTol = 1e-9;

/// A d-regular graph with some nodes removed, re-regularized by self-loops.
///
/// Every edge-endpoint a survivor loses to a removed node becomes a
/// weight-1/2 self-loop (counted twice in the degree), so each survivor keeps
/// degree d. Loops never cross a cut. Non-owning: the base graph must outlive
/// the view.
class ResidualView
{
public:
    ResidualView(const Graph& base, const NodeSet& removed) : base_(&base)
    {
        auto d = is_regular(base);
        if (!d) {
            throw PreconditionError("residual view needs a regular base graph");
        }
        if (removed.universe() != base.num_nodes()) {
            throw PreconditionError("removed set bound to a different graph");
        }
        d_ = *d;
        alive_.assign(static_cast<std::size_t>(base.num_nodes()), 1);
        for (Node v : removed) {
            alive_[v] = 0;
        }
        local_.assign(static_cast<std::size_t>(base.num_nodes()), -1);
        for (Node v = 0; v < base.num_nodes(); ++v) {
            if (alive_[v]) {
                local_[v] = static_cast<int>(survivors_.size());
                survivors_.push_back(v);
            }
        }
        if (survivors_.empty()) {
            throw PreconditionError("residual view has no surviving nodes");
        }
        residual_degree_.reserve(survivors_.size());
        for (Node v : survivors_) {
            int deg = 0;
            for (Node w : base.neighbors(v)) {
                deg += alive_[w];
            }
            residual_degree_.push_back(deg);
        }
    }

    static ResidualView fresh(const Graph& base) { return ResidualView(base, NodeSet(base.num_nodes(), {})); }

    // The view does not own its graph.
    ResidualView(Graph&&, const NodeSet&) = delete;
    static ResidualView fresh(Graph&&) = delete;

    const Graph& base() const noexcept { return *base_; }
    int degree() const noexcept { return d_; }
    int order() const noexcept { return static_cast<int>(survivors_.size()); }
    const std::vector<Node>& survivors() const noexcept { return survivors_; }
    bool alive(Node v) const { return alive_[v] != 0; }
    /// Position of v among the survivors, or -1 if removed.
    int local_index(Node v) const { return local_[v]; }
    /// Real (non-loop) degree of the i-th survivor.
    int residual_degree(int i) const { return residual_degree_[i]; }

    NodeSet removed() const
    {
        std::vector<Node> r;
        for (Node v = 0; v < base_->num_nodes(); ++v) {
            if (!alive_[v]) {
                r.push_back(v);
            }
        }
        return NodeSet(base_->num_nodes(), std::move(r));
    }

    NodeSet surviving_set() const { return NodeSet(base_->num_nodes(), survivors_); }

    /// Real edges between s and the surviving nodes outside s.
    std::int64_t cut(const NodeSet& s) const
    {
        require_inside(s);
        auto in = s.mask();
        std::int64_t c = 0;
        for (Node v : s) {
            for (Node w : base_->neighbors(v)) {
                c += alive_[w] && !in[w];
            }
        }
        return c;
    }

    /// cut(s) / (d |s|).
    double expansion(const NodeSet& s) const
    {
        if (s.empty()) {
            throw PreconditionError("expansion of an empty set");
        }
        if (d_ == 0) {
            throw PreconditionError("expansion in a 0-regular graph");
        }
        return static_cast<double>(cut(s)) / (static_cast<double>(d_) * s.size());
    }

private:
    void require_inside(const NodeSet& s) const
    {
        if (s.universe() != base_->num_nodes()) {
            throw PreconditionError("node set bound to a different graph");
        }
        for (Node v : s) {
            if (!alive_[v]) {
                throw PreconditionError("node " + std::to_string(v) + " is not in the residual");
            }
        }
    }

    const Graph* base_;
    int d_ = 0;
    std::vector<char> alive_;
    std::vector<int> local_;
    std::vector<Node> survivors_;
    std::vector<int> residual_degree_;
};

/// Symmetric row-stochastic walk matrix, kept as integer numerators over d.
struct WalkMatrix
{
    int order = 0;
    int denominator = 1;
    std::vector<int> numerators; // row-major order x order

    int numerator(int i, int j) const { return numerators[static_cast<std::size_t>(i) * order + j]; }

    Eigen::MatrixXd dense() const
    {
        Eigen::MatrixXd a(order, order);
        for (int i = 0; i < order; ++i) {
            for (int j = 0; j < order; ++j) {
                a(i, j) = static_cast<double>(numerator(i, j)) / denominator;
            }
        }
        return a;
    }
};

/// Off-diagonal a_{u,v}/d between survivors, diagonal (d - deg'(v))/d.
inline WalkMatrix walk_matrix(const ResidualView& view)
{
    if (view.degree() == 0) {
        throw PreconditionError("walk matrix of a 0-regular graph is undefined");
    }
    const int r = view.order();
    WalkMatrix w;
    w.order = r;
    w.denominator = view.degree();
    w.numerators.assign(static_cast<std::size_t>(r) * r, 0);
    for (int i = 0; i < r; ++i) {
        Node v = view.survivors()[i];
        for (Node u : view.base().neighbors(v)) {
            int j = view.local_index(u);
            if (j >= 0) {
                w.numerators[static_cast<std::size_t>(i) * r + j] = 1;
            }
        }
        w.numerators[static_cast<std::size_t>(i) * r + i] = view.degree() - view.residual_degree(i);
    }
    return w;
}

/// Eigenpairs in descending eigenvalue order; column i of `vectors` pairs with values[i].
struct SpectralDecomposition
{
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

inline SpectralDecomposition decompose(const WalkMatrix& w)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(w.dense());
    if (solver.info() != Eigen::Success) {
        throw SolverFailure("symmetric eigensolver did not converge");
    }
    // Eigen returns ascending order.
    SpectralDecomposition sd;
    sd.values = solver.eigenvalues().reverse();
    sd.vectors = solver.eigenvectors().rowwise().reverse();
    return sd;
}

inline std::vector<double> eigenvalues(const WalkMatrix& w)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(w.dense(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw SolverFailure("symmetric eigensolver did not converge");
    }
    std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + w.order);
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

inline int count_above(const std::vector<double>& spectrum, double tau)
{
    return static_cast<int>(std::count_if(spectrum.begin(), spectrum.end(),
                                          [tau](double l) { return std::abs(l) > tau + kRankBoundaryTol; }));
}

struct SpectralSummary
{
    std::vector<double> eigenvalues;
    double tau = 0.0;
    int rank = 0;
};

inline SpectralSummary spectral_summary(const ResidualView& view, double tau)
{
    if (!(tau >= 0.0 && tau < 1.0)) {
        throw PreconditionError("threshold must lie in [0, 1)");
    }
    SpectralSummary s;
    s.eigenvalues = eigenvalues(walk_matrix(view));
    s.tau = tau;
    s.rank = count_above(s.eigenvalues, tau);
    return s;
}

/// Number of walk-matrix eigenvalues with |lambda| > tau, with multiplicity.
inline int threshold_rank(const ResidualView& view, double tau) { return spectral_summary(view, tau).rank; }

inline int threshold_rank(const Graph& g, double tau) { return threshold_rank(ResidualView::fresh(g), tau); }

} // namespace ssemod
