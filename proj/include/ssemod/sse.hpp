#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ssemod/error.hpp"
#include "ssemod/graph.hpp"
#include "ssemod/profile.hpp"
#include "ssemod/spectral.hpp"

namespace ssemod {

enum class SseMethod
{
    SubspaceEnumeration,
    Exhaustive,
    Sweep,
};

inline const char* to_string(SseMethod m)
{
    switch (m) {
    case SseMethod::SubspaceEnumeration: return "subspace-enumeration";
    case SseMethod::Exhaustive: return "exhaustive";
    case SseMethod::Sweep: return "sweep";
    }
    return "unknown";
}

struct SseResult
{
    NodeSet set;
    /// Expansion inside the view: real cut edges over d|S|.
    double phi = 0.0;
    std::int64_t cut = 0;
    SseMethod method = SseMethod::Sweep;
};

/// Inclusive integer size range.
struct SizeWindow
{
    int lo = 0;
    int hi = 0;
};

/// Largest subspace dimension the low-rank solver enumerates a net over (3^k / 2 directions).
inline constexpr int kMaxSubspaceDim = 10;

/// Integer sizes inside [slack_lo * s, slack_hi * s], clamped to [1, r-1].
inline SizeWindow size_window(int s_target, int r, const ParamProfile& p)
{
    // The 1e-9 guard keeps products such as 0.92 * 25 from rounding past an integer.
    SizeWindow w;
    w.lo = std::max(1, static_cast<int>(std::ceil(p.size_slack_lo * s_target - 1e-9)));
    w.hi = std::min(r - 1, static_cast<int>(std::floor(p.size_slack_hi * s_target + 1e-9)));
    if (w.lo > w.hi) {
        throw PreconditionError("empty size window for target " + std::to_string(s_target));
    }
    return w;
}

/// ceil(r^exponent), never more than r.
inline int extraction_size_cap(int r, double exponent)
{
    return std::min(r, static_cast<int>(std::ceil(std::pow(static_cast<double>(r), exponent))));
}

/// True when rank >= r^gamma.
inline bool is_high_rank(int rank, int r, double gamma)
{
    return static_cast<double>(rank) >= std::pow(static_cast<double>(r), gamma);
}

namespace detail {

/// Best set seen so far under (phi, size, lexicographic) order.
struct BestSet
{
    bool found = false;
    std::int64_t cut = 0;
    int size = 0;
    std::vector<Node> members;

    // phi_a < phi_b with phi = cut / (d * size); d cancels.
    static int compare_phi(std::int64_t cut_a, int size_a, std::int64_t cut_b, int size_b)
    {
        auto l = cut_a * size_b;
        auto r = cut_b * size_a;
        return l < r ? -1 : (l > r ? 1 : 0);
    }

    /// Offers a candidate; `materialize` produces its sorted members only when needed.
    template <typename F>
    void offer(std::int64_t cut_c, int size_c, F&& materialize)
    {
        if (!found) {
            found = true;
            cut = cut_c;
            size = size_c;
            members = materialize();
            return;
        }
        int c = compare_phi(cut_c, size_c, cut, size);
        if (c > 0 || (c == 0 && size_c > size)) {
            return;
        }
        if (c < 0 || size_c < size) {
            cut = cut_c;
            size = size_c;
            members = materialize();
            return;
        }
        auto m = materialize();
        if (m < members) {
            cut = cut_c;
            members = std::move(m);
        }
    }
};

/// Orders survivors by value descending (or ascending), ties by node id.
///
/// Values are quantized so eigensolver round-off cannot split nodes that share a value.
inline std::vector<int> sweep_order(const Eigen::VectorXd& x, bool descending)
{
    const int r = static_cast<int>(x.size());
    std::vector<long long> key(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
        key[i] = std::llround(x[i] * 1e10);
        if (!descending) {
            key[i] = -key[i];
        }
    }
    std::vector<int> order(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
        order[i] = i;
    }
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return key[a] > key[b]; });
    return order;
}

/// Walks the prefixes of `order` and offers every prefix whose size lies in
/// [lo, hi] and which passes `accept(cut, size)`.
template <typename Accept>
void sweep_prefixes(const ResidualView& view, const std::vector<int>& order, int lo, int hi, BestSet& best,
                    Accept&& accept)
{
    const int r = view.order();
    std::vector<char> in(static_cast<std::size_t>(r), 0);
    std::int64_t cut = 0;
    for (int k = 0; k < std::min(hi, r); ++k) {
        int i = order[k];
        Node v = view.survivors()[i];
        int inside = 0;
        for (Node w : view.base().neighbors(v)) {
            int j = view.local_index(w);
            if (j >= 0 && in[j]) {
                ++inside;
            }
        }
        in[i] = 1;
        cut += view.residual_degree(i) - 2 * inside;
        int size = k + 1;
        if (size >= lo && accept(cut, size)) {
            best.offer(cut, size, [&] {
                std::vector<Node> m;
                m.reserve(static_cast<std::size_t>(size));
                for (int t = 0; t < size; ++t) {
                    m.push_back(view.survivors()[order[t]]);
                }
                std::sort(m.begin(), m.end());
                return m;
            });
        }
    }
}

inline SseResult finish(const ResidualView& view, const BestSet& best, SseMethod method)
{
    SseResult res;
    res.set = NodeSet(view.base().num_nodes(), best.members);
    res.cut = view.cut(res.set);
    res.phi = view.expansion(res.set);
    res.method = method;
    return res;
}

/// Minimum-expansion set with size in [lo, hi] by Gray-code enumeration of all survivor subsets.
inline BestSet exhaustive_min_expansion(const ResidualView& view, int lo, int hi)
{
    const int r = view.order();
    if (r > 62) {
        throw BudgetExceeded("exhaustive search over more than 62 nodes");
    }
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(r), 0);
    for (int i = 0; i < r; ++i) {
        for (Node w : view.base().neighbors(view.survivors()[i])) {
            int j = view.local_index(w);
            if (j >= 0) {
                adj[i] |= std::uint64_t{1} << j;
            }
        }
    }
    auto lex_less = [](std::uint64_t a, std::uint64_t b) {
        std::uint64_t diff = a ^ b;
        return (a & diff & (~diff + 1)) != 0;
    };
    std::uint64_t set = 0;
    std::int64_t cut = 0;
    int size = 0;
    bool found = false;
    std::uint64_t best_set = 0;
    std::int64_t best_cut = 0;
    int best_size = 0;
    const std::uint64_t total = std::uint64_t{1} << r;
    for (std::uint64_t t = 1; t < total; ++t) {
        int i = std::countr_zero(t);
        std::uint64_t bit = std::uint64_t{1} << i;
        if (set & bit) {
            set &= ~bit;
            cut -= view.residual_degree(i) - 2 * std::popcount(adj[i] & set);
            --size;
        } else {
            cut += view.residual_degree(i) - 2 * std::popcount(adj[i] & set);
            set |= bit;
            ++size;
        }
        if (size < lo || size > hi) {
            continue;
        }
        if (!found) {
            found = true;
            best_set = set;
            best_cut = cut;
            best_size = size;
            continue;
        }
        int c = BestSet::compare_phi(cut, size, best_cut, best_size);
        if (c < 0 || (c == 0 && (size < best_size || (size == best_size && lex_less(set, best_set))))) {
            best_set = set;
            best_cut = cut;
            best_size = size;
        }
    }
    BestSet best;
    if (found) {
        best.found = true;
        best.cut = best_cut;
        best.size = best_size;
        for (int i = 0; i < r; ++i) {
            if (best_set >> i & 1) {
                best.members.push_back(view.survivors()[i]);
            }
        }
    }
    return best;
}

} // namespace detail

/// Low-threshold-rank small-set-expansion solver.
///
/// Returns a set whose size lies in the slack window around `s_target`.
/// Views with at most `p.n_exact` survivors are searched exhaustively, so the
/// result minimizes expansion over the window. Larger views enumerate a
/// ternary net over the eigenspace with eigenvalues >= p.tau_case and take the
/// best sweep cut of each net direction.
inline SseResult sse_low_rank(const ResidualView& view, int s_target, const ParamProfile& p)
{
    p.validate();
    const int r = view.order();
    if (s_target < 1 || 2 * s_target > r) {
        throw PreconditionError("sse_low_rank: target " + std::to_string(s_target) + " outside 1.." +
                                std::to_string(r / 2));
    }
    const auto w = size_window(s_target, r, p);

    if (r <= p.n_exact) {
        auto best = detail::exhaustive_min_expansion(view, w.lo, w.hi);
        return detail::finish(view, best, SseMethod::Exhaustive);
    }

    const auto sd = decompose(walk_matrix(view));
    int k = 1;
    while (k < r && sd.values[k] >= p.tau_case) {
        ++k;
    }
    if (k > kMaxSubspaceDim) {
        throw BudgetExceeded("sse_low_rank: eigenspace of dimension " + std::to_string(k) +
                             " exceeds the enumeration limit " + std::to_string(kMaxSubspaceDim));
    }
    const Eigen::MatrixXd basis = sd.vectors.leftCols(k);

    detail::BestSet best;
    auto any = [](std::int64_t, int) { return true; };
    std::vector<int> coeff(static_cast<std::size_t>(k), -1);
    // Odometer over {-1, 0, 1}^k; keep directions whose first non-zero entry is +1.
    while (true) {
        int pos = 0;
        while (pos < k && coeff[pos] == 1) {
            coeff[pos] = -1;
            ++pos;
        }
        if (pos == k) {
            break;
        }
        ++coeff[pos];
        auto lead = std::find_if(coeff.begin(), coeff.end(), [](int c) { return c != 0; });
        if (lead == coeff.end() || *lead != 1) {
            continue;
        }
        Eigen::VectorXd c(k);
        for (int i = 0; i < k; ++i) {
            c[i] = coeff[i];
        }
        const Eigen::VectorXd x = basis * c;
        for (bool desc : {true, false}) {
            detail::sweep_prefixes(view, detail::sweep_order(x, desc), w.lo, w.hi, best, any);
        }
    }
    return detail::finish(view, best, SseMethod::SubspaceEnumeration);
}

/// High-threshold-rank extractor: a small set with expansion at most p.extract_phi_budget.
///
/// Sweeps every eigenvector with |lambda| >= p.tau_extract in both directions over
/// prefixes of size <= ceil(r^p.size_cap_exponent) and returns the qualifying prefix with
/// the smallest expansion, then smallest size, then smallest node ids.
inline SseResult sse_high_rank_extract(const ResidualView& view, const ParamProfile& p)
{
    p.validate();
    const int r = view.order();
    const auto sd = decompose(walk_matrix(view));
    std::vector<double> spectrum(sd.values.data(), sd.values.data() + r);
    const int rank = count_above(spectrum, p.tau_extract);
    if (!is_high_rank(rank, r, p.gamma)) {
        throw PreconditionError("sse_high_rank_extract: threshold rank " + std::to_string(rank) + " < " +
                                std::to_string(r) + "^" + std::to_string(p.gamma));
    }
    const int cap = extraction_size_cap(r, p.size_cap_exponent);
    const double d = view.degree();
    auto within_budget = [&](std::int64_t cut, int size) {
        return static_cast<double>(cut) <= p.extract_phi_budget * d * size + 1e-12;
    };
    detail::BestSet best;
    for (int i = 0; i < r; ++i) {
        if (std::abs(sd.values[i]) < p.tau_extract) {
            continue;
        }
        const Eigen::VectorXd x = sd.vectors.col(i);
        for (bool desc : {true, false}) {
            detail::sweep_prefixes(view, detail::sweep_order(x, desc), 1, cap, best, within_budget);
        }
    }
    if (!best.found) {
        throw SolverFailure("sse_high_rank_extract: no sweep prefix of size <= " + std::to_string(cap) +
                            " has expansion <= " + std::to_string(p.extract_phi_budget));
    }
    return detail::finish(view, best, SseMethod::Sweep);
}

struct ExtractionStep
{
    NodeSet part;
    int residual_order = 0;  // r before the part was removed
    int residual_rank = 0;   // rank at tau_case of that residual
    int size_cap = 0;
    double phi = 0.0;        // expansion of part inside that residual
};

struct ExtractionTrace
{
    std::vector<ExtractionStep> steps;
    /// Nodes never extracted (V'').
    NodeSet residual;
    /// Rank at tau_case of the final residual; 0 when it is empty.
    int final_rank = 0;

    std::vector<NodeSet> parts() const
    {
        std::vector<NodeSet> out;
        for (const auto& s : steps) {
            out.push_back(s.part);
        }
        return out;
    }
};

/// Extraction stopped because the extractor could not produce a set.
class ExtractionFailure : public SolverFailure
{
public:
    ExtractionFailure(const std::string& what, ExtractionTrace partial)
        : SolverFailure(what), partial_(std::move(partial))
    {
    }

    const ExtractionTrace& partial() const noexcept { return partial_; }

private:
    ExtractionTrace partial_;
};

/// Repeatedly removes low-expansion sets while the re-regularized residual
/// has rank_{tau_case} >= r^gamma. At most n iterations.
inline ExtractionTrace extract_partition(const Graph& g, const ParamProfile& p)
{
    p.validate();
    if (!is_regular(g)) {
        throw PreconditionError("extract_partition needs a regular graph");
    }
    const int n = g.num_nodes();
    ExtractionTrace trace;
    std::vector<Node> removed;
    for (int iter = 0; iter <= n; ++iter) {
        if (static_cast<int>(removed.size()) == n) {
            trace.residual = NodeSet(n, {});
            trace.final_rank = 0;
            return trace;
        }
        ResidualView view(g, NodeSet(n, removed));
        const int r = view.order();
        const int rank = threshold_rank(view, p.tau_case);
        if (!is_high_rank(rank, r, p.gamma)) {
            trace.residual = view.surviving_set();
            trace.final_rank = rank;
            return trace;
        }
        SseResult res;
        try {
            res = sse_high_rank_extract(view, p);
        } catch (const Error& e) {
            trace.residual = view.surviving_set();
            trace.final_rank = rank;
            throw ExtractionFailure(std::string("extraction step ") + std::to_string(trace.steps.size() + 1) +
                                        ": " + e.what(),
                                    std::move(trace));
        }
        ExtractionStep step;
        step.part = res.set;
        step.residual_order = r;
        step.residual_rank = rank;
        step.size_cap = extraction_size_cap(r, p.size_cap_exponent);
        step.phi = res.phi;
        trace.steps.push_back(std::move(step));
        removed.insert(removed.end(), res.set.begin(), res.set.end());
    }
    throw SolverFailure("extract_partition exceeded n iterations");
}

} // namespace ssemod
