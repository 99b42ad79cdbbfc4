#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "ssemod/error.hpp"
#include "ssemod/graph.hpp"

namespace ssemod {

/// Every numeric constant of the distinguisher and the two SSE solvers.
struct ParamProfile
{
    double eps = 0.05;               // promise gap
    double tau_case = 0.95;          // case-split threshold
    double tau_extract = 0.95;       // extraction-loop threshold
    double gamma = 0.5;              // rank exponent: high rank means rank >= r^gamma
    double size_cap_exponent = 0.9;  // extracted sets have |S| <= ceil(r^exp)
    double extract_phi_budget = 0.1; // extracted sets have expansion <= budget
    double phi_slack = 0.08;         // low-rank solver: phi(S) <= phi* + slack
    double size_slack_lo = 0.92;
    double size_slack_hi = 1.08;
    int n_exact = 20;                // exhaustive search up to this many nodes
    std::uint64_t seed = 0;

    /// Asymptotic-regime constants. Rank and size conditions are
    /// vacuous at any practical n.
    static ParamProfile paper()
    {
        ParamProfile p;
        p.eps = 1e-6;
        p.tau_case = 1.0 - 1e-6;
        p.tau_extract = 1.0 - 1e-5;
        p.gamma = 1e-1;
        p.size_cap_exponent = 1.0 - 1e-3;
        p.extract_phi_budget = 1e-2;
        return p;
    }

    /// Scaled constants that make every case reachable at n in the hundreds.
    static ParamProfile desk() { return ParamProfile{}; }

    void validate() const
    {
        auto fail = [](const std::string& why) { throw PreconditionError("invalid profile: " + why); };
        if (!(eps > 0.0 && eps < 0.5)) fail("eps must lie in (0, 1/2)");
        if (!(tau_case >= 0.0 && tau_case < 1.0)) fail("tau_case must lie in [0, 1)");
        if (!(tau_extract >= 0.0 && tau_extract < 1.0)) fail("tau_extract must lie in [0, 1)");
        if (!(gamma > 0.0 && gamma < 1.0)) fail("gamma must lie in (0, 1)");
        if (!(size_cap_exponent > 0.0 && size_cap_exponent <= 1.0)) fail("size_cap_exponent must lie in (0, 1]");
        if (!(extract_phi_budget >= 0.0 && extract_phi_budget <= 1.0)) fail("extract_phi_budget must lie in [0, 1]");
        if (!(phi_slack >= 0.0)) fail("phi_slack must be non-negative");
        if (!(size_slack_lo > 0.0 && size_slack_lo < 1.0 && size_slack_hi > 1.0))
            fail("need 0 < size_slack_lo < 1 < size_slack_hi");
        if (n_exact < 0 || n_exact > 30) fail("n_exact must lie in [0, 30]");
    }

    friend bool operator==(const ParamProfile&, const ParamProfile&) = default;
};

namespace detail {

inline double parse_double(std::size_t line, std::string_view key, std::string_view v)
{
    std::string s(v);
    std::size_t used = 0;
    double out = 0.0;
    try {
        out = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) {
        throw ParseError(line, "value of '" + std::string(key) + "' is not a number: '" + s + "'");
    }
    return out;
}

template <typename Int>
Int parse_integer(std::size_t line, std::string_view key, std::string_view v)
{
    Int out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw ParseError(line, "value of '" + std::string(key) + "' is not an integer: '" + std::string(v) + "'");
    }
    return out;
}

} // namespace detail

/// Parses "key=value" lines. Keys not given keep the desk default; unknown keys are errors.
inline ParamProfile parse_profile(std::string_view text)
{
    ParamProfile p = ParamProfile::desk();
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(lineno, "expected key=value");
        }
        auto key = detail::trim(line.substr(0, eq));
        auto val = detail::trim(line.substr(eq + 1));
        if (key == "eps") p.eps = detail::parse_double(lineno, key, val);
        else if (key == "tau_case") p.tau_case = detail::parse_double(lineno, key, val);
        else if (key == "tau_extract") p.tau_extract = detail::parse_double(lineno, key, val);
        else if (key == "gamma") p.gamma = detail::parse_double(lineno, key, val);
        else if (key == "size_cap_exponent") p.size_cap_exponent = detail::parse_double(lineno, key, val);
        else if (key == "extract_phi_budget") p.extract_phi_budget = detail::parse_double(lineno, key, val);
        else if (key == "phi_slack") p.phi_slack = detail::parse_double(lineno, key, val);
        else if (key == "size_slack_lo") p.size_slack_lo = detail::parse_double(lineno, key, val);
        else if (key == "size_slack_hi") p.size_slack_hi = detail::parse_double(lineno, key, val);
        else if (key == "n_exact") p.n_exact = detail::parse_integer<int>(lineno, key, val);
        else if (key == "seed") p.seed = detail::parse_integer<std::uint64_t>(lineno, key, val);
        else throw ParseError(lineno, "unknown profile key '" + std::string(key) + "'");
    }
    p.validate();
    return p;
}

inline std::string to_profile_text(const ParamProfile& p)
{
    // Shortest representation that parses back to the same double.
    auto num = [](double v) {
        std::array<char, 32> buf{};
        auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
        return std::string(buf.data(), res.ptr);
    };
    std::ostringstream os;
    os << "eps=" << num(p.eps) << '\n'
       << "tau_case=" << num(p.tau_case) << '\n'
       << "tau_extract=" << num(p.tau_extract) << '\n'
       << "gamma=" << num(p.gamma) << '\n'
       << "size_cap_exponent=" << num(p.size_cap_exponent) << '\n'
       << "extract_phi_budget=" << num(p.extract_phi_budget) << '\n'
       << "phi_slack=" << num(p.phi_slack) << '\n'
       << "size_slack_lo=" << num(p.size_slack_lo) << '\n'
       << "size_slack_hi=" << num(p.size_slack_hi) << '\n'
       << "n_exact=" << p.n_exact << '\n'
       << "seed=" << p.seed << '\n';
    return os.str();
}

} // namespace ssemod
