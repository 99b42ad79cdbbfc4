#pragma once

#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "ssemod/distinguisher.hpp"
#include "ssemod/metrics.hpp"
#include "ssemod/oracle.hpp"
#include "ssemod/profile.hpp"
#include "ssemod/spectral.hpp"
#include "ssemod/sse.hpp"

namespace ssemod {

inline constexpr int kReportSchemaVersion = 1;

using json = nlohmann::ordered_json;

inline json to_json(const NodeSet& s) { return json(s.members()); }

inline json to_json(const Clustering& c)
{
    json parts = json::array();
    for (const auto& p : c.parts()) {
        parts.push_back(to_json(p));
    }
    return parts;
}

inline json to_json(const ParamProfile& p)
{
    return json{{"eps", p.eps},
                {"tau_case", p.tau_case},
                {"tau_extract", p.tau_extract},
                {"gamma", p.gamma},
                {"size_cap_exponent", p.size_cap_exponent},
                {"extract_phi_budget", p.extract_phi_budget},
                {"phi_slack", p.phi_slack},
                {"size_slack_lo", p.size_slack_lo},
                {"size_slack_hi", p.size_slack_hi},
                {"n_exact", p.n_exact},
                {"seed", p.seed}};
}

inline json to_json(const SseResult& r)
{
    return json{{"set", to_json(r.set)},
                {"size", r.set.size()},
                {"phi", r.phi},
                {"cut", r.cut},
                {"method", to_string(r.method)}};
}

inline json to_json(const ExtractionTrace& t)
{
    json steps = json::array();
    for (const auto& s : t.steps) {
        steps.push_back(json{{"part", to_json(s.part)},
                             {"size", s.part.size()},
                             {"residual_order", s.residual_order},
                             {"residual_rank", s.residual_rank},
                             {"size_cap", s.size_cap},
                             {"phi", s.phi}});
    }
    return json{{"steps", steps},
                {"residual", to_json(t.residual)},
                {"residual_size", t.residual.size()},
                {"final_rank", t.final_rank}};
}

inline json to_json(const SpectralSummary& s)
{
    return json{{"tau", s.tau}, {"rank", s.rank}, {"eigenvalues", s.eigenvalues}};
}

inline json to_json(const OracleResult& r)
{
    json j{{"value", r.value}, {"instances_enumerated", r.instances_enumerated}};
    std::visit([&](const auto& w) { j["witness"] = to_json(w); }, r.witness);
    return j;
}

inline json to_json(const BoundChain& c)
{
    return json{{"name", c.name},
                {"mu_lo", c.mu_lo},
                {"mu_hi", c.mu_hi},
                {"density_lo", c.density_lo},
                {"f_lower", c.f_lower},
                {"exceeds_eps", c.exceeds_eps}};
}

inline json to_json(const PaperBoundReport& r)
{
    json quoted = json::array();
    json derived = json::array();
    for (const auto& c : r.quoted) quoted.push_back(to_json(c));
    for (const auto& c : r.derived) derived.push_back(to_json(c));
    return json{{"mu_lo", r.mu_lo},
                {"dstar_lower_bound", r.dstar_lower_bound},
                {"quoted", quoted},
                {"derived", derived},
                {"all_exceed_eps", r.all_exceed_eps}};
}

inline json to_json(const Candidate& c)
{
    return json{{"source", c.source},
                {"target", c.target},
                {"paired_guesses", c.paired_guesses},
                {"size", c.set.size()},
                {"mu", c.mu},
                {"phi", c.phi},
                {"density", c.density},
                {"f", c.f},
                {"set", to_json(c.set)}};
}

/// Report body; `timings` is the only field that varies between identical runs.
inline json to_json(const DistinguisherReport& r)
{
    json j;
    j["decision"] = to_string(r.decision);
    if (r.certificate) {
        j["certificate"] = json{{"side_a", to_json(r.certificate->partition.side_a())},
                                {"side_b", to_json(r.certificate->partition.side_b())},
                                {"f_value", r.certificate->f_value}};
    } else {
        j["certificate"] = nullptr;
    }
    j["best_f"] = r.best_f;
    j["graph"] = json{{"n", r.n}, {"degree", r.degree}, {"edges", r.edges}};
    j["case"] = r.case_taken;
    j["rank_used"] = r.rank_used;
    j["rank_threshold"] = r.rank_threshold;
    j["grid_size"] = r.grid_size;
    j["guesses_kept"] = r.guesses_kept;
    j["extraction"] = r.extraction ? to_json(*r.extraction) : json(nullptr);
    j["promise"] = r.promise;
    j["oracle_opt"] = r.oracle_opt ? json(*r.oracle_opt) : json(nullptr);
    j["notes"] = r.notes;
    json trace = json::array();
    for (const auto& c : r.trace) {
        trace.push_back(to_json(c));
    }
    j["trace"] = trace;
    j["timings"] = json{{"rank_ms", r.timings.rank_ms},
                        {"extraction_ms", r.timings.extraction_ms},
                        {"candidates_ms", r.timings.candidates_ms},
                        {"total_ms", r.timings.total_ms}};
    return j;
}

/// Wraps a subcommand body with the schema version and run manifest.
inline json make_report(const json& manifest, const json& body)
{
    json j{{"schema_version", kReportSchemaVersion}, {"manifest", manifest}};
    for (auto it = body.begin(); it != body.end(); ++it) {
        j[it.key()] = it.value();
    }
    return j;
}

/// Per-candidate trace as CSV, one row per evaluated two-partition.
inline std::string trace_csv(const DistinguisherReport& r)
{
    std::ostringstream os;
    os.precision(17);
    os << "source,target,paired_guesses,size,mu,phi,density,f\n";
    for (const auto& c : r.trace) {
        os << c.source << ',' << c.target << ',' << c.paired_guesses << ',' << c.set.size() << ',' << c.mu << ','
           << c.phi << ',' << c.density << ',' << c.f << '\n';
    }
    return os.str();
}

} // namespace ssemod
