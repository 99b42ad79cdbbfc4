#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ssemod/ssemod.hpp"

namespace ssemod::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitComputation = 2;

/// Bad flags, unreadable or malformed input files.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot write '" + path + "'");
    }
    f << text;
}

inline Graph read_graph(const std::string& path)
{
    try {
        return load_graph(read_file(path));
    } catch (const ParseError& e) {
        throw UsageError(path + ": " + e.what());
    }
}

/// One part per line, space-separated node ids.
inline Clustering read_partition(const std::string& path, int n)
{
    const auto text = read_file(path);
    std::vector<NodeSet> parts;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        std::vector<Node> members;
        for (auto tok : detail::split_ws(t)) {
            long long v = 0;
            if (!detail::parse_int(tok, v) || v < 0 || v >= n) {
                throw UsageError(path + ": line " + std::to_string(lineno) + ": bad node id '" +
                                 std::string(tok) + "'");
            }
            members.push_back(static_cast<Node>(v));
        }
        parts.emplace_back(n, std::move(members));
    }
    try {
        return Clustering(n, std::move(parts));
    } catch (const PreconditionError& e) {
        throw UsageError(path + ": " + e.what());
    }
}

struct ProfileChoice
{
    std::string path;
    std::string preset = "desk";

    ParamProfile load() const
    {
        if (!path.empty()) {
            try {
                return parse_profile(read_file(path));
            } catch (const ParseError& e) {
                throw UsageError(path + ": " + e.what());
            } catch (const PreconditionError& e) {
                throw UsageError(path + ": " + e.what());
            }
        }
        if (preset == "desk") {
            return ParamProfile::desk();
        }
        if (preset == "paper") {
            return ParamProfile::paper();
        }
        throw UsageError("unknown preset '" + preset + "' (expected desk or paper)");
    }

    json manifest_entry() const { return path.empty() ? json("preset:" + preset) : json(path); }
};

inline void add_profile_flags(CLI::App* cmd, ProfileChoice& pc)
{
    auto* file = cmd->add_option("--profile", pc.path, "Profile file (key=value lines)");
    cmd->add_option("--preset", pc.preset, "Built-in profile when no file is given: desk or paper")
        ->excludes(file);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Runs the command line; returns the process exit code.
inline int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Modularity clustering via small-set expansion"};
    app.require_subcommand(1);

    std::string graph_path;
    std::string out_path;
    ProfileChoice profile;

    // gen
    auto* gen = app.add_subcommand("gen", "Generate an instance family as an edge list");
    std::string family;
    int k = 0, s = 0, n = 0, d = 0;
    std::uint64_t seed = 0;
    gen->add_option("--family", family, "clique_union | matched_clique_union | random_regular | complement_3regular")
        ->required();
    gen->add_option("--k", k, "Number of cliques");
    gen->add_option("--s", s, "Clique size");
    gen->add_option("--n", n, "Node count");
    gen->add_option("--d", d, "Degree");
    gen->add_option("--seed", seed, "Seed");
    gen->add_option("--out", out_path, "Output file (default stdout)");

    // metrics
    auto* metrics = app.add_subcommand("metrics", "Set and clustering metrics of a partition");
    std::string partition_path;
    metrics->add_option("--graph", graph_path)->required();
    metrics->add_option("--partition", partition_path, "One part per line")->required();
    metrics->add_option("--out", out_path);

    // rank
    auto* rank = app.add_subcommand("rank", "Walk-matrix spectrum and threshold rank");
    double tau = 0.5;
    rank->add_option("--graph", graph_path)->required();
    rank->add_option("--tau", tau, "Threshold in [0, 1)")->required();
    rank->add_option("--out", out_path);

    // sse
    auto* sse = app.add_subcommand("sse", "Small-set expansion: low-rank solver, extractor or exact band");
    int target = 0;
    std::vector<int> band;
    bool extract_one = false;
    sse->add_option("--graph", graph_path)->required();
    auto* target_opt = sse->add_option("--target", target, "Target size for the low-rank solver");
    auto* band_opt = sse->add_option("--band", band, "Exact minimum expansion over sizes LO HI")->expected(2);
    auto* extract_opt = sse->add_flag("--extract", extract_one, "Run the high-rank extractor once");
    target_opt->excludes(band_opt)->excludes(extract_opt);
    band_opt->excludes(extract_opt);
    add_profile_flags(sse, profile);
    sse->add_option("--out", out_path);

    // extract
    auto* extract = app.add_subcommand("extract", "Repeated high-rank extraction");
    extract->add_option("--graph", graph_path)->required();
    add_profile_flags(extract, profile);
    extract->add_option("--out", out_path);

    // distinguish
    auto* dist = app.add_subcommand("distinguish", "Decide HIGH (OPT >= 1-eps) vs LOW (OPT <= eps)");
    std::string csv_path;
    unsigned threads = 1;
    bool check_promise = false;
    dist->add_option("--graph", graph_path)->required();
    add_profile_flags(dist, profile);
    dist->add_option("--out", out_path);
    dist->add_option("--trace-csv", csv_path, "Write the per-candidate trace as CSV");
    dist->add_option("--threads", threads, "Worker cap")->check(CLI::PositiveNumber);
    dist->add_flag("--check-promise", check_promise, "Classify the instance with the exact oracle (n <= 13)");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Exact optima by enumeration");
    bool want_opt = false, want_opt2 = false;
    std::vector<int> sse_band;
    oracle->add_option("--graph", graph_path)->required();
    oracle->add_flag("--opt", want_opt, "OPT over all partitions (n <= 13)");
    oracle->add_flag("--opt2", want_opt2, "OPT over at most two parts (n <= 26)");
    oracle->add_option("--sse", sse_band, "Minimum expansion over sizes LO HI (n <= 22)")->expected(2);
    oracle->add_option("--out", out_path);

    // verify-bounds
    auto* bounds = app.add_subcommand("verify-bounds", "Recompute the case-closing lower bounds on f");
    add_profile_flags(bounds, profile);
    bounds->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    auto manifest = [&](const char* sub) {
        json m{{"subcommand", sub}};
        if (!graph_path.empty()) m["graph"] = graph_path;
        m["output"] = out_path.empty() ? json("-") : json(out_path);
        return m;
    };

    try {
        if (*gen) {
            Graph g;
            std::vector<std::string> header{"family=" + family};
            if (family == "clique_union") {
                g = clique_union(k, s);
                header.push_back("k=" + std::to_string(k) + " s=" + std::to_string(s));
            } else if (family == "matched_clique_union") {
                g = matched_clique_union(k, s, seed);
                header.push_back("k=" + std::to_string(k) + " s=" + std::to_string(s));
            } else if (family == "random_regular") {
                g = random_regular(n, d, seed);
                header.push_back("n=" + std::to_string(n) + " d=" + std::to_string(d));
            } else if (family == "complement_3regular") {
                g = complement_3regular(n, seed);
                header.push_back("n=" + std::to_string(n));
            } else {
                throw UsageError("unknown family '" + family + "'");
            }
            header.push_back("seed=" + std::to_string(seed));
            write_output(out_path, to_edge_list(g, header), out);
            return kExitOk;
        }

        if (*metrics) {
            const auto g = read_graph(graph_path);
            const auto c = read_partition(partition_path, g.num_nodes());
            const auto cm = clustering_metrics(g, c);
            json parts = json::array();
            for (int i = 0; i < c.size(); ++i) {
                const auto& p = c.parts()[i];
                json pj{{"set", to_json(p)},
                        {"internal_edges", cm.internal_edges[i]},
                        {"degree_sum", cm.degree_sums[i]},
                        {"modularity", modularity_set(g, p)}};
                if (p.size() < g.num_nodes() && degree_sum(g, p) > 0) {
                    const auto sm = set_metrics(g, p);
                    pj["mu"] = sm.mu;
                    pj["phi"] = sm.phi;
                    pj["density"] = sm.density;
                } else {
                    pj["mu"] = pj["phi"] = pj["density"] = nullptr;
                }
                parts.push_back(pj);
            }
            json body{{"parts", parts},
                      {"cross_edges", cm.cross_edges},
                      {"modularity", cm.modularity}};
            if (c.size() == 2) {
                if (auto reg = is_regular(g); reg && *reg > 0) {
                    const auto& small = c.parts()[0].size() <= c.parts()[1].size() ? c.parts()[0] : c.parts()[1];
                    body["two_cluster_objective"] = two_cluster_objective(measure(g, small), density(g, small));
                }
            }
            auto m = manifest("metrics");
            m["partition"] = partition_path;
            write_output(out_path, dump(make_report(m, body)), out);
            return kExitOk;
        }

        if (*rank) {
            const auto g = read_graph(graph_path);
            const auto summary = spectral_summary(ResidualView::fresh(g), tau);
            auto m = manifest("rank");
            m["tau"] = tau;
            write_output(out_path, dump(make_report(m, to_json(summary))), out);
            return kExitOk;
        }

        if (*sse) {
            const auto g = read_graph(graph_path);
            auto m = manifest("sse");
            json body;
            if (!band.empty()) {
                body = to_json(sse_exact(g, band[0], band[1]));
                m["band"] = band;
            } else {
                const auto p = profile.load();
                m["profile"] = profile.manifest_entry();
                m["seed"] = p.seed;
                const auto view = ResidualView::fresh(g);
                if (extract_one) {
                    body = to_json(sse_high_rank_extract(view, p));
                } else if (*target_opt) {
                    body = to_json(sse_low_rank(view, target, p));
                    m["target"] = target;
                } else {
                    throw UsageError("sse needs one of --target, --band or --extract");
                }
            }
            write_output(out_path, dump(make_report(m, body)), out);
            return kExitOk;
        }

        if (*extract) {
            const auto g = read_graph(graph_path);
            const auto p = profile.load();
            auto m = manifest("extract");
            m["profile"] = profile.manifest_entry();
            m["seed"] = p.seed;
            try {
                write_output(out_path, dump(make_report(m, to_json(extract_partition(g, p)))), out);
            } catch (const ExtractionFailure& e) {
                json body{{"error", e.what()}, {"partial", to_json(e.partial())}};
                write_output(out_path, dump(make_report(m, body)), out);
                throw;
            }
            return kExitOk;
        }

        if (*dist) {
            const auto g = read_graph(graph_path);
            const auto p = profile.load();
            auto m = manifest("distinguish");
            m["profile"] = profile.manifest_entry();
            m["seed"] = p.seed;
            json body;
            try {
                const auto rep = run(g, p, RunOptions{threads, check_promise});
                body = to_json(rep);
                body["profile_values"] = to_json(p);
                if (!csv_path.empty()) {
                    write_output(csv_path, trace_csv(rep), out);
                }
            } catch (const DistinguisherFailure& e) {
                body = json{{"error", e.what()}, {"partial", to_json(e.partial())}};
                write_output(out_path, dump(make_report(m, body)), out);
                throw;
            }
            write_output(out_path, dump(make_report(m, body)), out);
            return kExitOk;
        }

        if (*oracle) {
            const auto g = read_graph(graph_path);
            const bool all = !want_opt && !want_opt2 && sse_band.empty();
            json body;
            if (want_opt || (all && g.num_nodes() <= kOptExactMaxNodes)) {
                body["opt"] = to_json(opt_exact(g));
            }
            if (want_opt2 || (all && g.num_nodes() <= kOpt2ExactMaxNodes)) {
                const auto r = opt2_exact(g);
                auto j = to_json(static_cast<const OracleResult&>(r));
                j["best_split"] = r.best_split;
                j["best_split_side"] = to_json(r.best_split_side);
                body["opt2"] = j;
            }
            if (!sse_band.empty()) {
                body["sse"] = to_json(sse_exact(g, sse_band[0], sse_band[1]));
            }
            if (body.empty()) {
                throw BudgetExceeded("graph too large for every exact oracle (n=" + std::to_string(g.num_nodes()) +
                                     ")");
            }
            write_output(out_path, dump(make_report(manifest("oracle"), body)), out);
            return kExitOk;
        }

        if (*bounds) {
            const auto p = profile.load();
            auto m = manifest("verify-bounds");
            m["profile"] = profile.manifest_entry();
            const auto r = verify_paper_bounds(p);
            write_output(out_path, dump(make_report(m, to_json(r))), out);
            if (!r.all_exceed_eps) {
                err << "error: some case bound does not exceed eps=" << p.eps << "\n";
                return kExitComputation;
            }
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitComputation;
    }
    return kExitUsage;
}

} // namespace ssemod::cli
