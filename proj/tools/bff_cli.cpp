// Command-line front end: solve BFF / O2BFF / Qr-BFF instances, run the
// exact oracles and the DCS baseline, generate synthetic histories, and run
// experiment grids.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 oracle budget error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bff/eval.hpp"
#include "bff/graph.hpp"
#include "bff/o2bff.hpp"
#include "bff/oracle.hpp"
#include "bff/peeling.hpp"
#include "bff/synthetic.hpp"

namespace {

using namespace bff;

struct OutputOptions {
    std::string format = "text";  // text | tabular
    std::string out_path;         // empty: stdout
};

void warn_unguaranteed_pairing(AggregateKind kind, const Scorer& scorer) {
    const bool guaranteed = (kind == AggregateKind::mm && scorer.kind == ScorerKind::min_degree) ||
                            (kind == AggregateKind::aa && scorer.kind == ScorerKind::avg_degree);
    if (!guaranteed)
        std::cerr << "warning: scorer '" << scorer.name() << "' has no optimality/approximation "
                  << "guarantee for density '" << to_string(kind) << "'\n";
}

std::vector<std::string> sorted_labels(const GraphHistory& h, const std::vector<NodeId>& nodes) {
    std::vector<std::string> out;
    out.reserve(nodes.size());
    for (NodeId v : nodes) out.push_back(h.label(v));
    std::sort(out.begin(), out.end());
    return out;
}

struct SolutionDoc {
    std::string solver;
    AggregateKind kind = AggregateKind::mm;
    Rational score;
    std::vector<std::string> labels;           // sorted
    std::optional<std::vector<int>> snapshots; // o2bff only
    std::vector<std::pair<std::string, std::string>> extra;  // metadata lines
};

void render(const SolutionDoc& doc, std::ostream& os, const std::string& format) {
    auto join = [](const auto& xs) {
        std::ostringstream ss;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) ss << ' ';
            ss << xs[i];
        }
        return ss.str();
    };
    if (format == "tabular") {
        os << "solver\tdensity\tscore\tscore_decimal\tsize\tnodes";
        if (doc.snapshots) os << "\tsnapshots";
        for (const auto& [k, v] : doc.extra) os << '\t' << k;
        os << '\n';
        os << doc.solver << '\t' << to_string(doc.kind) << '\t' << doc.score.to_string() << '\t'
           << doc.score.to_decimal() << '\t' << doc.labels.size() << '\t' << join(doc.labels);
        if (doc.snapshots) os << '\t' << join(*doc.snapshots);
        for (const auto& [k, v] : doc.extra) os << '\t' << v;
        os << '\n';
        return;
    }
    os << "solver: " << doc.solver << '\n';
    os << "density: " << to_string(doc.kind) << '\n';
    os << "score: " << doc.score.to_string() << '\n';
    os << "score_decimal: " << doc.score.to_decimal() << '\n';
    os << "nodes: " << join(doc.labels) << '\n';
    if (doc.snapshots) os << "snapshots: " << join(*doc.snapshots) << '\n';
    for (const auto& [k, v] : doc.extra) os << k << ": " << v << '\n';
}

void emit(const SolutionDoc& doc, const OutputOptions& out) {
    if (out.out_path.empty()) {
        render(doc, std::cout, out.format);
        return;
    }
    std::ofstream os(out.out_path);
    if (!os) throw ParseError("cannot write '" + out.out_path + "'");
    render(doc, os, out.format);
}

// Recomputed aggregate density must equal the printed score.
void self_check(const GraphHistory& h, AggregateKind kind, const std::vector<NodeId>& nodes,
                const Rational& score) {
    if (aggregate_density(kind, nodes, h) != score)
        throw std::logic_error("self-check failed: recomputed density differs from solver score");
}

std::vector<NodeId> resolve_labels(const GraphHistory& h, const std::vector<std::string>& labels) {
    std::vector<NodeId> ids;
    for (const auto& want : labels) {
        NodeId found = -1;
        for (NodeId v = 0; v < h.n; ++v)
            if (h.label(v) == want) {
                found = v;
                break;
            }
        if (found < 0) throw DomainError("query node '" + want + "' is not in the node set");
        ids.push_back(found);
    }
    return ids;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"temporal dense-subgraph mining toolkit"};
    app.require_subcommand(1);

    std::string input, density = "mm", scorer_name, solver_name = "itr-k", format = "text";
    std::string out_path, spec_path, grid_path, out_dir;
    std::vector<std::string> query_labels;
    int k = -1, max_iters = 100, budget_nodes = 20;
    std::uint64_t seed = 0;
    bool restrict_component = false;

    auto add_output_flags = [&](CLI::App* cmd) {
        cmd->add_option("--format", format, "output format (text|tabular)")
            ->check(CLI::IsMember({"text", "tabular"}));
        cmd->add_option("--out", out_path, "write the solution to this file instead of stdout");
    };

    auto* bff_cmd = app.add_subcommand("bff", "solve the BFF problem with greedy peeling");
    bff_cmd->add_option("--input", input, "edge-list file")->required();
    bff_cmd->add_option("--density", density, "aggregate density (mm|ma|am|aa)")->required();
    bff_cmd->add_option("--scorer", scorer_name, "peel scorer (min|avg|greedy); default per density");
    add_output_flags(bff_cmd);

    auto* o2_cmd = app.add_subcommand("o2bff", "solve the O2BFF problem (choose k snapshots)");
    o2_cmd->add_option("--input", input)->required();
    o2_cmd->add_option("--density", density)->required();
    o2_cmd->add_option("--k", k, "number of snapshots to select")->required();
    o2_cmd->add_option("--solver", solver_name, "itr-r|itr-c|itr-k|inc-d|inc-o")->required();
    o2_cmd->add_option("--scorer", scorer_name);
    o2_cmd->add_option("--seed", seed, "seed for randomized initializations");
    o2_cmd->add_option("--max-iters", max_iters);
    add_output_flags(o2_cmd);

    auto* qr_cmd = app.add_subcommand("qr-bff", "BFF constrained to contain seed query nodes");
    qr_cmd->add_option("--input", input)->required();
    qr_cmd->add_option("--density", density)->required();
    qr_cmd->add_option("--scorer", scorer_name, "min|avg (default per density)");
    qr_cmd->add_option("--query", query_labels, "seed node labels")->required()->expected(-1);
    qr_cmd->add_flag("--restrict-component", restrict_component,
                     "solve on the union-graph component of the query nodes");
    add_output_flags(qr_cmd);

    auto* dcs_cmd = app.add_subcommand("dcs", "DCS baseline (density fixed to ma)");
    dcs_cmd->add_option("--input", input)->required();
    add_output_flags(dcs_cmd);

    auto* oracle_cmd = app.add_subcommand("oracle", "exact brute-force optimum");
    oracle_cmd->add_option("--input", input)->required();
    oracle_cmd->add_option("--density", density)->required();
    oracle_cmd->add_option("--k", k, "solve O2BFF exactly for this k");
    oracle_cmd->add_option("--max-nodes", budget_nodes, "oracle node budget");
    add_output_flags(oracle_cmd);

    auto* gen_cmd = app.add_subcommand("generate", "generate a synthetic history");
    gen_cmd->add_option("--spec", spec_path, "instance spec (JSON)")->required();
    gen_cmd->add_option("--out", out_dir, "output directory")->required();

    auto* eval_cmd = app.add_subcommand("evaluate", "run an experiment grid");
    eval_cmd->add_option("--grid", grid_path, "grid file (JSON)")->required();
    eval_cmd->add_option("--out", out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    OutputOptions out{format, out_path};

    if (bff_cmd->parsed()) {
        const GraphHistory h = load_history_file(input);
        const AggregateKind kind = aggregate_kind_from_string(density);
        const Scorer scorer =
            scorer_name.empty() ? default_scorer(kind) : scorer_from_string(scorer_name, kind);
        warn_unguaranteed_pairing(kind, scorer);
        const Solution sol = find_bff(h, kind, scorer);
        self_check(h, kind, sol.nodes, sol.score);
        SolutionDoc doc{sol.solver, kind, sol.score, sorted_labels(h, sol.nodes), std::nullopt, {}};
        if (sol.degenerate) doc.extra.emplace_back("degenerate", "true");
        emit(doc, out);
        return 0;
    }

    if (o2_cmd->parsed()) {
        const GraphHistory h = load_history_file(input);
        const AggregateKind kind = aggregate_kind_from_string(density);
        O2Options opt;
        if (!scorer_name.empty()) opt.scorer = scorer_from_string(scorer_name, kind);
        opt.seed = seed;
        opt.max_iters = max_iters;
        O2Solution sol;
        if (solver_name == "itr-r")
            sol = o2bff_iterative(h, kind, k, InitKind::random_k, opt);
        else if (solver_name == "itr-c")
            sol = o2bff_iterative(h, kind, k, InitKind::contiguous, opt);
        else if (solver_name == "itr-k")
            sol = o2bff_iterative(h, kind, k, InitKind::at_least_k, opt);
        else if (solver_name == "inc-d")
            sol = o2bff_incremental_density(h, kind, k, opt);
        else if (solver_name == "inc-o")
            sol = o2bff_incremental_overlap(h, kind, k, opt);
        else
            throw CLI::ValidationError("--solver", "expected itr-r|itr-c|itr-k|inc-d|inc-o");
        self_check(restrict_snapshots(h, sol.snapshots), kind, sol.nodes, sol.score);
        SolutionDoc doc{sol.solver, kind, sol.score, sorted_labels(h, sol.nodes), sol.snapshots, {}};
        doc.extra.emplace_back("iterations", std::to_string(sol.iterations));
        if (sol.fallback_used) doc.extra.emplace_back("fallback", "random-init");
        emit(doc, out);
        return 0;
    }

    if (qr_cmd->parsed()) {
        GraphHistory h = load_history_file(input);
        const AggregateKind kind = aggregate_kind_from_string(density);
        Scorer scorer =
            scorer_name.empty() ? default_scorer(kind) : scorer_from_string(scorer_name, kind);
        if (scorer.kind == ScorerKind::greedy)
            throw CLI::ValidationError("--scorer", "qr-bff supports min|avg");
        std::vector<NodeId> query = resolve_labels(h, query_labels);
        SolutionDoc doc;
        if (restrict_component) {
            Subhistory sub = restrict_to_component(h, query);
            std::vector<NodeId> sub_query;
            for (NodeId q : query) {
                const auto it =
                    std::lower_bound(sub.original_ids.begin(), sub.original_ids.end(), q);
                sub_query.push_back(static_cast<NodeId>(it - sub.original_ids.begin()));
            }
            const Solution sol = find_bff_query(sub.history, kind, scorer, sub_query);
            self_check(sub.history, kind, sol.nodes, sol.score);
            doc = {sol.solver, kind, sol.score, sorted_labels(sub.history, sol.nodes),
                   std::nullopt, {}};
            doc.extra.emplace_back("connectivity", "union-graph-components");
        } else {
            const Solution sol = find_bff_query(h, kind, scorer, query);
            self_check(h, kind, sol.nodes, sol.score);
            doc = {sol.solver, kind, sol.score, sorted_labels(h, sol.nodes), std::nullopt, {}};
        }
        emit(doc, out);
        return 0;
    }

    if (dcs_cmd->parsed()) {
        const GraphHistory h = load_history_file(input);
        const Solution sol = dcs_baseline(h);
        self_check(h, AggregateKind::ma, sol.nodes, sol.score);
        SolutionDoc doc{sol.solver, AggregateKind::ma, sol.score, sorted_labels(h, sol.nodes),
                        std::nullopt, {}};
        emit(doc, out);
        return 0;
    }

    if (oracle_cmd->parsed()) {
        const GraphHistory h = load_history_file(input);
        const AggregateKind kind = aggregate_kind_from_string(density);
        OracleBudget budget;
        budget.max_nodes = budget_nodes;
        SolutionDoc doc;
        if (k >= 0) {
            const O2Solution sol = brute_force_o2bff(h, kind, k, budget);
            self_check(restrict_snapshots(h, sol.snapshots), kind, sol.nodes, sol.score);
            doc = {sol.solver, kind, sol.score, sorted_labels(h, sol.nodes), sol.snapshots, {}};
        } else {
            const Solution sol = brute_force_bff(h, kind, budget);
            self_check(h, kind, sol.nodes, sol.score);
            doc = {sol.solver, kind, sol.score, sorted_labels(h, sol.nodes), std::nullopt, {}};
        }
        emit(doc, out);
        return 0;
    }

    if (gen_cmd->parsed()) {
        std::ifstream in(spec_path);
        if (!in) throw ParseError("cannot open '" + spec_path + "'");
        nlohmann::json j;
        in >> j;
        const InstanceSpec spec = parse_instance_spec(j);
        const GeneratedInstance inst = generate_history(spec);
        std::filesystem::create_directories(out_dir);
        write_instance_files(spec, inst, out_dir);
        std::cout << "history: " << out_dir << "/history.txt\n"
                  << "truth: " << out_dir << "/truth.txt\n"
                  << "n: " << inst.history.n << "\ntau: " << inst.history.tau() << "\n"
                  << "edges: " << inst.history.total_edges() << "\n";
        return 0;
    }

    if (eval_cmd->parsed()) {
        std::ifstream in(grid_path);
        if (!in) throw ParseError("cannot open '" + grid_path + "'");
        nlohmann::json j;
        in >> j;
        const Grid grid = parse_grid(j);
        std::vector<MaterializeTiming> timings;
        const std::vector<ReportRow> rows = run_experiment(grid, &timings);
        std::filesystem::create_directories(out_dir);
        {
            std::ofstream rep(out_dir + "/report.tsv");
            write_report(rows, rep);
        }
        {
            std::ofstream mat(out_dir + "/materialize.tsv");
            mat << "instance\tmaterialize_ms\n";
            for (const auto& t : timings) mat << t.instance << '\t' << t.ms << '\n';
        }
        write_series_files(rows, out_dir, grid.name);
        int failures = 0;
        for (const auto& r : rows)
            if (!r.ok) {
                ++failures;
                std::cerr << "row error (" << r.instance << ", " << r.solver << "): " << r.error
                          << "\n";
            }
        std::cout << "rows: " << rows.size() << "\nfailed: " << failures << "\nreport: " << out_dir
                  << "/report.tsv\n";
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const bff::BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
