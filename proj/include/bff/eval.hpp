#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "bff/density.hpp"
#include "bff/errors.hpp"
#include "bff/graph.hpp"
#include "bff/o2bff.hpp"
#include "bff/oracle.hpp"
#include "bff/peeling.hpp"
#include "bff/synthetic.hpp"

namespace bff {

// F = 2PR/(P+R) against a planted ground truth; computed as 2|A∩B|/(|A|+|B|)
// so the arithmetic is exact before the final division.
inline double f_measure(const std::vector<NodeId>& found, const std::vector<NodeId>& truth) {
    if (truth.empty()) throw DomainError("f_measure with empty ground truth");
    if (found.empty()) return 0.0;
    std::vector<NodeId> a(found), b(truth);
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0, inter = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            ++i;
        else if (a[i] > b[j])
            ++j;
        else {
            ++inter;
            ++i;
            ++j;
        }
    }
    return 2.0 * static_cast<double>(inter) / static_cast<double>(a.size() + b.size());
}

inline double median(std::vector<double> xs) {
    if (xs.empty()) throw DomainError("median of empty sample");
    std::sort(xs.begin(), xs.end());
    const std::size_t m = xs.size() / 2;
    return xs.size() % 2 == 1 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

// ---- spec / grid file parsing ------------------------------------------

inline InstanceSpec parse_instance_spec(const nlohmann::json& j) {
    InstanceSpec spec;
    spec.n = j.at("n").get<int>();
    spec.tau = j.at("tau").get<int>();
    spec.p_forward = j.value("p_forward", 0.35);
    spec.p_backward = j.value("p_backward", 0.35);
    spec.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("plants")) {
        for (const auto& pj : j.at("plants")) {
            PlantSpec p;
            p.size = pj.at("size").get<int>();
            p.edge_prob = pj.at("edge_prob").get<double>();
            if (pj.contains("snapshots") && pj.at("snapshots").is_array())
                p.snapshots = pj.at("snapshots").get<std::vector<int>>();
            if (pj.contains("nodes")) p.nodes = pj.at("nodes").get<std::vector<NodeId>>();
            p.choice_seed = pj.value("seed", std::uint64_t{0});
            spec.plants.push_back(std::move(p));
        }
    }
    spec.validate();
    return spec;
}

// Writes history.txt (edge list with generator metadata comments) and
// truth.txt (one planted set per line: snapshot indices, then node labels).
inline void write_instance_files(const InstanceSpec& spec, const GeneratedInstance& inst,
                                 const std::string& dir) {
    {
        std::ofstream out(dir + "/history.txt");
        if (!out) throw ParseError("cannot write '" + dir + "/history.txt'");
        out << "# generator: forest-fire p_forward=" << spec.p_forward
            << " p_backward=" << spec.p_backward << " plants=" << spec.plants.size() << "\n";
        out << "# rng: mt19937_64+splitmix64 seed=" << spec.seed << "\n";
        save_history(inst.history, out);
    }
    {
        std::ofstream out(dir + "/truth.txt");
        if (!out) throw ParseError("cannot write '" + dir + "/truth.txt'");
        for (std::size_t p = 0; p < inst.ground_truth.size(); ++p) {
            const auto& snaps = spec.plants[p].snapshots;
            out << "snapshots";
            if (snaps.empty())
                for (int t = 0; t < spec.tau; ++t) out << ' ' << t;
            else
                for (int t : snaps) out << ' ' << t;
            out << " nodes";
            for (NodeId v : inst.ground_truth[p]) out << ' ' << inst.history.label(v);
            out << "\n";
        }
    }
}

// ---- experiment grids ---------------------------------------------------

struct GridInstance {
    std::string id;
    double x = 0.0;  // series abscissa
    bool has_x = false;
    std::optional<InstanceSpec> spec;  // generated instance ...
    std::string file;                  // ... or loaded from an edge list
    int truth_plant = -1;              // ground-truth plant index, -1 = none
    int k = -1;                        // per-instance k for o2bff solvers
};

struct GridSolver {
    std::string id;
    std::string command;  // bff | o2bff | qr-bff | dcs | oracle
    AggregateKind kind = AggregateKind::mm;
    std::optional<Scorer> scorer;
    std::string o2_solver;  // itr-r | itr-c | itr-k | inc-d | inc-o
    int k = -1;             // -1: take the instance's k
    std::uint64_t seed = 0;
    int max_iters = 100;
};

struct Grid {
    std::string name;
    std::vector<GridInstance> instances;
    std::vector<GridSolver> solvers;
};

inline Scorer scorer_from_string(const std::string& s, AggregateKind kind) {
    if (s == "min") return Scorer::min_degree();
    if (s == "avg") return Scorer::avg_degree();
    if (s == "greedy") return Scorer::greedy(kind);
    throw DomainError("unknown scorer '" + s + "' (expected min|avg|greedy)");
}

inline Grid parse_grid(const nlohmann::json& j) {
    Grid g;
    g.name = j.value("name", "grid");
    for (const auto& ij : j.at("instances")) {
        GridInstance gi;
        gi.id = ij.at("id").get<std::string>();
        if (ij.contains("x")) {
            gi.x = ij.at("x").get<double>();
            gi.has_x = true;
        }
        if (ij.contains("spec"))
            gi.spec = parse_instance_spec(ij.at("spec"));
        else if (ij.contains("file"))
            gi.file = ij.at("file").get<std::string>();
        else
            throw DomainError("grid instance '" + gi.id + "' needs 'spec' or 'file'");
        gi.truth_plant = ij.value("truth_plant", -1);
        gi.k = ij.value("k", -1);
        g.instances.push_back(std::move(gi));
    }
    for (const auto& sj : j.at("solvers")) {
        GridSolver gs;
        gs.id = sj.at("id").get<std::string>();
        gs.command = sj.at("command").get<std::string>();
        if (sj.contains("density")) gs.kind = aggregate_kind_from_string(sj.at("density"));
        if (sj.contains("scorer")) gs.scorer = scorer_from_string(sj.at("scorer"), gs.kind);
        gs.o2_solver = sj.value("solver", "");
        gs.k = sj.value("k", -1);
        gs.seed = sj.value("seed", std::uint64_t{0});
        gs.max_iters = sj.value("max_iters", 100);
        g.solvers.push_back(std::move(gs));
    }
    return g;
}

struct ReportRow {
    std::string instance;
    std::string solver;
    AggregateKind kind = AggregateKind::mm;
    int k = -1;
    Rational score;
    std::size_t size = 0;
    double f = -1.0;  // < 0: no ground truth
    double wall_ms = 0.0;
    double x = 0.0;
    bool has_x = false;
    bool ok = false;
    std::string error;
    std::vector<NodeId> nodes;  // retained so rows stay recomputable
};

namespace detail {

inline int thread_budget() {
    if (const char* env = std::getenv("BFF_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace detail

struct MaterializeTiming {
    std::string instance;
    double ms = 0.0;
};

// Runs every (instance, solver) cell. Instances are materialized first
// (generation/parse time excluded from the per-row wall time and reported
// separately through `timings`); cells run in parallel under BFF_THREADS
// with a deterministic ordered merge.
inline std::vector<ReportRow> run_experiment(const Grid& grid,
                                             std::vector<MaterializeTiming>* timings = nullptr) {
    struct Materialized {
        GraphHistory history;
        std::vector<std::vector<NodeId>> truth;
        bool ok = false;
        std::string error;
    };
    std::vector<Materialized> inst(grid.instances.size());
    for (std::size_t i = 0; i < grid.instances.size(); ++i) {
        const auto m0 = std::chrono::steady_clock::now();
        try {
            const auto& gi = grid.instances[i];
            if (gi.spec) {
                GeneratedInstance gen = generate_history(*gi.spec);
                inst[i].history = std::move(gen.history);
                inst[i].truth = std::move(gen.ground_truth);
            } else {
                inst[i].history = load_history_file(gi.file);
            }
            inst[i].ok = true;
        } catch (const std::exception& e) {
            inst[i].error = e.what();
        }
        if (timings) {
            const auto m1 = std::chrono::steady_clock::now();
            timings->push_back({grid.instances[i].id,
                                std::chrono::duration<double, std::milli>(m1 - m0).count()});
        }
    }

    const std::size_t cells = grid.instances.size() * grid.solvers.size();
    std::vector<ReportRow> rows(cells);
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t cell = next.fetch_add(1);
            if (cell >= cells) return;
            const std::size_t ii = cell / grid.solvers.size();
            const std::size_t si = cell % grid.solvers.size();
            const GridInstance& gi = grid.instances[ii];
            const GridSolver& gs = grid.solvers[si];
            ReportRow& row = rows[cell];
            row.instance = gi.id;
            row.solver = gs.id;
            row.kind = gs.kind;
            row.x = gi.x;
            row.has_x = gi.has_x;
            if (!inst[ii].ok) {
                row.error = inst[ii].error;
                continue;
            }
            const GraphHistory& h = inst[ii].history;
            try {
                int k = gs.k >= 0 ? gs.k : gi.k;
                const auto t0 = std::chrono::steady_clock::now();
                std::vector<NodeId> nodes;
                Rational score;
                if (gs.command == "bff") {
                    Solution s = find_bff(h, gs.kind, gs.scorer);
                    nodes = s.nodes;
                    score = s.score;
                } else if (gs.command == "dcs") {
                    Solution s = dcs_baseline(h);
                    nodes = s.nodes;
                    score = s.score;
                    row.kind = AggregateKind::ma;
                } else if (gs.command == "oracle") {
                    if (k >= 0) {
                        O2Solution s = brute_force_o2bff(h, gs.kind, k);
                        nodes = s.nodes;
                        score = s.score;
                        row.k = k;
                    } else {
                        Solution s = brute_force_bff(h, gs.kind);
                        nodes = s.nodes;
                        score = s.score;
                    }
                } else if (gs.command == "o2bff") {
                    if (k < 0) throw DomainError("o2bff solver needs k");
                    O2Options opt;
                    opt.scorer = gs.scorer;
                    opt.seed = gs.seed;
                    opt.max_iters = gs.max_iters;
                    O2Solution s;
                    if (gs.o2_solver == "itr-r")
                        s = o2bff_iterative(h, gs.kind, k, InitKind::random_k, opt);
                    else if (gs.o2_solver == "itr-c")
                        s = o2bff_iterative(h, gs.kind, k, InitKind::contiguous, opt);
                    else if (gs.o2_solver == "itr-k")
                        s = o2bff_iterative(h, gs.kind, k, InitKind::at_least_k, opt);
                    else if (gs.o2_solver == "inc-d")
                        s = o2bff_incremental_density(h, gs.kind, k, opt);
                    else if (gs.o2_solver == "inc-o")
                        s = o2bff_incremental_overlap(h, gs.kind, k, opt);
                    else
                        throw DomainError("unknown o2bff solver '" + gs.o2_solver + "'");
                    nodes = s.nodes;
                    score = s.score;
                    row.k = k;
                } else {
                    throw DomainError("unknown command '" + gs.command + "'");
                }
                const auto t1 = std::chrono::steady_clock::now();
                row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                row.nodes = std::move(nodes);
                row.score = score;
                row.size = row.nodes.size();
                if (gi.truth_plant >= 0) {
                    if (gi.truth_plant >= static_cast<int>(inst[ii].truth.size()))
                        throw DomainError("truth_plant out of range");
                    row.f = f_measure(row.nodes, inst[ii].truth[gi.truth_plant]);
                }
                row.ok = true;
            } catch (const std::exception& e) {
                row.ok = false;
                row.error = e.what();
            }
        }
    };

    const int threads = std::min<int>(detail::thread_budget(), static_cast<int>(cells) > 0 ? static_cast<int>(cells) : 1);
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return rows;
}

// Tab-separated report, one row per cell, fixed columns.
inline void write_report(const std::vector<ReportRow>& rows, std::ostream& out) {
    out << "instance\tsolver\tdensity\tk\tscore\tsize\tf_measure\twall_ms\n";
    for (const auto& r : rows) {
        out << r.instance << '\t' << r.solver << '\t' << to_string(r.kind) << '\t';
        if (r.k >= 0)
            out << r.k;
        else
            out << '-';
        out << '\t';
        if (!r.ok) {
            out << "-\t0\t-\t-\n";
            continue;
        }
        out << r.score.to_string() << '\t' << r.size << '\t';
        if (r.f >= 0.0) {
            std::ostringstream fs;
            fs << r.f;
            out << fs.str();
        } else {
            out << '-';
        }
        out << '\t' << static_cast<long long>(r.wall_ms * 1000.0) / 1000.0 << '\n';
    }
}

// Per-solver series: x <TAB> median F over the rows sharing that x.
inline std::map<std::string, std::vector<std::pair<double, double>>> series_by_solver(
    const std::vector<ReportRow>& rows) {
    std::map<std::string, std::map<double, std::vector<double>>> acc;
    for (const auto& r : rows)
        if (r.ok && r.has_x && r.f >= 0.0) acc[r.solver][r.x].push_back(r.f);
    std::map<std::string, std::vector<std::pair<double, double>>> out;
    for (auto& [solver, by_x] : acc)
        for (auto& [x, fs] : by_x) out[solver].emplace_back(x, median(fs));
    return out;
}

inline void write_series_files(const std::vector<ReportRow>& rows, const std::string& dir,
                               const std::string& grid_name) {
    for (const auto& [solver, pts] : series_by_solver(rows)) {
        std::ofstream out(dir + "/" + grid_name + "_" + solver + ".series");
        for (auto [x, f] : pts) out << x << '\t' << f << '\n';
    }
}

}  // namespace bff
