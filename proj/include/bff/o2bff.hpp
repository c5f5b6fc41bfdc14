#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bff/density.hpp"
#include "bff/errors.hpp"
#include "bff/graph.hpp"
#include "bff/peeling.hpp"
#include "bff/rational.hpp"

namespace bff {

enum class InitKind { random_k, contiguous, at_least_k };

inline std::string to_string(InitKind k) {
    switch (k) {
        case InitKind::random_k: return "itr-r";
        case InitKind::contiguous: return "itr-c";
        case InitKind::at_least_k: return "itr-k";
    }
    return "?";
}

struct O2Options {
    std::optional<Scorer> scorer;  // defaults to default_scorer(kind)
    std::uint64_t seed = 0;        // random initialization / random pair
    int max_iters = 100;
    bool random_pair_init = false;  // INC_D: skip the O(tau^2) pair search
};

struct O2Solution {
    std::vector<NodeId> nodes;   // sorted
    std::vector<int> snapshots;  // sorted, |.| == k
    Rational score;
    AggregateKind kind = AggregateKind::mm;
    std::string solver;
    int iterations = 0;
    bool fallback_used = false;        // at-least-k init degenerated to random
    std::vector<Rational> score_trace; // incumbent scores, non-decreasing
};

// The k snapshots where S is densest under d (ties: smaller index).
inline std::vector<int> best_snapshots(const std::vector<NodeId>& s, const GraphHistory& h,
                                       int k, DensityKind kind) {
    if (s.empty()) throw DomainError("best_snapshots of the empty set");
    if (k < 1 || k > h.tau()) throw DomainError("k out of range");
    std::vector<std::pair<Rational, int>> scored;
    scored.reserve(h.tau());
    for (int t = 0; t < h.tau(); ++t) scored.emplace_back(density(kind, s, h.snapshots[t]), t);
    std::stable_sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) out.push_back(scored[i].second);
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

inline std::vector<int> random_snapshot_subset(int tau, int k, std::uint64_t seed) {
    std::vector<int> all(tau);
    for (int t = 0; t < tau; ++t) all[t] = t;
    std::mt19937_64 rng(seed);
    for (int i = 0; i < k; ++i) {
        // Portable uniform pick in [i, tau) via multiply-free rejection.
        const std::uint64_t span = static_cast<std::uint64_t>(tau - i);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t x;
        do {
            x = rng();
        } while (x >= limit);
        std::swap(all[i], all[i + static_cast<int>(x % span)]);
    }
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

inline Rational score_on(const GraphHistory& h, AggregateKind kind,
                         const std::vector<NodeId>& nodes, const std::vector<int>& snaps) {
    return aggregate_density(kind, nodes, restrict_snapshots(h, snaps));
}

struct InitState {
    std::vector<int> snapshots;
    std::vector<NodeId> nodes;
    bool fallback_used = false;
};

inline InitState initialize(const GraphHistory& h, AggregateKind kind, int k, InitKind init,
                            const Scorer& scorer, std::uint64_t seed) {
    InitState st;
    switch (init) {
        case InitKind::random_k: {
            st.snapshots = random_snapshot_subset(h.tau(), k, seed);
            st.nodes = find_bff(restrict_snapshots(h, st.snapshots), kind, scorer).nodes;
            break;
        }
        case InitKind::contiguous: {
            // Best of the tau-k+1 contiguous windows (ties: earliest window).
            Rational best;
            for (int start = 0; start + k <= h.tau(); ++start) {
                std::vector<int> window(k);
                for (int i = 0; i < k; ++i) window[i] = start + i;
                Solution sol = find_bff(restrict_snapshots(h, window), kind, scorer);
                if (st.snapshots.empty() || sol.score > best) {
                    best = sol.score;
                    st.snapshots = window;
                    st.nodes = sol.nodes;
                }
            }
            break;
        }
        case InitKind::at_least_k: {
            // Nodes appearing in at least k of the per-snapshot solutions.
            std::vector<int> appearances(h.n, 0);
            for (int t = 0; t < h.tau(); ++t) {
                Solution sol = find_bff(restrict_snapshots(h, {t}), kind, scorer);
                for (NodeId v : sol.nodes) ++appearances[v];
            }
            for (NodeId v = 0; v < h.n; ++v)
                if (appearances[v] >= k) st.nodes.push_back(v);
            if (st.nodes.empty()) {
                // Degenerate intersection; documented fallback.
                st.fallback_used = true;
                st.snapshots = random_snapshot_subset(h.tau(), k, 0);
                st.nodes = find_bff(restrict_snapshots(h, st.snapshots), kind, scorer).nodes;
            } else {
                st.snapshots = best_snapshots(st.nodes, h, k, inner_density(kind));
            }
            break;
        }
    }
    return st;
}

}  // namespace detail

// Exposed for tests: the contiguous / at-least-k initializations.
inline std::pair<std::vector<int>, std::vector<NodeId>> init_contiguous(const GraphHistory& h,
                                                                        AggregateKind kind, int k,
                                                                        std::optional<Scorer> sc = {}) {
    if (k < 1 || k > h.tau()) throw DomainError("k out of range");
    auto st = detail::initialize(h, kind, k, InitKind::contiguous, sc.value_or(default_scorer(kind)), 0);
    return {st.snapshots, st.nodes};
}

inline std::pair<std::vector<int>, std::vector<NodeId>> init_at_least_k(const GraphHistory& h,
                                                                        AggregateKind kind, int k,
                                                                        std::optional<Scorer> sc = {}) {
    if (k < 1 || k > h.tau()) throw DomainError("k out of range");
    auto st = detail::initialize(h, kind, k, InitKind::at_least_k, sc.value_or(default_scorer(kind)), 0);
    return {st.snapshots, st.nodes};
}

// Iterative solver: alternate BestSnapshots(S) and FindBff(C_k) from a
// chosen initialization, keep the best (S, C_k) seen, and stop on the first
// iteration with no strict improvement (or at max_iters).
inline O2Solution o2bff_iterative(const GraphHistory& h, AggregateKind kind, int k, InitKind init,
                                  const O2Options& opt = {}) {
    if (h.n < 1 || h.tau() < 1) throw DomainError("empty history");
    if (k < 1 || k > h.tau()) throw DomainError("k out of range");
    const Scorer scorer = opt.scorer.value_or(default_scorer(kind));

    auto st = detail::initialize(h, kind, k, init, scorer, opt.seed);

    O2Solution best;
    best.kind = kind;
    best.solver = to_string(init);
    best.fallback_used = st.fallback_used;
    best.nodes = st.nodes;
    best.snapshots = st.snapshots;
    best.score = detail::score_on(h, kind, st.nodes, st.snapshots);
    best.score_trace.push_back(best.score);

    std::vector<NodeId> s = st.nodes;
    while (best.iterations < opt.max_iters) {
        ++best.iterations;
        std::vector<int> c = best_snapshots(s, h, k, inner_density(kind));
        Solution sol = find_bff(restrict_snapshots(h, c), kind, scorer);
        s = sol.nodes;
        const Rational ds = sol.score;
        if (ds > best.score) {
            best.score = ds;
            best.nodes = s;
            best.snapshots = c;
            best.score_trace.push_back(ds);
        } else {
            break;
        }
    }
    return best;
}

// Incremental density: seed C_2 with the best-scoring snapshot pair, then
// greedily add the snapshot whose re-solved BFF keeps f highest.
inline O2Solution o2bff_incremental_density(const GraphHistory& h, AggregateKind kind, int k,
                                            const O2Options& opt = {}) {
    if (h.n < 1 || h.tau() < 1) throw DomainError("empty history");
    if (k < 2 || k > h.tau()) throw DomainError("incremental solvers need 2 <= k <= tau");
    const Scorer scorer = opt.scorer.value_or(default_scorer(kind));
    const int tau = h.tau();

    std::vector<int> c;
    if (opt.random_pair_init) {
        c = detail::random_snapshot_subset(tau, 2, opt.seed);
    } else {
        Rational best_pair;
        bool first = true;
        for (int i = 0; i < tau; ++i)
            for (int j = i + 1; j < tau; ++j) {
                Solution sol = find_bff(restrict_snapshots(h, {i, j}), kind, scorer);
                if (first || sol.score > best_pair) {
                    first = false;
                    best_pair = sol.score;
                    c = {i, j};
                }
            }
    }

    int iterations = 0;
    while (static_cast<int>(c.size()) < k) {
        ++iterations;
        int best_t = -1;
        Rational best_f;
        for (int t = 0; t < tau; ++t) {
            if (std::binary_search(c.begin(), c.end(), t)) continue;
            std::vector<int> cand(c);
            cand.insert(std::lower_bound(cand.begin(), cand.end(), t), t);
            Solution sol = find_bff(restrict_snapshots(h, cand), kind, scorer);
            if (best_t == -1 || sol.score > best_f) {
                best_t = t;
                best_f = sol.score;
            }
        }
        c.insert(std::lower_bound(c.begin(), c.end(), best_t), best_t);
    }

    Solution fin = find_bff(restrict_snapshots(h, c), kind, scorer);
    O2Solution out;
    out.kind = kind;
    out.solver = "inc-d";
    out.nodes = fin.nodes;
    out.snapshots = c;
    out.score = fin.score;
    out.iterations = iterations;
    return out;
}

// Incremental overlap: seed C_2 with the pair whose per-snapshot solutions
// have the highest Jaccard similarity, then grow toward the current BFF set.
inline O2Solution o2bff_incremental_overlap(const GraphHistory& h, AggregateKind kind, int k,
                                            const O2Options& opt = {}) {
    if (h.n < 1 || h.tau() < 1) throw DomainError("empty history");
    if (k < 2 || k > h.tau()) throw DomainError("incremental solvers need 2 <= k <= tau");
    const Scorer scorer = opt.scorer.value_or(default_scorer(kind));
    const int tau = h.tau();

    std::vector<std::vector<NodeId>> per_snap(tau);
    for (int t = 0; t < tau; ++t)
        per_snap[t] = find_bff(restrict_snapshots(h, {t}), kind, scorer).nodes;

    // Jaccard as an exact integer cross-comparison.
    auto inter_size = [](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
        std::size_t i = 0, j = 0, cnt = 0;
        while (i < a.size() && j < b.size()) {
            if (a[i] < b[j])
                ++i;
            else if (a[i] > b[j])
                ++j;
            else {
                ++cnt;
                ++i;
                ++j;
            }
        }
        return static_cast<std::int64_t>(cnt);
    };
    auto jaccard = [&](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
        const std::int64_t is = inter_size(a, b);
        const std::int64_t un = static_cast<std::int64_t>(a.size() + b.size()) - is;
        return un == 0 ? Rational(1) : Rational(is, un);
    };

    std::vector<int> c;
    Rational best_j;
    bool first = true;
    for (int i = 0; i < tau; ++i)
        for (int j = i + 1; j < tau; ++j) {
            const Rational sim = jaccard(per_snap[i], per_snap[j]);
            if (first || sim > best_j) {
                first = false;
                best_j = sim;
                c = {i, j};
            }
        }

    int iterations = 0;
    while (static_cast<int>(c.size()) < k) {
        ++iterations;
        const std::vector<NodeId> s_c = find_bff(restrict_snapshots(h, c), kind, scorer).nodes;
        int best_t = -1;
        Rational best_sim;
        for (int t = 0; t < tau; ++t) {
            if (std::binary_search(c.begin(), c.end(), t)) continue;
            const Rational sim = jaccard(per_snap[t], s_c);
            if (best_t == -1 || sim > best_sim) {
                best_t = t;
                best_sim = sim;
            }
        }
        c.insert(std::lower_bound(c.begin(), c.end(), best_t), best_t);
    }

    Solution fin = find_bff(restrict_snapshots(h, c), kind, scorer);
    O2Solution out;
    out.kind = kind;
    out.solver = "inc-o";
    out.nodes = fin.nodes;
    out.snapshots = c;
    out.score = fin.score;
    out.iterations = iterations;
    return out;
}

}  // namespace bff
