#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "bff/density.hpp"
#include "bff/errors.hpp"
#include "bff/graph.hpp"
#include "bff/o2bff.hpp"
#include "bff/peeling.hpp"
#include "bff/rational.hpp"

namespace bff {

// Enumeration caps for the exact oracles.
struct OracleBudget {
    int max_nodes = 20;
    std::int64_t max_snapshot_choose = 1 << 20;  // cap on C(tau, k)
};

namespace detail {

// Lexicographic order on node sets encoded as bitmasks, reading each mask as
// its ascending id sequence ({0,1} < {0,1,2} < {0,2} < {1}).
inline bool lex_less_mask(std::uint64_t a, std::uint64_t b) {
    if (a == b) return false;
    const std::uint64_t m = (a ^ b) & (~(a ^ b) + 1);  // lowest differing id
    const std::uint64_t above = ~(m | (m - 1));
    if (a & m) return (b & above) != 0;  // a's element comes first unless b is a prefix
    return (a & above) == 0;             // b has the element; a wins only as a prefix
}

// f over a node mask using per-snapshot adjacency masks; O(n * |snaps|).
inline Rational mask_aggregate(AggregateKind kind, std::uint64_t mask, int popcnt,
                               const std::vector<std::vector<std::uint64_t>>& adj_masks,
                               const std::vector<int>& snaps) {
    const bool min_time = time_aggregator_is_min(kind);
    const bool inner_min = inner_density(kind) == DensityKind::min_degree;
    Rational best;
    std::int64_t acc = 0;
    bool first = true;
    for (int t : snaps) {
        const auto& adj = adj_masks[t];
        std::int64_t half = 0;
        int min_deg = -1;
        for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1) {
            const int v = __builtin_ctzll(rest);
            const int d = __builtin_popcountll(adj[v] & mask);
            half += d;
            if (min_deg < 0 || d < min_deg) min_deg = d;
        }
        if (min_time) {
            Rational dt = inner_min ? Rational(min_deg) : Rational(half, popcnt);
            if (first || dt < best) {
                best = dt;
                first = false;
            }
        } else {
            acc += inner_min ? min_deg : half;
        }
    }
    if (min_time) return best;
    const auto tau = static_cast<std::int64_t>(snaps.size());
    return inner_min ? Rational(acc, tau) : Rational(acc, static_cast<std::int64_t>(popcnt) * tau);
}

inline std::vector<std::vector<std::uint64_t>> build_adj_masks(const GraphHistory& h) {
    std::vector<std::vector<std::uint64_t>> masks(h.tau(), std::vector<std::uint64_t>(h.n, 0));
    for (int t = 0; t < h.tau(); ++t)
        for (NodeId u = 0; u < h.n; ++u)
            for (NodeId v : h.snapshots[t].adj[u]) masks[t][u] |= 1ull << v;
    return masks;
}

inline std::vector<NodeId> mask_to_nodes(std::uint64_t mask) {
    std::vector<NodeId> out;
    for (std::uint64_t rest = mask; rest != 0; rest &= rest - 1)
        out.push_back(__builtin_ctzll(rest));
    return out;
}

}  // namespace detail

// Exhaustive maximum of f over all non-empty node subsets. Ties go to the
// lexicographically smallest node set.
inline Solution brute_force_bff(const GraphHistory& h, AggregateKind kind,
                                const OracleBudget& budget = {}) {
    if (h.n < 1 || h.tau() < 1) throw DomainError("empty history");
    if (h.n > budget.max_nodes || h.n > 62)
        throw BudgetError("oracle budget exceeded: n=" + std::to_string(h.n));
    const auto adj_masks = detail::build_adj_masks(h);
    std::vector<int> all_snaps(h.tau());
    for (int t = 0; t < h.tau(); ++t) all_snaps[t] = t;

    std::uint64_t best_mask = 1;
    Rational best = detail::mask_aggregate(kind, 1, 1, adj_masks, all_snaps);
    const std::uint64_t end = h.n >= 63 ? 0 : (1ull << h.n);
    for (std::uint64_t mask = 2; mask < end; ++mask) {
        const int pc = __builtin_popcountll(mask);
        const Rational f = detail::mask_aggregate(kind, mask, pc, adj_masks, all_snaps);
        if (f > best || (f == best && detail::lex_less_mask(mask, best_mask))) {
            best = f;
            best_mask = mask;
        }
    }
    Solution sol;
    sol.kind = kind;
    sol.solver = "oracle-bff";
    sol.nodes = detail::mask_to_nodes(best_mask);
    sol.score = best;
    return sol;
}

// Exhaustive maximum over (node subset, snapshot k-subset) pairs.
// Tie-break: score, then lexicographically smaller snapshot set, then
// lexicographically smaller node set.
inline O2Solution brute_force_o2bff(const GraphHistory& h, AggregateKind kind, int k,
                                    const OracleBudget& budget = {}) {
    if (h.n < 1 || h.tau() < 1) throw DomainError("empty history");
    if (k < 1 || k > h.tau()) throw DomainError("k out of range");
    if (h.n > budget.max_nodes || h.n > 62)
        throw BudgetError("oracle budget exceeded: n=" + std::to_string(h.n));
    // C(tau, k) against the enumeration cap.
    std::int64_t combos = 1;
    for (int i = 0; i < k; ++i) {
        combos = combos * (h.tau() - i) / (i + 1);
        if (combos > budget.max_snapshot_choose)
            throw BudgetError("oracle budget exceeded: C(tau,k) too large");
    }

    const auto adj_masks = detail::build_adj_masks(h);
    O2Solution best;
    best.kind = kind;
    best.solver = "oracle-o2bff";
    bool first = true;
    std::uint64_t best_node_mask = 0;

    std::vector<int> combo(k);
    for (int i = 0; i < k; ++i) combo[i] = i;
    const std::uint64_t end = h.n >= 63 ? 0 : (1ull << h.n);
    while (true) {
        std::uint64_t inner_mask = 0;
        Rational inner_best;
        for (std::uint64_t mask = 1; mask < end; ++mask) {
            const int pc = __builtin_popcountll(mask);
            const Rational f = detail::mask_aggregate(kind, mask, pc, adj_masks, combo);
            if (inner_mask == 0 || f > inner_best ||
                (f == inner_best && detail::lex_less_mask(mask, inner_mask))) {
                inner_best = f;
                inner_mask = mask;
            }
        }
        if (first || inner_best > best.score) {
            first = false;
            best.score = inner_best;
            best.snapshots = combo;
            best_node_mask = inner_mask;
        }
        // Next k-combination in lexicographic order.
        int i = k - 1;
        while (i >= 0 && combo[i] == h.tau() - k + i) --i;
        if (i < 0) break;
        ++combo[i];
        for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
    best.nodes = detail::mask_to_nodes(best_node_mask);
    return best;
}

// DCS baseline (kind fixed to f_ma). Each round recomputes the greedy
// densest-average-degree subgraph of every snapshot on the residual node
// set, takes the snapshot whose dense subgraph is sparsest, and removes that
// subgraph's minimum-degree node from the whole history. The returned set is
// the best f_ma seen among the residual sets and the per-round dense
// subgraphs.
inline Solution dcs_baseline(const GraphHistory& h) {
    if (h.n < 1 || h.tau() < 1) throw DomainError("empty history");
    std::vector<NodeId> residual(h.n);
    for (NodeId v = 0; v < h.n; ++v) residual[v] = v;

    Solution best;
    best.kind = AggregateKind::ma;
    best.solver = "dcs";
    best.degenerate = h.total_edges() == 0;
    best.nodes = residual;
    best.score = aggregate_density(AggregateKind::ma, residual, h);
    best.peel_index = 0;

    auto consider = [&](const std::vector<NodeId>& s, int index) {
        const Rational f = aggregate_density(AggregateKind::ma, s, h);
        if (f > best.score) {
            best.score = f;
            best.nodes = s;
            best.peel_index = index;
        }
    };

    int round = 0;
    while (residual.size() > 1) {
        ++round;
        // Densest (greedy) subgraph of each snapshot, restricted to residual.
        Subhistory sub = induced_subhistory(h, residual);
        int best_t = -1;
        Rational sparsest;
        std::vector<NodeId> dense_local;
        for (int t = 0; t < h.tau(); ++t) {
            Solution inner = find_bff(restrict_snapshots(sub.history, {t}), AggregateKind::ma,
                                      Scorer::min_degree());
            if (best_t == -1 || inner.score < sparsest) {
                best_t = t;
                sparsest = inner.score;
                dense_local = inner.nodes;
            }
        }
        std::vector<NodeId> dense;
        dense.reserve(dense_local.size());
        for (NodeId v : dense_local) dense.push_back(sub.original_ids[v]);
        consider(dense, round);

        // Minimum-degree node of the chosen dense subgraph (ties: smallest id).
        std::vector<char> in_dense(h.n, 0);
        for (NodeId v : dense) in_dense[v] = 1;
        NodeId victim = -1;
        int victim_deg = 0;
        for (NodeId v : dense) {
            int d = 0;
            for (NodeId u : h.snapshots[best_t].adj[v])
                if (in_dense[u]) ++d;
            if (victim == -1 || d < victim_deg) {
                victim = v;
                victim_deg = d;
            }
        }

        residual.erase(std::find(residual.begin(), residual.end(), victim));
        consider(residual, round);
    }
    return best;
}

}  // namespace bff
