#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "bff/buckets.hpp"
#include "bff/density.hpp"
#include "bff/errors.hpp"
#include "bff/graph.hpp"
#include "bff/rational.hpp"

namespace bff {

enum class ScorerKind { min_degree, avg_degree, greedy };

// Which node to drop next. score_m removes the node with the smallest
// minimum degree across snapshots, score_a the one with the smallest average
// degree, score_g the one whose removal hurts the target f least (or helps
// it most).
struct Scorer {
    ScorerKind kind = ScorerKind::min_degree;
    AggregateKind greedy_target = AggregateKind::ma;  // only for greedy

    static Scorer min_degree() { return {ScorerKind::min_degree, AggregateKind::ma}; }
    static Scorer avg_degree() { return {ScorerKind::avg_degree, AggregateKind::ma}; }
    static Scorer greedy(AggregateKind target) { return {ScorerKind::greedy, target}; }

    std::string name() const {
        switch (kind) {
            case ScorerKind::min_degree: return "min";
            case ScorerKind::avg_degree: return "avg";
            case ScorerKind::greedy: return "greedy";
        }
        return "?";
    }
};

// mm and ma peel best with the min-degree scorer, am and aa with the
// average-degree scorer (callers can override everywhere this is used).
inline Scorer default_scorer(AggregateKind kind) {
    switch (kind) {
        case AggregateKind::mm:
        case AggregateKind::ma: return Scorer::min_degree();
        case AggregateKind::am:
        case AggregateKind::aa: return Scorer::avg_degree();
    }
    return Scorer::min_degree();
}

struct Solution {
    std::vector<NodeId> nodes;  // sorted
    Rational score;
    AggregateKind kind = AggregateKind::mm;
    int peel_index = 0;                 // i with nodes == S_i
    std::vector<NodeId> removal_order;  // v_1, v_2, ... as removed
    bool degenerate = false;            // no edge anywhere; S_0 = V returned
    std::string solver;
};

namespace detail {

// f(S_i) for the residual set from maintained counters, O(tau).
inline Rational eval_aggregate(const DegreeBuckets& b, AggregateKind kind) {
    const std::int64_t s = b.alive_count();
    switch (kind) {
        case AggregateKind::mm: return Rational(b.min_dmin());
        case AggregateKind::am: return Rational(b.sum_dmin(), b.tau());
        case AggregateKind::ma: return Rational(2 * b.min_edges(), s);
        case AggregateKind::aa: return Rational(2 * b.edges_total(), static_cast<std::int64_t>(b.tau()) * s);
    }
    return Rational(0);
}

// Scratch space for score_g's per-snapshot min-degree recomputation,
// epoch-stamped so clears are O(1).
struct GreedyScratch {
    std::vector<int> cnt, stamp;
    int epoch = 0;

    explicit GreedyScratch(int max_deg) : cnt(max_deg + 2, 0), stamp(max_deg + 2, -1) {}

    void begin() { ++epoch; }
    void add(int d) {
        if (stamp[d] != epoch) {
            stamp[d] = epoch;
            cnt[d] = 0;
        }
        ++cnt[d];
    }
    int at(int d) const { return stamp[d] == epoch ? cnt[d] : 0; }
};

// Minimum induced degree of snapshot t after additionally removing v.
// Uses the degree histogram plus one pass over v's alive neighbors.
inline int dmin_after_removal(const DegreeBuckets& b, int t, NodeId v, GreedyScratch& scratch) {
    if (b.alive_count() <= 2) return 0;
    const auto& g = b.history().snapshots[t];
    const int inf = std::numeric_limits<int>::max();
    int min_nbr = inf;
    scratch.begin();
    for (NodeId u : g.adj[v]) {
        if (!b.alive(u)) continue;
        const int d = b.degree(t, u);
        scratch.add(d);
        if (d < min_nbr) min_nbr = d;
    }
    const int from_nbrs = min_nbr == inf ? inf : min_nbr - 1;
    const auto& sizes = b.bucket_sizes(t);
    int d = b.dmin(t);
    if (from_nbrs != inf && from_nbrs < d) return from_nbrs;
    const int cap = static_cast<int>(sizes.size());
    for (; d < cap && (from_nbrs == inf || d < from_nbrs); ++d) {
        int avail = sizes[d] - scratch.at(d);
        if (b.degree(t, v) == d) --avail;
        if (avail > 0) return d;
    }
    return from_nbrs == inf ? 0 : from_nbrs;
}

// f(S \ {v}) for every alive v; returns the argmax (smallest id on ties).
// O(n*tau + residual M) per step via the per-snapshot degree tables.
inline NodeId greedy_select(const DegreeBuckets& b, AggregateKind target, GreedyScratch& scratch) {
    const std::int64_t s = b.alive_count();
    const int tau = b.tau();
    NodeId best_v = -1;
    Rational best_f;
    for (NodeId v = 0; v < b.n(); ++v) {
        if (!b.alive(v)) continue;
        Rational f;
        switch (target) {
            case AggregateKind::ma: {
                std::int64_t worst = std::numeric_limits<std::int64_t>::max();
                for (int t = 0; t < tau; ++t)
                    worst = std::min(worst, b.edges(t) - b.degree(t, v));
                f = Rational(2 * worst, s - 1);
                break;
            }
            case AggregateKind::aa: {
                std::int64_t drop = 0;
                for (int t = 0; t < tau; ++t) drop += b.degree(t, v);
                f = Rational(2 * (b.edges_total() - drop), static_cast<std::int64_t>(tau) * (s - 1));
                break;
            }
            case AggregateKind::mm: {
                int worst = std::numeric_limits<int>::max();
                for (int t = 0; t < tau; ++t)
                    worst = std::min(worst, dmin_after_removal(b, t, v, scratch));
                f = Rational(worst);
                break;
            }
            case AggregateKind::am: {
                std::int64_t sum = 0;
                for (int t = 0; t < tau; ++t) sum += dmin_after_removal(b, t, v, scratch);
                f = Rational(sum, tau);
                break;
            }
        }
        if (best_v == -1 || f > best_f) {
            best_v = v;
            best_f = f;
        }
    }
    return best_v;
}

}  // namespace detail

// The generic peel: start from S_0 = V, remove the scorer's argmin for n-1
// steps, and return the intermediate set with the largest f (ties: earliest
// peel index). f is re-evaluated incrementally from the removal's local
// effect, keeping the min/avg scorers at O(n*tau + M) overall.
inline Solution find_bff(const GraphHistory& h, AggregateKind kind,
                         std::optional<Scorer> scorer_opt = std::nullopt) {
    if (h.n < 1 || h.tau() < 1) throw DomainError("empty history");
    const Scorer scorer = scorer_opt.value_or(default_scorer(kind));

    DegreeBuckets buckets(h);
    std::optional<MinScoreIndex> min_idx;
    std::optional<AvgScoreIndex> avg_idx;
    std::optional<detail::GreedyScratch> scratch;
    int max_deg = 0;
    for (int t = 0; t < h.tau(); ++t)
        max_deg = std::max(max_deg, static_cast<int>(buckets.bucket_sizes(t).size()));
    switch (scorer.kind) {
        case ScorerKind::min_degree: min_idx.emplace(buckets); break;
        case ScorerKind::avg_degree: avg_idx.emplace(buckets); break;
        case ScorerKind::greedy: scratch.emplace(max_deg); break;
    }

    Solution sol;
    sol.kind = kind;
    sol.solver = "findbff-" + scorer.name();
    sol.degenerate = buckets.edges_total() == 0;
    sol.score = detail::eval_aggregate(buckets, kind);
    sol.peel_index = 0;
    sol.removal_order.reserve(h.n > 0 ? h.n - 1 : 0);

    auto on_dec = [&](int t, NodeId v, int nd) {
        if (min_idx) min_idx->on_decrement(t, v, nd);
        if (avg_idx) avg_idx->on_decrement(t, v, nd);
    };

    for (int i = 1; i <= h.n - 1; ++i) {
        NodeId victim;
        switch (scorer.kind) {
            case ScorerKind::min_degree: victim = min_idx->argmin(); break;
            case ScorerKind::avg_degree: victim = avg_idx->argmin(); break;
            case ScorerKind::greedy:
                victim = detail::greedy_select(buckets, scorer.greedy_target, *scratch);
                break;
        }
        if (min_idx) min_idx->remove(victim);
        if (avg_idx) avg_idx->remove(victim);
        buckets.remove_node(victim, on_dec);
        sol.removal_order.push_back(victim);

        const Rational f = detail::eval_aggregate(buckets, kind);
        if (f > sol.score) {
            sol.score = f;
            sol.peel_index = i;
        }
    }

    std::vector<char> removed(h.n, 0);
    for (int i = 0; i < sol.peel_index; ++i) removed[sol.removal_order[i]] = 1;
    for (NodeId v = 0; v < h.n; ++v)
        if (!removed[v]) sol.nodes.push_back(v);
    return sol;
}

// Exposed single steps of the two bucket-driven scorers (the engine used by
// find_bff, driveable one removal at a time for inspection).
class MinDegreePeeler {
  public:
    explicit MinDegreePeeler(const GraphHistory& h) : buckets_(h), index_(buckets_) {}

    // Removes and returns the node achieving min_t dmin_t, smallest id first.
    NodeId step() {
        if (buckets_.alive_count() == 0) throw DomainError("peel step on empty residual set");
        const NodeId v = index_.argmin();
        index_.remove(v);
        buckets_.remove_node(v, [this](int t, NodeId u, int nd) { index_.on_decrement(t, u, nd); });
        return v;
    }

    int score(NodeId v) const { return index_.score(v); }
    const DegreeBuckets& buckets() const { return buckets_; }

  private:
    DegreeBuckets buckets_;
    MinScoreIndex index_;
};

class AvgDegreePeeler {
  public:
    explicit AvgDegreePeeler(const GraphHistory& h) : buckets_(h), index_(buckets_) {}

    NodeId step() {
        if (buckets_.alive_count() == 0) throw DomainError("peel step on empty residual set");
        const NodeId v = index_.argmin();
        index_.remove(v);
        buckets_.remove_node(v, [this](int t, NodeId u, int nd) { index_.on_decrement(t, u, nd); });
        return v;
    }

    // Scaled weighted degree (weighted degree in the average graph x tau).
    std::int64_t bucket_index(NodeId v) const { return index_.scaled_score(v); }
    const DegreeBuckets& buckets() const { return buckets_; }

  private:
    DegreeBuckets buckets_;
    AvgScoreIndex index_;
};

// Qr-BFF: the returned set must contain the seed set Q. The min-degree
// variant peels normally and stops the first time the argmin is a seed; the
// avg-degree variant never removes seeds and stops when only seeds remain.
inline Solution find_bff_query(const GraphHistory& h, AggregateKind kind, Scorer scorer,
                               const std::vector<NodeId>& query) {
    if (h.n < 1 || h.tau() < 1) throw DomainError("empty history");
    if (query.empty()) throw DomainError("query set must be non-empty");
    std::vector<char> is_seed(h.n, 0);
    int q_count = 0;
    for (NodeId q : query) {
        if (q < 0 || q >= h.n) throw DomainError("query node out of range");
        if (!is_seed[q]) {
            is_seed[q] = 1;
            ++q_count;
        }
    }
    if (scorer.kind == ScorerKind::greedy)
        throw DomainError("query-constrained peel supports min|avg scorers");

    DegreeBuckets buckets(h);
    std::optional<MinScoreIndex> min_idx;
    std::optional<AvgScoreIndex> avg_idx;
    if (scorer.kind == ScorerKind::min_degree) {
        min_idx.emplace(buckets);
    } else {
        avg_idx.emplace(buckets);
        for (NodeId v = 0; v < h.n; ++v)
            if (is_seed[v]) avg_idx->remove(v);  // seeds are never candidates
    }

    Solution sol;
    sol.kind = kind;
    sol.solver = scorer.kind == ScorerKind::min_degree ? "qr-findbff-min" : "qr-findbff-avg";
    sol.degenerate = buckets.edges_total() == 0;
    sol.score = detail::eval_aggregate(buckets, kind);
    sol.peel_index = 0;

    auto on_dec = [&](int t, NodeId v, int nd) {
        if (min_idx) min_idx->on_decrement(t, v, nd);
        if (avg_idx && !is_seed[v]) avg_idx->on_decrement(t, v, nd);
    };

    int i = 0;
    while (true) {
        NodeId victim;
        if (min_idx) {
            if (buckets.alive_count() <= 1) break;
            victim = min_idx->argmin();
            if (is_seed[victim]) break;  // stopping rule of Qr-FindBff_M
            min_idx->remove(victim);
        } else {
            if (buckets.alive_count() <= q_count) break;  // only seeds remain
            victim = avg_idx->argmin();
            avg_idx->remove(victim);
        }
        buckets.remove_node(victim, on_dec);
        sol.removal_order.push_back(victim);
        ++i;
        const Rational f = detail::eval_aggregate(buckets, kind);
        if (f > sol.score) {
            sol.score = f;
            sol.peel_index = i;
        }
    }

    std::vector<char> removed(h.n, 0);
    for (int j = 0; j < sol.peel_index; ++j) removed[sol.removal_order[j]] = 1;
    for (NodeId v = 0; v < h.n; ++v)
        if (!removed[v]) sol.nodes.push_back(v);
    return sol;
}

// Connectivity restriction: the subhistory induced on every node reachable
// from some query node in the union graph of all snapshots.
inline Subhistory restrict_to_component(const GraphHistory& h, const std::vector<NodeId>& query) {
    if (query.empty()) throw DomainError("query set must be non-empty");
    std::vector<char> seen(h.n, 0);
    std::vector<NodeId> stack;
    for (NodeId q : query) {
        if (q < 0 || q >= h.n) throw DomainError("query node out of range");
        if (!seen[q]) {
            seen[q] = 1;
            stack.push_back(q);
        }
    }
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (const auto& g : h.snapshots)
            for (NodeId v : g.adj[u])
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back(v);
                }
    }
    std::vector<NodeId> kept;
    for (NodeId v = 0; v < h.n; ++v)
        if (seen[v]) kept.push_back(v);
    return induced_subhistory(h, kept);
}

}  // namespace bff
