#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "bff/errors.hpp"
#include "bff/graph.hpp"

namespace bff {

// Set of ids over a fixed universe [0, n) with O(1) insert/erase and a
// near-O(1) minimum query (two-level bitset). Backs the smallest-NodeId
// tie-break of the min-degree scorer without scanning bucket lists.
class IdSet {
  public:
    void insert(int i) {
        ensure(i);
        const int wi = i >> 6;
        w_[wi] |= 1ull << (i & 63);
        sum_[wi >> 6] |= 1ull << (wi & 63);
        ++count_;
    }

    void erase(int i) {
        const int wi = i >> 6;
        w_[wi] &= ~(1ull << (i & 63));
        if (w_[wi] == 0) sum_[wi >> 6] &= ~(1ull << (wi & 63));
        --count_;
    }

    bool empty() const { return count_ == 0; }
    int size() const { return count_; }

    // Smallest id in the set; undefined when empty.
    int min() const {
        for (std::size_t si = 0; si < sum_.size(); ++si) {
            if (sum_[si] == 0) continue;
            const int wi = static_cast<int>(si) * 64 + __builtin_ctzll(sum_[si]);
            return wi * 64 + __builtin_ctzll(w_[wi]);
        }
        return -1;
    }

  private:
    void ensure(int i) {
        const std::size_t words = static_cast<std::size_t>(i >> 6) + 1;
        if (words > w_.size()) {
            w_.resize(words, 0);
            sum_.resize((words + 63) / 64, 0);
        }
    }

    std::vector<std::uint64_t> w_;
    std::vector<std::uint64_t> sum_;
    int count_ = 0;
};

// Per-snapshot degree buckets: for every snapshot t an array L_t[d] of
// doubly-linked node lists indexed by current induced degree, a cursor
// dmin_t at the smallest non-empty bucket, and remaining edge counts. This
// is the shared state behind every peel; removing a node repositions each
// affected neighbor exactly one bucket down, so total moves are bounded by
// M = sum of snapshot edge counts.
class DegreeBuckets {
  public:
    explicit DegreeBuckets(const GraphHistory& h)
        : h_(&h), n_(h.n), tau_(h.tau()), alive_(h.n, 1), alive_count_(h.n) {
        if (n_ < 1 || tau_ < 1) throw DomainError("empty history");
        deg_.assign(static_cast<std::size_t>(tau_) * n_, 0);
        nxt_.assign(static_cast<std::size_t>(tau_) * n_, -1);
        prv_.assign(static_cast<std::size_t>(tau_) * n_, -1);
        head_.resize(tau_);
        bucket_count_.resize(tau_);
        dmin_.assign(tau_, 0);
        m_cur_.assign(tau_, 0);
        for (int t = 0; t < tau_; ++t) {
            const auto& g = h.snapshots[t];
            int max_deg = 0;
            for (NodeId v = 0; v < n_; ++v) {
                const int d = static_cast<int>(g.adj[v].size());
                deg_[idx(t, v)] = d;
                if (d > max_deg) max_deg = d;
            }
            head_[t].assign(max_deg + 1, -1);
            bucket_count_[t].assign(max_deg + 1, 0);
            // Insert in descending id order so each list head is the
            // smallest id initially (not relied upon, but tidy).
            for (NodeId v = n_ - 1; v >= 0; --v) link(t, v, deg_[idx(t, v)]);
            int dm = 0;
            while (dm < max_deg && head_[t][dm] == -1) ++dm;
            dmin_[t] = dm;
            m_cur_[t] = g.edge_count;
            m_total_ += g.edge_count;
        }
    }

    int n() const { return n_; }
    int tau() const { return tau_; }
    int alive_count() const { return alive_count_; }
    bool alive(NodeId v) const { return alive_[v] != 0; }
    const GraphHistory& history() const { return *h_; }

    // Current induced degree of v in snapshot t == its bucket index.
    int degree(int t, NodeId v) const { return deg_[idx(t, v)]; }
    int bucket_of(int t, NodeId v) const { return deg_[idx(t, v)]; }
    int dmin(int t) const { return dmin_[t]; }
    std::int64_t edges(int t) const { return m_cur_[t]; }
    std::int64_t edges_total() const { return m_total_; }
    const std::vector<int>& bucket_sizes(int t) const { return bucket_count_[t]; }
    std::int64_t repositions() const { return repositions_; }

    int min_dmin() const {
        int best = deg_max_bound();
        for (int t = 0; t < tau_; ++t)
            if (dmin_[t] < best) best = dmin_[t];
        return best;
    }

    std::int64_t sum_dmin() const {
        std::int64_t s = 0;
        for (int t = 0; t < tau_; ++t) s += dmin_[t];
        return s;
    }

    std::int64_t min_edges() const {
        std::int64_t best = m_cur_[0];
        for (int t = 1; t < tau_; ++t)
            if (m_cur_[t] < best) best = m_cur_[t];
        return best;
    }

    // Removes u from every snapshot: unlinks it, drops its incident edges,
    // and moves each still-alive neighbor one bucket down. `on_decrement`
    // observes every (t, neighbor, new_degree) so scorer indexes stay in
    // sync.
    template <class OnDecrement>
    void remove_node(NodeId u, OnDecrement&& on_decrement) {
        alive_[u] = 0;
        --alive_count_;
        for (int t = 0; t < tau_; ++t) {
            unlink(t, u, deg_[idx(t, u)]);
            for (NodeId v : h_->snapshots[t].adj[u]) {
                if (!alive_[v]) continue;
                const int d = deg_[idx(t, v)];
                unlink(t, v, d);
                deg_[idx(t, v)] = d - 1;
                link(t, v, d - 1);
                ++repositions_;
                --m_cur_[t];
                --m_total_;
                if (d - 1 < dmin_[t]) dmin_[t] = d - 1;
                on_decrement(t, v, d - 1);
            }
            advance_dmin(t);
        }
    }

    void remove_node(NodeId u) {
        remove_node(u, [](int, NodeId, int) {});
    }

    // Full consistency recount: every alive node's stored degree equals the
    // recomputed induced degree, it is linked in exactly that bucket, and
    // edge counters match. O(n*tau + M); used by the audit tests.
    bool audit() const {
        for (int t = 0; t < tau_; ++t) {
            std::int64_t half = 0;
            for (NodeId v = 0; v < n_; ++v) {
                if (!alive_[v]) continue;
                int d = 0;
                for (NodeId w : h_->snapshots[t].adj[v])
                    if (alive_[w]) ++d;
                if (d != deg_[idx(t, v)]) return false;
                half += d;
            }
            if (m_cur_[t] != half / 2) return false;
            int seen = 0;
            for (std::size_t d = 0; d < head_[t].size(); ++d) {
                int run = 0;
                for (int v = head_[t][d]; v != -1; v = nxt_[idx(t, v)]) {
                    if (!alive_[v] || deg_[idx(t, v)] != static_cast<int>(d)) return false;
                    ++run;
                    if (run > alive_count_) return false;  // cycle guard
                }
                if (run != bucket_count_[t][d]) return false;
                seen += run;
                if (bucket_count_[t][d] > 0 && static_cast<int>(d) < dmin_[t]) return false;
            }
            if (seen != alive_count_) return false;
            if (alive_count_ > 0 && dmin_[t] < static_cast<int>(head_[t].size()) &&
                bucket_count_[t][dmin_[t]] == 0)
                return false;
        }
        return true;
    }

  private:
    std::size_t idx(int t, NodeId v) const { return static_cast<std::size_t>(t) * n_ + v; }

    int deg_max_bound() const { return n_; }

    void link(int t, NodeId v, int d) {
        const std::size_t i = idx(t, v);
        nxt_[i] = head_[t][d];
        prv_[i] = -1;
        if (head_[t][d] != -1) prv_[idx(t, head_[t][d])] = v;
        head_[t][d] = v;
        ++bucket_count_[t][d];
    }

    void unlink(int t, NodeId v, int d) {
        const std::size_t i = idx(t, v);
        if (prv_[i] != -1)
            nxt_[idx(t, prv_[i])] = nxt_[i];
        else
            head_[t][d] = nxt_[i];
        if (nxt_[i] != -1) prv_[idx(t, nxt_[i])] = prv_[i];
        --bucket_count_[t][d];
    }

    void advance_dmin(int t) {
        if (alive_count_ == 0) {
            dmin_[t] = 0;
            return;
        }
        const int cap = static_cast<int>(head_[t].size());
        while (dmin_[t] < cap && head_[t][dmin_[t]] == -1) ++dmin_[t];
        if (dmin_[t] >= cap) dmin_[t] = 0;  // only isolated nodes left
    }

    const GraphHistory* h_;
    int n_;
    int tau_;
    std::vector<char> alive_;
    int alive_count_;
    std::vector<int> deg_;
    std::vector<int> nxt_, prv_;
    std::vector<std::vector<int>> head_;
    std::vector<std::vector<int>> bucket_count_;
    std::vector<int> dmin_;
    std::vector<std::int64_t> m_cur_;
    std::int64_t m_total_ = 0;
    std::int64_t repositions_ = 0;
};

// Scorer index for score_m(v) = min_t degree(v, G_t[S]). Scores only ever
// decrease during a peel, so each (t,v) decrement is at most one level move.
// Levels are IdSets, so argmin returns the smallest qualifying NodeId.
class MinScoreIndex {
  public:
    explicit MinScoreIndex(const DegreeBuckets& b) : score_(b.n()) {
        int max_score = 0;
        for (NodeId v = 0; v < b.n(); ++v) {
            int s = b.degree(0, v);
            for (int t = 1; t < b.tau(); ++t) s = std::min(s, b.degree(t, v));
            score_[v] = s;
            if (s > max_score) max_score = s;
        }
        levels_.resize(max_score + 1);
        for (NodeId v = 0; v < b.n(); ++v) levels_[score_[v]].insert(v);
    }

    int score(NodeId v) const { return score_[v]; }

    void on_decrement(int, NodeId v, int new_deg) {
        if (new_deg < score_[v]) {
            levels_[score_[v]].erase(v);
            score_[v] = new_deg;
            levels_[new_deg].insert(v);
            if (new_deg < smin_) smin_ = new_deg;
        }
    }

    void remove(NodeId v) { levels_[score_[v]].erase(v); }

    // Smallest NodeId among nodes of minimum score.
    NodeId argmin() {
        while (smin_ < static_cast<int>(levels_.size()) && levels_[smin_].empty()) ++smin_;
        return levels_[smin_].min();
    }

  private:
    std::vector<int> score_;
    std::vector<IdSet> levels_;
    int smin_ = 0;
};

// Scorer index for score_a: buckets over the exact scaled average degree
// sum_t degree(v, G_t[S]) = tau * degree(v, avg graph[S]), kept as intrusive
// linked lists. Scaled values rarely collide, so scanning the minimum bucket
// for the smallest id is cheap; moves stay within the <= M bound because each
// (edge, snapshot) causes one unit move.
class AvgScoreIndex {
  public:
    explicit AvgScoreIndex(const DegreeBuckets& b)
        : ssum_(b.n()), nxt_(b.n(), -1), prv_(b.n(), -1) {
        std::int64_t max_ssum = 0;
        for (NodeId v = 0; v < b.n(); ++v) {
            std::int64_t s = 0;
            for (int t = 0; t < b.tau(); ++t) s += b.degree(t, v);
            ssum_[v] = s;
            if (s > max_ssum) max_ssum = s;
        }
        head_.assign(static_cast<std::size_t>(max_ssum) + 1, -1);
        for (NodeId v = b.n() - 1; v >= 0; --v) link(v);
    }

    // Bucket index = weighted degree in the average graph scaled by tau.
    std::int64_t scaled_score(NodeId v) const { return ssum_[v]; }

    void on_decrement(int, NodeId v, int) {
        unlink(v);
        --ssum_[v];
        link(v);
        if (ssum_[v] < smin_) smin_ = ssum_[v];
    }

    void remove(NodeId v) { unlink(v); }

    NodeId argmin() {
        while (smin_ < static_cast<std::int64_t>(head_.size()) && head_[smin_] == -1) ++smin_;
        NodeId best = -1;
        for (int v = head_[smin_]; v != -1; v = nxt_[v])
            if (best == -1 || v < best) best = v;
        return best;
    }

  private:
    void link(NodeId v) {
        const std::int64_t s = ssum_[v];
        nxt_[v] = head_[s];
        prv_[v] = -1;
        if (head_[s] != -1) prv_[head_[s]] = v;
        head_[s] = v;
    }

    void unlink(NodeId v) {
        if (prv_[v] != -1)
            nxt_[prv_[v]] = nxt_[v];
        else
            head_[ssum_[v]] = nxt_[v];
        if (nxt_[v] != -1) prv_[nxt_[v]] = prv_[v];
    }

    std::vector<std::int64_t> ssum_;
    std::vector<int> nxt_, prv_;
    std::vector<int> head_;  // indexed by scaled score
    std::int64_t smin_ = 0;
};

}  // namespace bff
