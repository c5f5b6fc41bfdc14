#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bff/errors.hpp"

namespace bff {

// Dense node index. Ingestion remaps external labels to [0, n) in
// first-appearance order; array-indexed adjacency and degree buckets rely on
// the ids being contiguous.
using NodeId = int;

// One undirected simple graph over the shared node universe.
struct Snapshot {
    std::vector<std::vector<NodeId>> adj;  // sorted neighbor lists, no self-loops
    std::int64_t edge_count = 0;           // = (sum of list sizes) / 2
};

// A sequence of tau snapshots over the same n nodes (union-of-nodes
// convention: a node missing from some snapshot simply has no edges there).
struct GraphHistory {
    int n = 0;
    std::vector<Snapshot> snapshots;
    std::vector<std::string> labels;  // optional; empty means "use decimal ids"

    int tau() const { return static_cast<int>(snapshots.size()); }

    std::int64_t total_edges() const {
        std::int64_t m = 0;
        for (const auto& g : snapshots) m += g.edge_count;
        return m;
    }

    std::string label(NodeId v) const {
        if (v >= 0 && v < static_cast<int>(labels.size()) && !labels[v].empty())
            return labels[v];
        return std::to_string(v);
    }

    bool has_edge(int t, NodeId u, NodeId v) const {
        const auto& nb = snapshots[t].adj[u];
        return std::binary_search(nb.begin(), nb.end(), v);
    }
};

// Weighted union of the snapshots: weight(u,v) = count(u,v) / tau, stored as
// exact integer counts so equality checks stay exact. Zero-count pairs are
// not stored.
struct AverageGraph {
    int n = 0;
    int denominator = 1;  // tau
    std::vector<std::vector<std::pair<NodeId, int>>> weighted_adj;  // (neighbor, count)

    // Scaled weighted degree: tau * degree(u, H) = sum of counts.
    std::int64_t scaled_degree(NodeId u) const {
        std::int64_t s = 0;
        for (auto [v, c] : weighted_adj[u]) s += c;
        return s;
    }
};

namespace detail {

// Sorts/dedups neighbor lists and recomputes edge counts in place.
inline void finalize_snapshot(Snapshot& g) {
    std::int64_t half = 0;
    for (auto& nb : g.adj) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        half += static_cast<std::int64_t>(nb.size());
    }
    g.edge_count = half / 2;
}

}  // namespace detail

// Builds a history from explicit per-snapshot edge lists (test and generator
// convenience). Self-loops dropped, duplicates collapsed.
inline GraphHistory make_history(int n, const std::vector<std::vector<std::pair<NodeId, NodeId>>>& edges) {
    if (n <= 0) throw DomainError("history must have at least one node");
    if (edges.empty()) throw DomainError("history must have at least one snapshot");
    GraphHistory h;
    h.n = n;
    h.snapshots.resize(edges.size());
    for (std::size_t t = 0; t < edges.size(); ++t) {
        auto& g = h.snapshots[t];
        g.adj.assign(n, {});
        for (auto [u, v] : edges[t]) {
            if (u < 0 || u >= n || v < 0 || v >= n) throw DomainError("edge endpoint out of range");
            if (u == v) continue;
            g.adj[u].push_back(v);
            g.adj[v].push_back(u);
        }
        detail::finalize_snapshot(g);
    }
    return h;
}

// Parses the external edge-list format: one `t u v` triple per line, `#`
// comments and blank lines skipped, tau = max(t)+1, labels arbitrary tokens.
inline GraphHistory load_history(std::istream& in) {
    GraphHistory h;
    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::vector<std::pair<NodeId, NodeId>>> edges;  // per snapshot

    auto intern = [&](const std::string& tok) {
        auto [it, inserted] = ids.emplace(tok, static_cast<NodeId>(ids.size()));
        if (inserted) h.labels.push_back(tok);
        return it->second;
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string t_tok, u_tok, v_tok, extra;
        if (!(ls >> t_tok)) continue;  // blank line
        if (t_tok[0] == '#') continue;
        if (!(ls >> u_tok >> v_tok)) throw ParseError("expected 't u v'", line_no);
        if (ls >> extra) throw ParseError("expected 't u v'", line_no);

        int t;
        try {
            std::size_t pos = 0;
            t = std::stoi(t_tok, &pos);
            if (pos != t_tok.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw ParseError("snapshot index is not an integer: '" + t_tok + "'", line_no);
        }
        if (t < 0) throw ParseError("negative snapshot index", line_no);

        NodeId u = intern(u_tok);
        NodeId v = intern(v_tok);
        if (static_cast<std::size_t>(t) >= edges.size()) edges.resize(t + 1);
        if (u != v) edges[t].emplace_back(u, v);
    }
    if (edges.empty() && ids.empty()) throw ParseError("empty input: no snapshots");

    h.n = static_cast<int>(ids.size());
    if (edges.empty()) edges.resize(1);  // self-loop-only input still has one snapshot
    h.snapshots.resize(edges.size());
    for (std::size_t t = 0; t < edges.size(); ++t) {
        auto& g = h.snapshots[t];
        g.adj.assign(h.n, {});
        for (auto [u, v] : edges[t]) {
            g.adj[u].push_back(v);
            g.adj[v].push_back(u);
        }
        detail::finalize_snapshot(g);
    }
    return h;
}

inline GraphHistory load_history_file(const std::string& path);

// Canonical serialization: one edge per line, ordered by (t, label, label)
// with the lexicographically smaller label first. The ordering depends only
// on labels, so save -> load -> save is a fixpoint.
inline void save_history(const GraphHistory& h, std::ostream& out) {
    for (int t = 0; t < h.tau(); ++t) {
        const auto& g = h.snapshots[t];
        std::vector<std::pair<std::string, std::string>> lines;
        lines.reserve(static_cast<std::size_t>(g.edge_count));
        for (NodeId u = 0; u < h.n; ++u)
            for (NodeId v : g.adj[u]) {
                if (u >= v) continue;
                std::string a = h.label(u), b = h.label(v);
                if (b < a) std::swap(a, b);
                lines.emplace_back(std::move(a), std::move(b));
            }
        std::sort(lines.begin(), lines.end());
        for (const auto& [a, b] : lines) out << t << ' ' << a << ' ' << b << '\n';
    }
}

// Node-induced restriction with ids remapped to [0, |S|). `original_ids` is
// the retained mapping (new id -> old id), sorted ascending.
struct Subhistory {
    GraphHistory history;
    std::vector<NodeId> original_ids;
};

inline Subhistory induced_subhistory(const GraphHistory& h, const std::vector<NodeId>& s) {
    if (s.empty()) throw DomainError("induced subhistory of the empty set");
    std::vector<NodeId> ids(s);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    if (ids.front() < 0 || ids.back() >= h.n) throw DomainError("node id out of range");

    std::vector<NodeId> remap(h.n, -1);
    for (std::size_t i = 0; i < ids.size(); ++i) remap[ids[i]] = static_cast<NodeId>(i);

    Subhistory out;
    out.original_ids = ids;
    out.history.n = static_cast<int>(ids.size());
    out.history.snapshots.resize(h.tau());
    if (!h.labels.empty()) {
        out.history.labels.reserve(ids.size());
        for (NodeId v : ids) out.history.labels.push_back(h.label(v));
    }
    for (int t = 0; t < h.tau(); ++t) {
        auto& g = out.history.snapshots[t];
        g.adj.assign(out.history.n, {});
        std::int64_t half = 0;
        for (NodeId u : ids) {
            auto& nb = g.adj[remap[u]];
            for (NodeId v : h.snapshots[t].adj[u])
                if (remap[v] >= 0) nb.push_back(remap[v]);
            half += static_cast<std::int64_t>(nb.size());
        }
        g.edge_count = half / 2;
    }
    return out;
}

// Snapshot-subset restriction (same node universe, selected snapshots only).
inline GraphHistory restrict_snapshots(const GraphHistory& h, const std::vector<int>& snaps) {
    if (snaps.empty()) throw DomainError("snapshot subset must be non-empty");
    GraphHistory out;
    out.n = h.n;
    out.labels = h.labels;
    out.snapshots.reserve(snaps.size());
    for (int t : snaps) {
        if (t < 0 || t >= h.tau()) throw DomainError("snapshot index out of range");
        out.snapshots.push_back(h.snapshots[t]);
    }
    return out;
}

inline AverageGraph build_average_graph(const GraphHistory& h) {
    AverageGraph avg;
    avg.n = h.n;
    avg.denominator = h.tau();
    avg.weighted_adj.assign(h.n, {});
    for (NodeId u = 0; u < h.n; ++u) {
        // Merge tau sorted lists, counting multiplicities.
        std::map<NodeId, int> counts;
        for (const auto& g : h.snapshots)
            for (NodeId v : g.adj[u]) ++counts[v];
        auto& out = avg.weighted_adj[u];
        out.reserve(counts.size());
        for (auto [v, c] : counts) out.emplace_back(v, c);
    }
    return avg;
}

// Structural equality under labels: same tau, same label set, and the same
// labeled edge set per snapshot.
inline bool history_equal(const GraphHistory& a, const GraphHistory& b) {
    if (a.tau() != b.tau() || a.n != b.n) return false;
    std::unordered_map<std::string, NodeId> b_ids;
    for (NodeId v = 0; v < b.n; ++v) b_ids.emplace(b.label(v), v);
    std::vector<NodeId> map_ab(a.n);
    for (NodeId v = 0; v < a.n; ++v) {
        auto it = b_ids.find(a.label(v));
        if (it == b_ids.end()) return false;
        map_ab[v] = it->second;
    }
    for (int t = 0; t < a.tau(); ++t) {
        if (a.snapshots[t].edge_count != b.snapshots[t].edge_count) return false;
        for (NodeId u = 0; u < a.n; ++u)
            for (NodeId v : a.snapshots[t].adj[u])
                if (!b.has_edge(t, map_ab[u], map_ab[v])) return false;
    }
    return true;
}

}  // namespace bff

#include <fstream>

namespace bff {

inline GraphHistory load_history_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return load_history(in);
}

}  // namespace bff
