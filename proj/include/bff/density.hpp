#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "bff/errors.hpp"
#include "bff/graph.hpp"
#include "bff/rational.hpp"

namespace bff {

// Per-snapshot density: average degree 2|E(S)|/|S| or minimum induced degree.
enum class DensityKind { avg_degree, min_degree };

// The four aggregate densities: {min, avg} over time composed with
// {min-degree, avg-degree} per snapshot. First letter = time aggregator,
// second = per-snapshot density (mm = min over time of min degree, ...).
enum class AggregateKind { mm, ma, am, aa };

inline DensityKind inner_density(AggregateKind k) {
    return (k == AggregateKind::mm || k == AggregateKind::am) ? DensityKind::min_degree
                                                              : DensityKind::avg_degree;
}

inline bool time_aggregator_is_min(AggregateKind k) {
    return k == AggregateKind::mm || k == AggregateKind::ma;
}

inline std::string to_string(AggregateKind k) {
    switch (k) {
        case AggregateKind::mm: return "mm";
        case AggregateKind::ma: return "ma";
        case AggregateKind::am: return "am";
        case AggregateKind::aa: return "aa";
    }
    return "?";
}

inline AggregateKind aggregate_kind_from_string(const std::string& s) {
    if (s == "mm") return AggregateKind::mm;
    if (s == "ma") return AggregateKind::ma;
    if (s == "am") return AggregateKind::am;
    if (s == "aa") return AggregateKind::aa;
    throw DomainError("unknown density '" + s + "' (expected mm|ma|am|aa)");
}

namespace detail {

// Induced edge count and min induced degree of S in one snapshot.
// `in_s` is a scratch membership mask over the full universe.
inline std::pair<std::int64_t, std::int64_t> induced_stats(const Snapshot& g,
                                                           const std::vector<NodeId>& s,
                                                           const std::vector<char>& in_s) {
    std::int64_t half = 0;
    std::int64_t min_deg = -1;
    for (NodeId u : s) {
        std::int64_t d = 0;
        for (NodeId v : g.adj[u])
            if (in_s[v]) ++d;
        half += d;
        if (min_deg < 0 || d < min_deg) min_deg = d;
    }
    return {half / 2, min_deg < 0 ? 0 : min_deg};
}

inline std::vector<char> membership(int n, const std::vector<NodeId>& s) {
    std::vector<char> in_s(n, 0);
    for (NodeId v : s) {
        if (v < 0 || v >= n) throw DomainError("node id out of range");
        in_s[v] = 1;
    }
    return in_s;
}

}  // namespace detail

// d(S, G): average or minimum degree of the subgraph induced by S.
// A singleton has density 0 under both kinds; the empty set is an error.
inline Rational density(DensityKind kind, const std::vector<NodeId>& s, const Snapshot& g) {
    if (s.empty()) throw DomainError("density of the empty set");
    auto in_s = detail::membership(static_cast<int>(g.adj.size()), s);
    auto [m, min_deg] = detail::induced_stats(g, s, in_s);
    if (kind == DensityKind::avg_degree) return Rational(2 * m, static_cast<std::int64_t>(s.size()));
    return Rational(min_deg);
}

// f(S, G) per Definition 2: aggregate the per-snapshot densities with min or
// average over time. Exact rational arithmetic throughout.
inline Rational aggregate_density(AggregateKind kind, const std::vector<NodeId>& s,
                                  const GraphHistory& h) {
    if (s.empty()) throw DomainError("aggregate density of the empty set");
    if (h.tau() < 1) throw DomainError("history with no snapshots");
    auto in_s = detail::membership(h.n, s);
    const auto sz = static_cast<std::int64_t>(s.size());
    const DensityKind inner = inner_density(kind);

    if (time_aggregator_is_min(kind)) {
        bool first = true;
        Rational best;
        for (const auto& g : h.snapshots) {
            auto [m, min_deg] = detail::induced_stats(g, s, in_s);
            Rational d = inner == DensityKind::avg_degree ? Rational(2 * m, sz) : Rational(min_deg);
            if (first || d < best) {
                best = d;
                first = false;
            }
        }
        return best;
    }
    // Average over time: sum the integer numerators first, divide once.
    std::int64_t acc = 0;  // sum of 2*m_t (aa) or sum of min degrees (am)
    for (const auto& g : h.snapshots) {
        auto [m, min_deg] = detail::induced_stats(g, s, in_s);
        acc += inner == DensityKind::avg_degree ? 2 * m : min_deg;
    }
    if (inner == DensityKind::avg_degree) return Rational(acc, sz * h.tau());
    return Rational(acc, h.tau());
}

// Average weighted degree of the induced average graph. Equals
// aggregate_density(aa, S, h) exactly for h's average graph.
inline Rational density_on_average_graph(const std::vector<NodeId>& s, const AverageGraph& avg) {
    if (s.empty()) throw DomainError("density of the empty set");
    auto in_s = detail::membership(avg.n, s);
    std::int64_t scaled_half = 0;  // sum over u in S of scaled induced degree
    for (NodeId u : s)
        for (auto [v, c] : avg.weighted_adj[u])
            if (in_s[v]) scaled_half += c;
    // (2 * sum of induced weights) / |S|, with weights = count/denominator.
    return Rational(scaled_half, static_cast<std::int64_t>(s.size()) * avg.denominator);
}

}  // namespace bff
