#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "bff/errors.hpp"
#include "bff/graph.hpp"

namespace bff {

// Deterministic cross-platform randomness: mt19937_64 (output sequence is
// pinned by the standard) with splitmix64 stream derivation, plus hand-rolled
// draws so no libstdc++ distribution internals leak into the output.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
    return splitmix64(splitmix64(splitmix64(a) ^ b) ^ c);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // Uniform in [0, n), rejection-sampled.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

    // Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return unit() < p; }

    // Number of successes before the first failure; mean p/(1-p).
    int geometric(double p) {
        int k = 0;
        while (bernoulli(p)) ++k;
        return k;
    }

  private:
    std::mt19937_64 eng_;
};

// A dense subgraph to plant: `size` nodes, each pair gaining an edge with
// `edge_prob` independently in every listed snapshot.
struct PlantSpec {
    int size = 0;
    double edge_prob = 0.0;
    std::vector<int> snapshots;     // empty means "all snapshots"
    std::vector<NodeId> nodes;      // explicit choice; empty means random
    std::uint64_t choice_seed = 0;  // used when nodes is empty
};

struct InstanceSpec {
    int n = 1;
    int tau = 1;
    double p_forward = 0.35;
    double p_backward = 0.35;
    std::uint64_t seed = 0;
    std::vector<PlantSpec> plants;

    void validate() const {
        if (n < 1) throw DomainError("spec: n must be >= 1");
        if (tau < 1) throw DomainError("spec: tau must be >= 1");
        auto prob_ok = [](double p) { return p >= 0.0 && p <= 1.0; };
        if (!prob_ok(p_forward) || !prob_ok(p_backward))
            throw DomainError("spec: burning probabilities must be in [0,1]");
        for (const auto& pl : plants) {
            if (pl.size < 0 || pl.size > n) throw DomainError("spec: plant size out of range");
            if (!prob_ok(pl.edge_prob)) throw DomainError("spec: plant edge_prob out of range");
            for (int t : pl.snapshots)
                if (t < 0 || t >= tau) throw DomainError("spec: plant snapshot out of range");
            for (NodeId v : pl.nodes)
                if (v < 0 || v >= n) throw DomainError("spec: plant node out of range");
            if (!pl.nodes.empty() && static_cast<int>(pl.nodes.size()) != pl.size)
                throw DomainError("spec: plant node list size mismatch");
        }
    }
};

namespace detail {

// One forest-fire snapshot. Nodes arrive in id order; each new node picks a
// uniform ambassador and burns outward with geometric fan-outs (forward
// links follow edges the neighbor created, backward links follow edges
// created toward it), then links to every burned node.
inline std::vector<std::pair<NodeId, NodeId>> forest_fire_edges(int n, double p_forward,
                                                                double p_backward, Rng& rng) {
    std::vector<std::pair<NodeId, NodeId>> edges;
    std::vector<std::vector<NodeId>> out_adj(n), in_adj(n);
    std::vector<int> visited(n, -1);
    std::vector<NodeId> frontier, picks;

    for (NodeId v = 1; v < n; ++v) {
        const auto w = static_cast<NodeId>(rng.below(v));
        visited[v] = v;
        frontier.clear();
        frontier.push_back(w);
        visited[w] = v;
        std::size_t qi = 0;
        while (qi < frontier.size()) {
            const NodeId u = frontier[qi++];
            const int fwd = rng.geometric(p_forward);
            const int bwd = rng.geometric(p_backward);
            // Sample without replacement from the unvisited neighbors.
            auto burn_from = [&](const std::vector<NodeId>& cand, int want) {
                if (want <= 0) return;
                picks.clear();
                for (NodeId c : cand)
                    if (visited[c] != v) picks.push_back(c);
                for (int i = 0; i < want && !picks.empty(); ++i) {
                    const auto j = static_cast<std::size_t>(rng.below(picks.size()));
                    const NodeId b = picks[j];
                    picks[j] = picks.back();
                    picks.pop_back();
                    visited[b] = v;
                    frontier.push_back(b);
                }
            };
            burn_from(out_adj[u], fwd);
            burn_from(in_adj[u], bwd);
        }
        for (NodeId b : frontier) {
            edges.emplace_back(v, b);
            out_adj[v].push_back(b);
            in_adj[b].push_back(v);
        }
    }
    return edges;
}

}  // namespace detail

// Generated history plus the planted node sets (ground truth).
struct GeneratedInstance {
    GraphHistory history;
    std::vector<std::vector<NodeId>> ground_truth;  // one sorted set per plant
};

// tau independent forest-fire snapshots with planted dense subgraphs.
// Fully deterministic given the spec: the fire for snapshot t draws from its
// own stream, and each (plant, snapshot) pair from another, so dropping the
// plants reproduces the bare history bit-exactly. Random plant node choices
// exclude nodes already taken by earlier plants in the same spec.
inline GeneratedInstance generate_history(const InstanceSpec& spec) {
    spec.validate();
    GeneratedInstance out;

    std::vector<std::vector<std::pair<NodeId, NodeId>>> edges(spec.tau);
    for (int t = 0; t < spec.tau; ++t) {
        Rng rng(mix_seed(spec.seed, 0xf1e5, static_cast<std::uint64_t>(t)));
        edges[t] = detail::forest_fire_edges(spec.n, spec.p_forward, spec.p_backward, rng);
    }

    std::vector<char> taken(spec.n, 0);
    for (std::size_t p = 0; p < spec.plants.size(); ++p) {
        const PlantSpec& plant = spec.plants[p];
        std::vector<NodeId> members = plant.nodes;
        if (members.empty() && plant.size > 0) {
            Rng rng(mix_seed(spec.seed, 0xc401ce ^ plant.choice_seed, p));
            std::vector<char> chosen(spec.n, 0);
            while (static_cast<int>(members.size()) < plant.size) {
                const auto v = static_cast<NodeId>(rng.below(spec.n));
                if (taken[v] || chosen[v]) continue;
                chosen[v] = 1;
                members.push_back(v);
            }
        }
        std::sort(members.begin(), members.end());
        for (NodeId v : members) taken[v] = 1;

        std::vector<int> snaps = plant.snapshots;
        if (snaps.empty()) {
            snaps.resize(spec.tau);
            for (int t = 0; t < spec.tau; ++t) snaps[t] = t;
        }
        for (int t : snaps) {
            Rng rng(mix_seed(spec.seed, 0xed6e, (p << 32) ^ static_cast<std::uint64_t>(t)));
            for (std::size_t i = 0; i < members.size(); ++i)
                for (std::size_t j = i + 1; j < members.size(); ++j)
                    if (rng.bernoulli(plant.edge_prob))
                        edges[t].emplace_back(members[i], members[j]);
        }
        out.ground_truth.push_back(std::move(members));
    }

    out.history = make_history(spec.n, edges);
    return out;
}

// The appendix counterexample families. Each returns the history plus the
// proof's optimal node set.
enum class AdversarialFamily { prop4, prop5, prop6, prop7 };

struct AdversarialInstance {
    GraphHistory history;
    std::vector<NodeId> optimal;
};

// Clique of n-1 nodes with a pendant edge (u,v) that is the only edge of the
// last snapshot. Optimal for f_am: the clique, value (n-2)(tau-1)/tau.
inline AdversarialInstance adversarial_prop4(int n, int tau) {
    if (n < 3 || tau < 2) throw DomainError("prop4 needs n >= 3, tau >= 2");
    const NodeId u = 0, v = n - 1;
    std::vector<std::vector<std::pair<NodeId, NodeId>>> edges(tau);
    for (int t = 0; t < tau - 1; ++t) {
        for (NodeId a = 0; a < n - 1; ++a)
            for (NodeId b = a + 1; b < n - 1; ++b) edges[t].emplace_back(a, b);
        edges[t].emplace_back(u, v);
    }
    edges[tau - 1].emplace_back(u, v);
    AdversarialInstance out;
    out.history = make_history(n, edges);
    for (NodeId a = 0; a < n - 1; ++a) out.optimal.push_back(a);
    return out;
}

// Complete bxb bipartite graph plus helper nodes u, v (hubs on alternating
// halves of the timeline) and s (connected to everything except in the last
// snapshot). Optimal for f_am: the 2b bipartite nodes, value b.
inline AdversarialInstance adversarial_prop5(int b, int tau) {
    if (b < 1 || tau < 2 || tau % 2 != 0) throw DomainError("prop5 needs b >= 1 and even tau >= 2");
    const int n = 2 * b + 3;
    const NodeId u = 2 * b, v = 2 * b + 1, s = 2 * b + 2;
    std::vector<std::vector<std::pair<NodeId, NodeId>>> edges(tau);
    for (int t = 0; t < tau; ++t) {
        auto& e = edges[t];
        for (NodeId l = 0; l < b; ++l)
            for (NodeId r = b; r < 2 * b; ++r) e.emplace_back(l, r);
        e.emplace_back(u, v);
        if (t < tau / 2)
            for (NodeId w = 0; w < 2 * b; ++w) e.emplace_back(u, w);
        else
            for (NodeId w = 0; w < 2 * b; ++w) e.emplace_back(v, w);
        if (t < tau - 1)
            for (NodeId w = 0; w < s; ++w) e.emplace_back(s, w);
        else {
            e.emplace_back(s, u);
            e.emplace_back(s, v);
        }
    }
    AdversarialInstance out;
    out.history = make_history(n, edges);
    for (NodeId w = 0; w < 2 * b; ++w) out.optimal.push_back(w);
    return out;
}

// A = m nodes forming a clique minus one node per snapshot (node A[t] sits
// out of snapshot t), B = an m^2-cycle, tau = m. The proof's optimal set for
// f_ma is A with value (m-1)(m-2)/m. Note B (a 2-regular cycle, f_ma = 2)
// beats A for m < 5; the proof's ratio is asymptotic.
inline AdversarialInstance adversarial_prop6(int m) {
    if (m < 3) throw DomainError("prop6 needs m >= 3");
    const int tau = m;
    const int n = m + m * m;
    std::vector<std::vector<std::pair<NodeId, NodeId>>> edges(tau);
    for (int t = 0; t < tau; ++t) {
        auto& e = edges[t];
        for (NodeId a = 0; a < m; ++a) {
            if (a == t) continue;
            for (NodeId b = a + 1; b < m; ++b)
                if (b != t) e.emplace_back(a, b);
        }
        for (int i = 0; i < m * m; ++i)
            e.emplace_back(m + i, m + (i + 1) % (m * m));
    }
    AdversarialInstance out;
    out.history = make_history(n, edges);
    for (NodeId a = 0; a < m; ++a) out.optimal.push_back(a);
    return out;
}

// Two cliques: A of size m (alive in all snapshots) and B of size m^2 (edge-
// less in the last of the tau = m snapshots). Optimal for f_ma: A, value m-1.
inline AdversarialInstance adversarial_prop7(int m) {
    if (m < 2) throw DomainError("prop7 needs m >= 2");
    const int tau = m;
    const int n = m + m * m;
    std::vector<std::vector<std::pair<NodeId, NodeId>>> edges(tau);
    for (int t = 0; t < tau; ++t) {
        auto& e = edges[t];
        for (NodeId a = 0; a < m; ++a)
            for (NodeId b = a + 1; b < m; ++b) e.emplace_back(a, b);
        if (t < tau - 1)
            for (NodeId a = m; a < n; ++a)
                for (NodeId b = a + 1; b < n; ++b) e.emplace_back(a, b);
    }
    AdversarialInstance out;
    out.history = make_history(n, edges);
    for (NodeId a = 0; a < m; ++a) out.optimal.push_back(a);
    return out;
}

inline AdversarialInstance adversarial_instance(AdversarialFamily family, int size_param,
                                                int tau = 0) {
    switch (family) {
        case AdversarialFamily::prop4: return adversarial_prop4(size_param, tau);
        case AdversarialFamily::prop5: return adversarial_prop5(size_param, tau);
        case AdversarialFamily::prop6: return adversarial_prop6(size_param);
        case AdversarialFamily::prop7: return adversarial_prop7(size_param);
    }
    throw DomainError("unknown adversarial family");
}

// Seeded G(n, p)-per-snapshot history; small-instance fixture generator for
// the oracle-backed property tests.
inline GraphHistory random_history(int n, int tau, double edge_prob, std::uint64_t seed) {
    std::vector<std::vector<std::pair<NodeId, NodeId>>> edges(tau);
    for (int t = 0; t < tau; ++t) {
        Rng rng(mix_seed(seed, 0x6e9b, static_cast<std::uint64_t>(t)));
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v)
                if (rng.bernoulli(edge_prob)) edges[t].emplace_back(u, v);
    }
    return make_history(n, edges);
}

}  // namespace bff
