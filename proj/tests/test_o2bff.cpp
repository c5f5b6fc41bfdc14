#include <catch2/catch_amalgamated.hpp>

#include "bff/o2bff.hpp"
#include "bff/oracle.hpp"
#include "bff/synthetic.hpp"
#include "test_util.hpp"

using namespace bff;
using bff_test::iota_nodes;

namespace {

GraphHistory k5_in_middle() {
    // K5 on {0..4} alive only in snapshots 1..3 of tau=6; snapshots 0, 4, 5
    // are empty. Only constructible programmatically (trailing empty
    // snapshots have no edge-list representation).
    std::vector<std::vector<std::pair<NodeId, NodeId>>> edges(6);
    for (int t = 1; t <= 3; ++t)
        for (NodeId u = 0; u < 5; ++u)
            for (NodeId v = u + 1; v < 5; ++v) edges[t].emplace_back(u, v);
    return make_history(5, edges);
}

}  // namespace

TEST_CASE("best_snapshots") {
    // Per-snapshot avg degrees (3, 1, 2, 3) for the full set: K4, one edge,
    // path, K4.
    const GraphHistory h = make_history(
        4, {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}},
            {{0, 1}, {2, 3}},
            {{0, 1}, {1, 2}, {2, 3}},
            {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}});
    const auto all = iota_nodes(4);
    CHECK(density(DensityKind::avg_degree, all, h.snapshots[0]) == Rational(3));
    CHECK(density(DensityKind::avg_degree, all, h.snapshots[1]) == Rational(1));
    CHECK(density(DensityKind::avg_degree, all, h.snapshots[2]) == Rational(3, 2));

    CHECK(best_snapshots(all, h, 2, DensityKind::avg_degree) == std::vector<int>{0, 3});
    CHECK(best_snapshots(all, h, 4, DensityKind::avg_degree) == std::vector<int>{0, 1, 2, 3});

    // Ties go to the smaller index.
    const GraphHistory same = bff_test::clique_plus_isolated(4, 3, 3);
    CHECK(best_snapshots(iota_nodes(3), same, 2, DensityKind::min_degree) ==
          std::vector<int>{0, 1});

    CHECK_THROWS_AS(best_snapshots(all, h, 0, DensityKind::avg_degree), DomainError);
    CHECK_THROWS_AS(best_snapshots(all, h, 5, DensityKind::avg_degree), DomainError);
    CHECK_THROWS_AS(best_snapshots({}, h, 2, DensityKind::avg_degree), DomainError);
}

TEST_CASE("iterative solver finds the planted window with contiguous init") {
    const GraphHistory h = k5_in_middle();
    const O2Solution sol = o2bff_iterative(h, AggregateKind::mm, 3, InitKind::contiguous);
    CHECK(sol.snapshots == std::vector<int>{1, 2, 3});
    CHECK(sol.nodes == iota_nodes(5));
    CHECK(sol.score == Rational(4));
}

TEST_CASE("init_contiguous") {
    SECTION("k equal tau is the single full window") {
        const GraphHistory h = random_history(6, 3, 0.5, 2);
        const auto [snaps, nodes] = init_contiguous(h, AggregateKind::mm, 3);
        CHECK(snaps == std::vector<int>{0, 1, 2});
    }
    SECTION("unique positive window wins") {
        const auto [snaps, nodes] = init_contiguous(k5_in_middle(), AggregateKind::mm, 3);
        CHECK(snaps == std::vector<int>{1, 2, 3});
        CHECK(nodes == iota_nodes(5));
    }
    SECTION("identical snapshots tie-break to the earliest window") {
        const GraphHistory h = bff_test::clique_plus_isolated(5, 4, 4);
        const auto [snaps, nodes] = init_contiguous(h, AggregateKind::mm, 2);
        CHECK(snaps == std::vector<int>{0, 1});
    }
}

TEST_CASE("init_at_least_k") {
    SECTION("identical snapshots include the densest clique for any k") {
        const GraphHistory h = bff_test::clique_plus_isolated(6, 4, 3);
        for (int k = 1; k <= 3; ++k) {
            const auto [snaps, nodes] = init_at_least_k(h, AggregateKind::mm, k);
            CHECK(nodes == std::vector<NodeId>{0, 1, 2, 3});
        }
    }
    SECTION("k=1 takes the union of per-snapshot solutions") {
        // Disjoint triangles in separate snapshots.
        const GraphHistory h = make_history(
            6, {{{0, 1}, {1, 2}, {2, 0}}, {{3, 4}, {4, 5}, {5, 3}}});
        const auto [snaps, nodes] = init_at_least_k(h, AggregateKind::mm, 1);
        CHECK(nodes == iota_nodes(6));
    }
    SECTION("disjoint per-snapshot solutions with k=tau trigger the fallback") {
        const GraphHistory h = make_history(
            6, {{{0, 1}, {1, 2}, {2, 0}}, {{3, 4}, {4, 5}, {5, 3}}});
        const O2Solution sol = o2bff_iterative(h, AggregateKind::mm, 2, InitKind::at_least_k);
        CHECK(sol.fallback_used);
    }
}

TEST_CASE("incremental density") {
    SECTION("finds the unique positive pair") {
        std::vector<std::vector<std::pair<NodeId, NodeId>>> edges(6);
        for (int t : {4, 5})
            for (NodeId u = 0; u < 6; ++u)
                for (NodeId v = u + 1; v < 6; ++v) edges[t].emplace_back(u, v);
        for (int t : {0, 1, 2, 3}) edges[t].emplace_back(6, 7);
        const GraphHistory h = make_history(8, edges);
        const O2Solution sol = o2bff_incremental_density(h, AggregateKind::mm, 2);
        CHECK(sol.snapshots == std::vector<int>{4, 5});
        CHECK(sol.nodes == iota_nodes(6));
        CHECK(sol.score == Rational(5));
    }
    SECTION("k below 2 is a domain error") {
        const GraphHistory h = random_history(5, 3, 0.4, 1);
        CHECK_THROWS_AS(o2bff_incremental_density(h, AggregateKind::mm, 1), DomainError);
    }
}

TEST_CASE("incremental overlap") {
    SECTION("picks the most similar per-snapshot solutions first") {
        // Solutions per snapshot: {0,1}, {1,2}, {5,6}; Jaccard({0,1},{1,2}) = 1/3
        // beats the disjoint pairs.
        const GraphHistory h = make_history(7, {{{0, 1}}, {{1, 2}}, {{5, 6}}});
        const O2Solution sol = o2bff_incremental_overlap(h, AggregateKind::aa, 2);
        CHECK(sol.snapshots == std::vector<int>{0, 1});
    }
    SECTION("identical snapshots tie-break to the first pair") {
        const GraphHistory h = bff_test::clique_plus_isolated(5, 3, 4);
        const O2Solution sol = o2bff_incremental_overlap(h, AggregateKind::mm, 2);
        CHECK(sol.snapshots == std::vector<int>{0, 1});
    }
}

TEST_CASE("k equal tau: every solver coincides with find_bff on the full history") {
    const GraphHistory h = random_history(9, 4, 0.4, 31);
    for (AggregateKind kind : {AggregateKind::mm, AggregateKind::aa}) {
        const Solution full = find_bff(h, kind);
        for (InitKind init : {InitKind::random_k, InitKind::contiguous, InitKind::at_least_k}) {
            const O2Solution sol = o2bff_iterative(h, kind, 4, init, {.seed = 17});
            INFO("iterative " << to_string(init) << " kind=" << to_string(kind));
            CHECK(sol.nodes == full.nodes);
            CHECK(sol.score == full.score);
            CHECK(sol.snapshots == std::vector<int>{0, 1, 2, 3});
        }
        const O2Solution d = o2bff_incremental_density(h, kind, 4);
        CHECK(d.nodes == full.nodes);
        CHECK(d.score == full.score);
        const O2Solution o = o2bff_incremental_overlap(h, kind, 4);
        CHECK(o.nodes == full.nodes);
        CHECK(o.score == full.score);
    }
}

TEST_CASE("heuristic soundness against the exact O2BFF oracle") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const int tau = 3 + static_cast<int>(seed % 3);
        const GraphHistory h = random_history(8, tau, 0.4, seed ^ 0x02b);
        for (int k : {2, 3}) {
            if (k > tau) continue;
            const O2Solution oracle = brute_force_o2bff(h, AggregateKind::mm, k);
            auto check_one = [&](const O2Solution& sol) {
                INFO("seed=" << seed << " k=" << k << " solver=" << sol.solver);
                CHECK(sol.score <= oracle.score);
                CHECK(aggregate_density(AggregateKind::mm, sol.nodes,
                                        restrict_snapshots(h, sol.snapshots)) == sol.score);
                ++checked;
            };
            for (InitKind init : {InitKind::random_k, InitKind::contiguous, InitKind::at_least_k})
                check_one(o2bff_iterative(h, AggregateKind::mm, k, init, {.seed = seed}));
            check_one(o2bff_incremental_density(h, AggregateKind::mm, k));
            check_one(o2bff_incremental_overlap(h, AggregateKind::mm, k));
        }
    }
    CHECK(checked >= 50);
}

TEST_CASE("iterative incumbent trace is non-decreasing and bounded") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const GraphHistory h = random_history(10, 5, 0.35, seed ^ 0x17);
        const O2Solution sol =
            o2bff_iterative(h, AggregateKind::aa, 3, InitKind::random_k, {.seed = seed});
        CHECK(sol.iterations <= 100);
        for (std::size_t i = 1; i < sol.score_trace.size(); ++i)
            CHECK(sol.score_trace[i - 1] <= sol.score_trace[i]);
    }
}

TEST_CASE("best_snapshots is exactly optimal for a fixed set") {
    // Enumerate all k-subsets and compare against the top-k selection.
    const GraphHistory h = random_history(7, 5, 0.4, 77);
    const std::vector<NodeId> s = {0, 1, 2, 3};
    for (AggregateKind kind : {AggregateKind::mm, AggregateKind::ma, AggregateKind::aa}) {
        const DensityKind inner = inner_density(kind);
        for (int k = 1; k <= 5; ++k) {
            const auto chosen = best_snapshots(s, h, k, inner);
            const Rational chosen_f = aggregate_density(kind, s, restrict_snapshots(h, chosen));
            // All k-subsets of {0..4}.
            std::vector<int> combo(k);
            for (int i = 0; i < k; ++i) combo[i] = i;
            while (true) {
                const Rational f = aggregate_density(kind, s, restrict_snapshots(h, combo));
                CHECK(f <= chosen_f);
                int i = k - 1;
                while (i >= 0 && combo[i] == 5 - k + i) --i;
                if (i < 0) break;
                ++combo[i];
                for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
            }
        }
    }
}

TEST_CASE("k out of range is rejected") {
    const GraphHistory h = random_history(5, 3, 0.4, 9);
    CHECK_THROWS_AS(o2bff_iterative(h, AggregateKind::mm, 0, InitKind::random_k), DomainError);
    CHECK_THROWS_AS(o2bff_iterative(h, AggregateKind::mm, 4, InitKind::random_k), DomainError);
}
