#include "kremove/generators.hpp"
#include "kremove/improvement.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace kremove;

namespace {

TBHState state_of(const Embedding &phi, const VertexSet &b, const VertexSet &h) { return TBHState{phi, b, h}; }

Embedding map_of(std::vector<Vertex> hosts) {
    Embedding phi(static_cast<int>(hosts.size()));
    phi.map = std::move(hosts);
    return phi;
}

int b_degree(const oracle::Matrix &a, int v, const VertexSet &b) {
    int d = 0;
    b.for_each([&](Vertex w) { d += a[v][w]; });
    return d;
}

// Tag promises re-derived from the adjacency matrix, without the library validator.
std::optional<std::string> independent_defect(const Graph &g, const RootedTree &t0, const TBHState &s, int delta,
                                              const Outcome &o) {
    const auto a = oracle::matrix_of(g);
    const int n = g.order(), m = t0.order();
    std::vector<bool> in_t(static_cast<std::size_t>(n)), in_h(static_cast<std::size_t>(n));
    for (Vertex x = 0; x < m; ++x)
        in_t[s.embedding[x]] = true;
    s.h.for_each([&](Vertex v) { in_h[v] = true; });
    switch (o.tag) {
    case OutcomeTag::A:
        for (int v = 0; v < n; ++v)
            for (int w = 0; w < n; ++w)
                if (in_h[v] && in_t[w] && a[v][w])
                    return "H touches T";
        return std::nullopt;
    case OutcomeTag::B:
        for (int v = 0; v < n; ++v)
            if ((in_h[v] || in_t[v]) && b_degree(a, v, s.b) > delta - m)
                return "B-degree too high at " + std::to_string(v);
        return std::nullopt;
    case OutcomeTag::C: {
        if (o.vertex < 0 || o.vertex >= n || !(in_h[o.vertex] || in_t[o.vertex]))
            return "spared vertex outside H and T";
        if (b_degree(a, o.vertex, s.b) < delta - m + 1)
            return "spared vertex has low B-degree";
        if (o.embedding.order() != m)
            return "wrong map size";
        std::vector<bool> used(static_cast<std::size_t>(n));
        for (Vertex x = 0; x < m; ++x) {
            const int h = o.embedding[x];
            if (h < 0 || h >= n || used[h] || h == o.vertex || !(in_h[h] || in_t[h]))
                return "replacement tree leaves H + T - v or repeats a vertex";
            used[h] = true;
        }
        for (auto [p, c] : t0.edges())
            if (!a[o.embedding[p]][o.embedding[c]])
                return "replacement tree misses an edge";
        return std::nullopt;
    }
    }
    return "bad tag";
}

void expect_valid(const Graph &g, const RootedTree &t0, const TBHState &s, int delta, const Outcome &o) {
    EXPECT_FALSE(outcome_defect(g, t0, s, delta, o)) << *outcome_defect(g, t0, s, delta, o);
    auto bad = independent_defect(g, t0, s, delta, o);
    EXPECT_FALSE(bad) << *bad << " (" << o.via << ")";
}

} // namespace

TEST(ImprovementState, RejectsBrokenStates) {
    const Graph g = complete_graph(6);
    const RootedTree t = path_tree(2);
    const auto phi = map_of({0, 1});
    EXPECT_THROW(improve_or_certify(g, t, state_of(phi, VertexSet(6, {2, 3}), VertexSet(6, {4})), 3),
                 std::invalid_argument); // vertex 5 uncovered
    EXPECT_THROW(improve_or_certify(g, t, state_of(phi, VertexSet(6, {1, 2, 3}), VertexSet(6, {4, 5})), 3),
                 std::invalid_argument);
    EXPECT_THROW(improve_or_certify(g, t, state_of(phi, VertexSet(6, {2, 3}), VertexSet(6, {4, 5})), 6),
                 std::invalid_argument); // delta above min degree
    EXPECT_THROW(improve_or_certify(g, t, state_of(phi, VertexSet(6, {2, 3}), VertexSet(6, {4, 5})), 1),
                 std::invalid_argument); // delta below m
    EXPECT_THROW(improve_or_certify(g, t, state_of(map_of({0, 0}), VertexSet(6, {2, 3}), VertexSet(6, {1, 4, 5})), 3),
                 std::invalid_argument);
}

TEST(ImprovementState, HUntouchedGivesA) {
    // H empty, so no tree vertex touches it
    const Graph g = complete_graph(6);
    const RootedTree t = path_tree(2);
    const auto s = state_of(map_of({0, 1}), VertexSet(6, {2, 3, 4, 5}), VertexSet(6));
    const Outcome o = improve_or_certify(g, t, s, 3);
    EXPECT_EQ(o.tag, OutcomeTag::A);
    expect_valid(g, t, s, 3, o);
    EXPECT_EQ(std::get<Outcome>(classify_state(g, t, s, 3)).tag, OutcomeTag::A);
}

TEST(ImprovementState, LowBDegreesGiveB) {
    // K6, B = {5}: every B-degree is 1 <= delta - m = 2
    const Graph g = complete_graph(6);
    const RootedTree t = path_tree(3);
    const auto s = state_of(map_of({0, 1, 2}), VertexSet(6, {5}), VertexSet(6, {3, 4}));
    const Outcome o = improve_or_certify(g, t, s, 5);
    EXPECT_EQ(o.tag, OutcomeTag::B);
    expect_valid(g, t, s, 5, o);
}

TEST(ImprovementState, HighVertexInHGivesC) {
    // K9, B = {0..3} (a K4 block), tree = path on 4,5,6, H = {7,8}; delta = 4 makes every
    // vertex high, and the smallest one in H is spared
    const Graph g = complete_graph(9);
    const RootedTree t = path_tree(3);
    const auto s = state_of(map_of({4, 5, 6}), VertexSet(9, {0, 1, 2, 3}), VertexSet(9, {7, 8}));
    const Outcome o = improve_or_certify(g, t, s, 4);
    EXPECT_EQ(o.tag, OutcomeTag::C);
    EXPECT_EQ(o.vertex, 7);
    expect_valid(g, t, s, 4, o);
    EXPECT_EQ(o.embedding.image(9) & VertexSet(9, {0, 1, 2, 3, 7}), VertexSet(9));
}

TEST(ImprovementState, SingleVertexPatternMovesIntoH) {
    // tree = one vertex on 0, which sees both of B = {1, 2} and the pendant H = {3}
    const Graph g = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}});
    const RootedTree t = path_tree(1);
    const auto s = state_of(map_of({0}), VertexSet(4, {1, 2}), VertexSet(4, {3}));
    const Outcome o = improve_or_certify(g, t, s, 1);
    EXPECT_EQ(o.tag, OutcomeTag::C);
    EXPECT_EQ(o.vertex, 0);
    EXPECT_EQ(o.embedding[0], 3);
    expect_valid(g, t, s, 1, o);
}

TEST(ImprovementState, ContextFieldsOnConstructedStates) {
    SplitMix64 rng(47);
    int contexts = 0;
    for (int trial = 0; trial < 3000 && contexts < 200; ++trial) {
        auto shaped = fixtures::shaped_state(rng);
        if (!shaped)
            continue;
        auto c = classify_state(shaped->graph, shaped->tree, shaped->state, shaped->delta);
        auto *ctx = std::get_if<ImprovementContext>(&c);
        if (!ctx)
            continue;
        ++contexts;
        const auto &phi = shaped->state.embedding;
        const RootedTree &t = ctx->tree;
        EXPECT_TRUE(ctx->touch.contains(ctx->u));
        EXPECT_EQ(t.root(), phi.preimage(ctx->u));
        EXPECT_EQ(t.parent(ctx->w2), ctx->w1);
        EXPECT_TRUE(ctx->high.contains(phi[ctx->w2]));
        EXPECT_TRUE(ctx->touch.contains(phi[ctx->w1]));
        EXPECT_TRUE(ctx->inner.contains(ctx->w2));
        EXPECT_TRUE(ctx->core.is_subset_of(ctx->inner));
        for (const auto &p : ctx->pendants) {
            EXPECT_TRUE(ctx->inner.contains(p.parent));
            EXPECT_FALSE(ctx->inner.contains(p.root));
            EXPECT_EQ(t.parent(p.root), p.parent);
        }
    }
    EXPECT_GT(contexts, 50);
}

// Hand-shaped states reach the constructions behind outcome C; every outcome must validate.
TEST(ImprovementState, ConstructedStatesReachEveryConstruction) {
    SplitMix64 rng(53);
    std::map<std::string, int> via;
    int states = 0;
    for (int trial = 0; trial < 20000; ++trial) {
        auto shaped = fixtures::shaped_state(rng);
        if (!shaped)
            continue;
        ++states;
        const Outcome o = improve_or_certify(shaped->graph, shaped->tree, shaped->state, shaped->delta);
        ++via[o.via];
        expect_valid(shaped->graph, shaped->tree, shaped->state, shaped->delta, o);
        if (::testing::Test::HasFailure())
            break;
    }
    EXPECT_GT(states, 5000);
    EXPECT_GT(via["claim 2"], 0);
    EXPECT_GT(via["case 1"], 0);
    EXPECT_GT(via["case 2"], 0);
}

// Small hosts, one embedding each, and every split of the rest into B and H.
TEST(ImprovementState, ExhaustiveSplitsOnSmallHosts) {
    SplitMix64 rng(59);
    int outcomes = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const int m = 2 + static_cast<int>(rng.below(3));
        const int n = m + 3 + static_cast<int>(rng.below(static_cast<std::uint64_t>(10 - m - 3)));
        const int delta = m + static_cast<int>(rng.below(2));
        const Graph g = random_k_connected_graph(n, 1, delta, rng.next());
        const RootedTree t = random_tree(m, rng.next());
        const Embedding phi = greedy_embed(g, t);
        const auto rest = phi.image(n).complement().members();
        for (unsigned mask = 0; mask < (1u << rest.size()); ++mask) {
            VertexSet b(n), h(n);
            for (std::size_t i = 0; i < rest.size(); ++i)
                (mask >> i & 1u ? b : h).insert(rest[i]);
            const TBHState s{phi, b, h};
            const Outcome o = improve_or_certify(g, t, s, delta);
            expect_valid(g, t, s, delta, o);
            ++outcomes;
        }
        if (::testing::Test::HasFailure())
            break;
    }
    EXPECT_GT(outcomes, 3000);
}
