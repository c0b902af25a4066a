#pragma once

#include "kremove/embedding.hpp"
#include "kremove/errors.hpp"
#include "kremove/graph.hpp"
#include "kremove/tree.hpp"
#include "kremove/vertex_set.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace kremove {

/// An embedded copy of the pattern plus a partition of the rest of the host into B and H.
struct TBHState {
    Embedding embedding;
    VertexSet b;
    VertexSet h;
};

enum class OutcomeTag { A, B, C };

inline const char *to_string(OutcomeTag tag) {
    switch (tag) {
    case OutcomeTag::A:
        return "A";
    case OutcomeTag::B:
        return "B";
    case OutcomeTag::C:
        return "C";
    }
    return "?";
}

/// A: no H-vertex touches the tree. B: every vertex of H ∪ T has at most delta-m neighbors
/// in B. C: `vertex` has more than delta-m neighbors in B and `embedding` avoids it and B.
struct Outcome {
    OutcomeTag tag = OutcomeTag::A;
    Vertex vertex = kNoVertex;
    Embedding embedding;
    std::string via;
};

/// Component of T_{w2} - T2 hanging below the inner tree.
struct Pendant {
    Vertex root = kNoVertex;
    Vertex parent = kNoVertex;
    VertexSet members;
};

/// Everything the improvement step derives before it starts rebuilding the tree. `high` and
/// `touch` are host vertices; the remaining fields are pattern vertices of `tree`, which is
/// the pattern rerooted at the preimage of `u`.
struct ImprovementContext {
    VertexSet high;
    VertexSet touch;
    RootedTree tree;
    Vertex u = kNoVertex;
    Vertex w1 = kNoVertex;
    Vertex w2 = kNoVertex;
    VertexSet inner;
    VertexSet core;
    std::vector<Pendant> pendants;
};

namespace detail {

inline VertexSet host_image(const Embedding &phi, const VertexSet &tree_vertices, int host_order) {
    VertexSet out(host_order);
    tree_vertices.for_each([&](Vertex x) { out.insert(phi[x]); });
    return out;
}

inline VertexSet tree_preimage(const Embedding &phi, const VertexSet &host_vertices) {
    VertexSet out(phi.order());
    for (Vertex x = 0; x < phi.order(); ++x)
        if (host_vertices.contains(phi[x]))
            out.insert(x);
    return out;
}

inline void check_state(const Graph &g, const RootedTree &t0, const TBHState &s, int delta) {
    if (auto defect = embedding_defect(g, t0, s.embedding))
        throw std::invalid_argument("state embedding invalid: " + *defect);
    const VertexSet image = s.embedding.image(g.order());
    if (image.intersects(s.b) || image.intersects(s.h) || s.b.intersects(s.h) ||
        (image | s.b | s.h) != g.vertices())
        throw std::invalid_argument("tree image, B and H must partition the host");
    if (delta < t0.order() || min_degree(g) < delta)
        throw std::invalid_argument("improvement step needs min degree >= delta >= m");
}

/// Extends `partial` to the whole pattern inside G - removed through the three-layer plan
/// (L1, L2, L3) / (X1, X2, rest). Host sets are in G's labels.
inline Embedding staged_rebuild(const Graph &g, const RootedTree &t, const VertexSet &removed,
                                const Embedding &partial, const std::vector<VertexSet> &tree_layers,
                                const VertexSet &x1, const VertexSet &x2, const std::string &stage) {
    const auto sub = delete_vertices(g, removed);
    Embedding local(t.order());
    for (Vertex x = 0; x < t.order(); ++x)
        if (partial.mapped(x))
            local[x] = sub.to_new[static_cast<std::size_t>(partial[x])];
    const VertexSet free = local.image(sub.graph.order()).complement();
    const VertexSet nx1 = sub.restrict(x1), nx2 = sub.restrict(x2);
    StagePlan plan{tree_layers, {nx1, nx2, free - nx1 - nx2}};
    Embedding built;
    try {
        built = extend_embedding_staged(sub.graph, t, local, plan);
    } catch (const PreconditionViolated &e) {
        throw InternalContradiction(stage, e.what());
    } catch (const EmbeddingFailed &e) {
        throw InternalContradiction(stage, e.what());
    }
    Embedding out(t.order());
    for (Vertex x = 0; x < t.order(); ++x)
        out[x] = sub.to_old[static_cast<std::size_t>(built[x])];
    return out;
}

/// Leaf layers of T_w below w: Leaf(T_w), Leaf(T_w - L1), and the rest of T_w - w.
inline std::vector<VertexSet> layers_below(const RootedTree &t, Vertex w) {
    auto p = leaf_partition(t, w);
    p.l1.erase(w);
    p.l2.erase(w);
    return {p.l1, p.l2, p.l3};
}

} // namespace detail

/// Derives X (high B-degree), Y (tree vertices touching H) and, unless an outcome is already
/// decided, the marked edge w1w2 with its inner tree, core and pendants.
inline std::variant<Outcome, ImprovementContext> classify_state(const Graph &g, const RootedTree &t0,
                                                               const TBHState &s, int delta) {
    detail::check_state(g, t0, s, delta);
    const int m = t0.order();
    const int n = g.order();
    const VertexSet image = s.embedding.image(n);

    ImprovementContext ctx{VertexSet(n), VertexSet(n), t0, kNoVertex, kNoVertex, kNoVertex,
                           VertexSet(m), VertexSet(m), {}};
    (image | s.h).for_each([&](Vertex v) {
        if (g.neighborhood(v).count_common(s.b) >= delta - m + 1)
            ctx.high.insert(v);
    });
    image.for_each([&](Vertex v) {
        if (g.neighborhood(v).intersects(s.h))
            ctx.touch.insert(v);
    });
    if (ctx.touch.empty())
        return Outcome{OutcomeTag::A, kNoVertex, {}, "no tree vertex touches H"};
    if (ctx.high.empty())
        return Outcome{OutcomeTag::B, kNoVertex, {}, "no vertex has high B-degree"};
    if (auto in_h = ctx.high & s.h; !in_h.empty())
        return Outcome{OutcomeTag::C, in_h.min(), s.embedding, "high vertex in H"};
    if ((ctx.high | ctx.touch) != image)
        throw InternalContradiction("claim 1", "a tree vertex is neither high nor touching H");

    // u in Y maximizing |X \ {u}|: any u outside X wins, smallest id first.
    ctx.u = ctx.touch.min();
    if (auto outside = ctx.touch - ctx.high; !outside.empty())
        ctx.u = outside.min();
    VertexSet rest_high = ctx.high;
    rest_high.erase(ctx.u);
    if (rest_high.empty()) {
        if (m != 1)
            throw InternalContradiction("claim 1", "X = {u} with more than one tree vertex");
        Embedding moved(1);
        moved[0] = s.h.min();
        return Outcome{OutcomeTag::C, ctx.u, moved, "single-vertex pattern moved into H"};
    }

    const VertexSet xt = detail::tree_preimage(s.embedding, ctx.high);
    const VertexSet yt = detail::tree_preimage(s.embedding, ctx.touch);
    ctx.tree = t0.rerooted(s.embedding.preimage(ctx.u));
    const RootedTree &t = ctx.tree;

    int best = m + 1;
    for (Vertex w2 = 0; w2 < m; ++w2) {
        if (w2 == t.root() || !xt.contains(w2) || !yt.contains(t.parent(w2)))
            continue;
        if (int size = descendants(t, w2).size(); size < best) {
            best = size;
            ctx.w2 = w2;
        }
    }
    if (ctx.w2 == kNoVertex)
        throw InternalContradiction("marked edge", "no edge from Y down to X");
    ctx.w1 = t.parent(ctx.w2);

    const VertexSet region = descendants(t, ctx.w2);
    ctx.inner = region & xt;
    for (Vertex x : ctx.inner.members())
        if (x != ctx.w2 && !ctx.inner.contains(t.parent(x)))
            throw InternalContradiction("marked edge", "X inside T_w2 is not closed under parents");
    ctx.core = ctx.inner - leaves_within(t, ctx.inner);
    if (detail::host_image(s.embedding, ctx.core, n).intersects(neighborhood_of(g, s.h)))
        throw InternalContradiction("marked edge", "a core vertex touches H");
    for (Vertex x : ctx.inner.members())
        for (Vertex c : t.children(x))
            if (!ctx.inner.contains(c))
                ctx.pendants.push_back(Pendant{c, x, descendants(t, c)});
    return ctx;
}

namespace detail {

inline Outcome spare_marked_vertex(const Graph &g, const TBHState &s, const ImprovementContext &ctx) {
    const RootedTree &t = ctx.tree;
    const Embedding &phi = s.embedding;
    const int n = g.order();
    const VertexSet to_h = g.neighborhood(phi[ctx.w1]) & s.h;
    if (to_h.empty())
        throw InternalContradiction("claim 2", "w1 has no neighbor in H");

    const VertexSet region = descendants(t, ctx.w2);
    Embedding partial = phi.restricted(t.vertices() - region);
    partial[ctx.w2] = to_h.min();

    VertexSet roots(t.order());
    for (const auto &p : ctx.pendants)
        roots.insert(p.root);
    VertexSet inner_below = ctx.inner;
    inner_below.erase(ctx.w2);

    VertexSet removed = s.b;
    removed.insert(phi[ctx.w2]);
    auto rebuilt = staged_rebuild(g, t, removed, partial, layers_below(t, ctx.w2), host_image(phi, inner_below, n),
                                  host_image(phi, roots, n), "claim 2");
    return Outcome{OutcomeTag::C, phi[ctx.w2], rebuilt, "claim 2"};
}

inline Outcome reroute_through_pendant(const Graph &g, const TBHState &s, const ImprovementContext &ctx) {
    const RootedTree &t = ctx.tree;
    const Embedding &phi = s.embedding;
    const int n = g.order();

    // (w3, r, w4) with an edge phi(w3)phi(r), r below a pendant root, w4 a child of w3 in T2,
    // and T_{w4} as small as possible.
    std::optional<std::tuple<int, Vertex, Vertex, Vertex, std::size_t>> pick; // size, w4, w3, r, pendant
    ctx.core.for_each([&](Vertex w3) {
        for (std::size_t i = 0; i < ctx.pendants.size(); ++i) {
            const auto &p = ctx.pendants[i];
            p.members.for_each([&](Vertex r) {
                if (r == p.root || !g.adjacent(phi[w3], phi[r]))
                    return;
                for (Vertex w4 : t.children(w3)) {
                    if (!ctx.inner.contains(w4))
                        continue;
                    std::tuple<int, Vertex, Vertex, Vertex, std::size_t> key{descendants(t, w4).size(), w4, w3, r, i};
                    if (!pick || key < *pick)
                        pick = key;
                }
            });
        }
    });
    if (!pick)
        throw InternalContradiction("claim 2", "core is adjacent to a pendant but no marked child exists");
    const auto [size, w4, w3, r, index] = *pick;
    (void)size;
    (void)w3;
    const Pendant &r1 = ctx.pendants[index];

    const VertexSet region = descendants(t, w4);
    VertexSet below = region;
    below.erase(w4);
    VertexSet removed = s.b;
    removed.insert(phi[w4]);

    if (region.intersects(r1.members)) {
        Embedding partial = phi.restricted(t.vertices() - below);
        partial[w4] = phi[r];
        VertexSet roots(t.order());
        for (const auto &p : ctx.pendants)
            if (region.contains(p.root))
                roots.insert(p.root);
        auto rebuilt = staged_rebuild(g, t, removed, partial, layers_below(t, w4),
                                      host_image(phi, below & ctx.inner, n), host_image(phi, roots, n), "case 1");
        return Outcome{OutcomeTag::C, phi[w4], rebuilt, "case 1"};
    }

    VertexSet kept_r1(t.order());
    kept_r1.insert(r1.root);
    for (Vertex c : t.children(r1.root))
        kept_r1.insert(c);
    const VertexSet dropped = below | (r1.members - kept_r1);
    Embedding partial = phi.restricted(t.vertices() - dropped);
    if (kept_r1.contains(r) && r != r1.root) {
        const VertexSet to_h = g.neighborhood(phi[r1.root]) & s.h;
        if (to_h.empty())
            throw InternalContradiction("case 2", "pendant root has no neighbor in H");
        partial[r] = to_h.min();
    }
    partial[w4] = phi[r];
    auto layers = layers_below(t, w4);
    layers[2] = dropped - layers[0] - layers[1];
    VertexSet roots(t.order());
    for (const auto &p : ctx.pendants)
        if (p.root != r1.root && region.contains(p.root))
            roots.insert(p.root);
    auto rebuilt = staged_rebuild(g, t, removed, partial, layers, host_image(phi, below & ctx.inner, n),
                                  host_image(phi, roots, n), "case 2");
    return Outcome{OutcomeTag::C, phi[w4], rebuilt, "case 2"};
}

} // namespace detail

/// One improvement step on (T, B, H) with degree parameter delta (min degree >= delta >= m).
/// Returns outcome A, B or C; C carries a rebuilt embedding avoiding B and the spared vertex.
/// Throws InternalContradiction if a construction step fails its own guard.
inline Outcome improve_or_certify(const Graph &g, const RootedTree &t0, const TBHState &s, int delta) {
    auto classified = classify_state(g, t0, s, delta);
    if (auto *decided = std::get_if<Outcome>(&classified))
        return *decided;
    const auto &ctx = std::get<ImprovementContext>(classified);

    VertexSet deep(t0.order());
    for (const auto &p : ctx.pendants) {
        deep |= p.members;
        deep.erase(p.root);
    }
    const VertexSet deep_host = detail::host_image(s.embedding, deep, g.order());
    bool linked = false;
    ctx.core.for_each([&](Vertex x) { linked = linked || g.neighborhood(s.embedding[x]).intersects(deep_host); });
    if (!linked)
        return detail::spare_marked_vertex(g, s, ctx);
    return detail::reroute_through_pendant(g, s, ctx);
}

/// Independent check of the tag-specific promise of an outcome, or nullopt when it holds.
inline std::optional<std::string> outcome_defect(const Graph &g, const RootedTree &t0, const TBHState &s, int delta,
                                                 const Outcome &o) {
    const int m = t0.order();
    const VertexSet image = s.embedding.image(g.order());
    switch (o.tag) {
    case OutcomeTag::A:
        if (neighborhood_of(g, s.h).intersects(image))
            return "outcome A but H touches the tree";
        return std::nullopt;
    case OutcomeTag::B: {
        std::optional<std::string> bad;
        (image | s.h).for_each([&](Vertex v) {
            if (!bad && g.neighborhood(v).count_common(s.b) > delta - m)
                bad = "outcome B but vertex " + std::to_string(v) + " has too many B-neighbors";
        });
        return bad;
    }
    case OutcomeTag::C: {
        if (!(image | s.h).contains(o.vertex))
            return "outcome C vertex lies outside H and T";
        if (g.neighborhood(o.vertex).count_common(s.b) < delta - m + 1)
            return "outcome C vertex has too few B-neighbors";
        if (auto defect = embedding_defect(g, t0, o.embedding))
            return "outcome C embedding invalid: " + *defect;
        const VertexSet rebuilt = o.embedding.image(g.order());
        if (rebuilt.contains(o.vertex) || rebuilt.intersects(s.b))
            return "outcome C embedding meets B or the spared vertex";
        return std::nullopt;
    }
    }
    return "unknown tag";
}

} // namespace kremove
