#pragma once

#include "kremove/errors.hpp"
#include "kremove/graph.hpp"
#include "kremove/tree.hpp"
#include "kremove/vertex_set.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kremove {

/// Map from pattern-tree vertices to host vertices. Unmapped entries hold kNoVertex, so a
/// partial map is an embedding of the subtree spanned by its domain.
struct Embedding {
    std::vector<Vertex> map;

    Embedding() = default;
    explicit Embedding(int order) : map(static_cast<std::size_t>(order), kNoVertex) {}

    int order() const noexcept { return static_cast<int>(map.size()); }
    Vertex operator[](Vertex t) const { return map.at(static_cast<std::size_t>(t)); }
    Vertex &operator[](Vertex t) { return map.at(static_cast<std::size_t>(t)); }
    bool mapped(Vertex t) const { return (*this)[t] != kNoVertex; }

    bool total() const {
        return std::find(map.begin(), map.end(), kNoVertex) == map.end();
    }

    VertexSet domain() const {
        VertexSet out(order());
        for (Vertex t = 0; t < order(); ++t)
            if (mapped(t))
                out.insert(t);
        return out;
    }

    VertexSet image(int host_order) const {
        VertexSet out(host_order);
        for (Vertex h : map)
            if (h != kNoVertex)
                out.insert(h);
        return out;
    }

    /// Tree vertex mapped onto host vertex h, or kNoVertex.
    Vertex preimage(Vertex h) const {
        for (Vertex t = 0; t < order(); ++t)
            if (map[static_cast<std::size_t>(t)] == h)
                return t;
        return kNoVertex;
    }

    /// Same map with every entry outside `keep` cleared.
    Embedding restricted(const VertexSet &keep) const {
        Embedding out(order());
        keep.for_each([&](Vertex t) { out[t] = (*this)[t]; });
        return out;
    }

    friend bool operator==(const Embedding &, const Embedding &) = default;
};

/// Reason `phi` fails to be an injective, edge-preserving map of T into G, or nullopt.
/// Kept free of the construction code it is used to check.
inline std::optional<std::string> embedding_defect(const Graph &g, const RootedTree &t, const Embedding &phi,
                                                   bool require_total = true) {
    if (phi.order() != t.order())
        return "map covers " + std::to_string(phi.order()) + " tree vertices, tree has " +
               std::to_string(t.order());
    std::vector<Vertex> owner(static_cast<std::size_t>(g.order()), kNoVertex);
    for (Vertex x = 0; x < t.order(); ++x) {
        Vertex h = phi[x];
        if (h == kNoVertex) {
            if (require_total)
                return "tree vertex " + std::to_string(x) + " is unmapped";
            continue;
        }
        if (h < 0 || h >= g.order())
            return "tree vertex " + std::to_string(x) + " maps outside the host";
        if (owner[static_cast<std::size_t>(h)] != kNoVertex)
            return "host vertex " + std::to_string(h) + " used twice";
        owner[static_cast<std::size_t>(h)] = x;
    }
    for (auto [a, b] : t.edges())
        if (phi[a] != kNoVertex && phi[b] != kNoVertex && !g.adjacent(phi[a], phi[b]))
            return "tree edge " + std::to_string(a) + "-" + std::to_string(b) + " is not a host edge";
    return std::nullopt;
}

inline bool is_valid_embedding(const Graph &g, const RootedTree &t, const Embedding &phi,
                               bool require_total = true) {
    return !embedding_defect(g, t, phi, require_total).has_value();
}

// ---------------------------------------------------------------------------
// Greedy construction

/// Extends a partial embedding greedily: tree vertices are attached breadth-first from the
/// mapped part, each taking the smallest unused host neighbor (inside `allowed`) of its
/// already-placed neighbor. Succeeds whenever every host vertex that still has to receive a
/// child has degree at least |T|-1. Throws EmbeddingFailed otherwise.
inline Embedding extend_embedding_basic(const Graph &g, const RootedTree &t, const Embedding &partial,
                                        const VertexSet &allowed) {
    Embedding phi = partial;
    VertexSet used = phi.image(g.order());
    std::vector<Vertex> queue = phi.domain().members();
    if (queue.empty())
        throw EmbeddingFailed("nothing to extend from");
    for (std::size_t i = 0; i < queue.size(); ++i) {
        const Vertex p = queue[i];
        for (Vertex c : t.neighbors(p)) {
            if (phi.mapped(c))
                continue;
            Vertex pick = kNoVertex;
            for (Vertex h : g.neighbors(phi[p]))
                if (allowed.contains(h) && !used.contains(h)) {
                    pick = h;
                    break;
                }
            if (pick == kNoVertex)
                throw EmbeddingFailed("host vertex " + std::to_string(phi[p]) + " has no free neighbor for tree vertex " +
                                      std::to_string(c));
            phi[c] = pick;
            used.insert(pick);
            queue.push_back(c);
        }
    }
    return phi;
}

inline Embedding extend_embedding_basic(const Graph &g, const RootedTree &t, const Embedding &partial) {
    return extend_embedding_basic(g, t, partial, g.vertices());
}

/// Embeds T into G[allowed] greedily, trying host roots in ascending order.
inline Embedding greedy_embed(const Graph &g, const RootedTree &t, const VertexSet &allowed) {
    for (Vertex r : allowed.members()) {
        if (g.neighborhood(r).count_common(allowed) < static_cast<int>(t.children(t.root()).size()))
            continue;
        Embedding start(t.order());
        start[t.root()] = r;
        try {
            return extend_embedding_basic(g, t, start, allowed);
        } catch (const EmbeddingFailed &) {
        }
    }
    throw EmbeddingFailed("greedy embedding found no root that works");
}

inline Embedding greedy_embed(const Graph &g, const RootedTree &t) { return greedy_embed(g, t, g.vertices()); }

// ---------------------------------------------------------------------------
// Staged extension

/// Layered plan for extending an embedding of T' ⊆ T0. tree_layers = (L1..L{k+1}) partition
/// V(T0) \ V(T'); host_layers = (X1..X{k+1}) partition V(G) \ image. Vertices of L_i may only
/// land outside X1..X{i-1}.
struct StagePlan {
    std::vector<VertexSet> tree_layers;
    std::vector<VertexSet> host_layers;
};

struct StageViolation {
    Vertex host_vertex = kNoVertex; // kNoVertex for structural defects
    std::string condition;
    int available = 0;
    int required = 0;

    std::string describe() const {
        if (host_vertex == kNoVertex)
            return condition;
        return "vertex " + std::to_string(host_vertex) + " fails " + condition + ": " + std::to_string(available) +
               " < " + std::to_string(required);
    }
};

class PreconditionViolated : public Error {
  public:
    explicit PreconditionViolated(std::vector<StageViolation> violations)
        : Error("stage plan rejected: " + violations.front().describe()), violations_(std::move(violations)) {}

    const std::vector<StageViolation> &violations() const noexcept { return violations_; }

  private:
    std::vector<StageViolation> violations_;
};

/// Boundary set X_{k+2}: images of mapped tree vertices with an unmapped tree neighbor.
inline VertexSet stage_boundary(const Graph &g, const RootedTree &t, const Embedding &phi) {
    VertexSet out(g.order());
    for (Vertex x = 0; x < t.order(); ++x) {
        if (!phi.mapped(x))
            continue;
        for (Vertex y : t.neighbors(x))
            if (!phi.mapped(y)) {
                out.insert(phi[x]);
                break;
            }
    }
    return out;
}

/// Every violated degree inequality of the plan, plus structural defects. With k+1 layers:
///  (a) x in X{k+1} ∪ X{k+2}:  |N(x) \ (X1..Xk)|       >= m-1 - (|L1|+..+|Lk|)
///  (b) i = 2..k+1, x in X_i ∪ .. ∪ X{k+2}:
///                             |N(x) \ (X1..X{i-2})|   >= m-1 - (|L1|+..+|L{i-2}|)
/// For k = 2 this is exactly the pair of conditions used by the improvement step.
inline std::vector<StageViolation> check_stage_plan(const Graph &g, const RootedTree &t, const Embedding &phi,
                                                    const StagePlan &plan) {
    std::vector<StageViolation> out;
    auto structural = [&](std::string what) { out.push_back({kNoVertex, std::move(what), 0, 0}); };

    if (auto defect = embedding_defect(g, t, phi, false)) {
        structural("partial map invalid: " + *defect);
        return out;
    }
    const VertexSet domain = phi.domain();
    if (!is_connected_within(t, domain)) {
        structural("mapped part is not a nonempty subtree");
        return out;
    }
    const std::size_t layers = plan.tree_layers.size();
    if (layers == 0 || plan.host_layers.size() != layers) {
        structural("need matching nonempty lists of tree and host layers");
        return out;
    }
    const int m = t.order();
    const VertexSet image = phi.image(g.order());

    VertexSet tree_union(m);
    for (std::size_t i = 0; i < layers; ++i) {
        const auto &layer = plan.tree_layers[i];
        if (layer.universe() != m || layer.intersects(tree_union) || layer.intersects(domain)) {
            structural("tree layer L" + std::to_string(i + 1) + " overlaps another layer or the mapped part");
            return out;
        }
        tree_union |= layer;
    }
    if (tree_union != t.vertices() - domain) {
        structural("tree layers do not cover the unmapped vertices");
        return out;
    }
    VertexSet host_union(g.order());
    for (std::size_t i = 0; i < layers; ++i) {
        const auto &layer = plan.host_layers[i];
        if (layer.universe() != g.order() || layer.intersects(host_union) || layer.intersects(image)) {
            structural("host layer X" + std::to_string(i + 1) + " overlaps another layer or the image");
            return out;
        }
        host_union |= layer;
    }
    if (host_union != g.vertices() - image) {
        structural("host layers do not cover the unused host vertices");
        return out;
    }
    // L_i must be leaves of T_{i-1} = T - L1 - .. - L{i-1}, for i <= k.
    VertexSet remaining = t.vertices();
    for (std::size_t i = 0; i + 1 < layers; ++i) {
        if (!plan.tree_layers[i].is_subset_of(unrooted_leaves(t, remaining))) {
            structural("tree layer L" + std::to_string(i + 1) + " is not a set of leaves of the peeled tree");
            return out;
        }
        remaining -= plan.tree_layers[i];
    }

    const VertexSet boundary = stage_boundary(g, t, phi);
    const std::size_t k = layers - 1;
    auto check = [&](const VertexSet &targets, std::size_t excluded_layers, const std::string &label) {
        VertexSet excluded(g.order());
        int budget = m - 1;
        for (std::size_t j = 0; j < excluded_layers; ++j) {
            excluded |= plan.host_layers[j];
            budget -= plan.tree_layers[j].size();
        }
        targets.for_each([&](Vertex x) {
            const int have = (g.neighborhood(x) - excluded).size();
            if (have < budget)
                out.push_back({x, label, have, budget});
        });
    };
    check(plan.host_layers[k] | boundary, k, "(a)");
    for (std::size_t i = 2; i <= k + 1; ++i) {
        VertexSet targets = boundary;
        for (std::size_t j = i - 1; j < layers; ++j)
            targets |= plan.host_layers[j];
        check(targets, i - 2, "(b) i=" + std::to_string(i));
    }
    return out;
}

/// Extends phi (an embedding of the subtree T' = its domain) to all of T by peeling the plan's
/// layers: first T' ∪ L{k+1} inside X{k+1}, then each L_i inside X_i ∪ .. ∪ X{k+1}, down to
/// L1. Runs check_stage_plan first and throws PreconditionViolated rather than attempting a
/// plan that fails it.
inline Embedding extend_embedding_staged(const Graph &g, const RootedTree &t, const Embedding &phi,
                                         const StagePlan &plan) {
    if (auto violations = check_stage_plan(g, t, phi, plan); !violations.empty())
        throw PreconditionViolated(std::move(violations));

    const std::size_t layers = plan.tree_layers.size();
    Embedding out = phi;
    VertexSet used = phi.image(g.order());
    auto place = [&](Vertex child, Vertex parent, const VertexSet &allowed) {
        for (Vertex h : g.neighbors(out[parent]))
            if (allowed.contains(h) && !used.contains(h)) {
                out[child] = h;
                used.insert(h);
                return;
            }
        throw EmbeddingFailed("stage extension stuck at tree vertex " + std::to_string(child) +
                              " although the plan passed its guard");
    };

    const VertexSet &deepest = plan.tree_layers[layers - 1];
    std::vector<Vertex> queue = phi.domain().members();
    for (std::size_t i = 0; i < queue.size(); ++i)
        for (Vertex c : t.neighbors(queue[i]))
            if (deepest.contains(c) && !out.mapped(c)) {
                place(c, queue[i], plan.host_layers[layers - 1]);
                queue.push_back(c);
            }

    VertexSet allowed = plan.host_layers[layers - 1];
    for (std::size_t i = layers - 1; i-- > 0;) {
        allowed |= plan.host_layers[i];
        plan.tree_layers[i].for_each([&](Vertex c) {
            Vertex parent = kNoVertex;
            for (Vertex p : t.neighbors(c))
                if (out.mapped(p))
                    parent = p;
            if (parent == kNoVertex)
                throw EmbeddingFailed("tree vertex " + std::to_string(c) + " has no placed neighbor");
            place(c, parent, allowed);
        });
    }
    if (auto defect = embedding_defect(g, t, out))
        throw EmbeddingFailed("staged extension produced an invalid map: " + *defect);
    return out;
}

// ---------------------------------------------------------------------------
// Enumeration

enum class EnumerationOrder { Ascending, Descending };

/// Backtracking enumeration of all embeddings of T into G[allowed]. Tree vertices are fixed in
/// breadth-first order; host candidates are tried in ascending (or descending) id order.
/// `visit` returns false to stop early. `limit` = 0 means unlimited. Returns the count visited.
inline std::size_t enumerate_embeddings(const Graph &g, const RootedTree &t, std::size_t limit,
                                        const std::function<bool(const Embedding &)> &visit,
                                        const VertexSet &allowed,
                                        EnumerationOrder order = EnumerationOrder::Ascending) {
    const auto sequence = t.bfs_order();
    const std::size_t m = sequence.size();
    if (static_cast<int>(m) > allowed.size())
        return 0;
    std::vector<int> room(static_cast<std::size_t>(g.order()), 0);
    allowed.for_each([&](Vertex v) { room[static_cast<std::size_t>(v)] = g.neighborhood(v).count_common(allowed); });

    Embedding phi(t.order());
    VertexSet used(g.order());
    std::size_t count = 0;
    bool stop = false;

    std::vector<Vertex> roots = allowed.members();
    if (order == EnumerationOrder::Descending)
        std::reverse(roots.begin(), roots.end());

    std::function<void(std::size_t)> extend = [&](std::size_t depth) {
        if (depth == m) {
            ++count;
            if (!visit(phi) || (limit != 0 && count >= limit))
                stop = true;
            return;
        }
        const Vertex x = sequence[depth];
        auto try_host = [&](Vertex h) {
            if (stop || used.contains(h) || !allowed.contains(h) || room[static_cast<std::size_t>(h)] < t.degree(x))
                return;
            phi[x] = h;
            used.insert(h);
            extend(depth + 1);
            used.erase(h);
            phi[x] = kNoVertex;
        };
        if (depth == 0) {
            for (Vertex h : roots)
                try_host(h);
            return;
        }
        auto nbrs = g.neighbors(phi[t.parent(x)]);
        if (order == EnumerationOrder::Ascending)
            for (auto it = nbrs.begin(); it != nbrs.end() && !stop; ++it)
                try_host(*it);
        else
            for (auto it = nbrs.rbegin(); it != nbrs.rend() && !stop; ++it)
                try_host(*it);
    };
    extend(0);
    return count;
}

inline std::vector<Embedding> all_embeddings(const Graph &g, const RootedTree &t, std::size_t limit = 0) {
    std::vector<Embedding> out;
    enumerate_embeddings(
        g, t, limit,
        [&](const Embedding &e) {
            out.push_back(e);
            return true;
        },
        g.vertices());
    return out;
}

/// First embedding of T into G[allowed] in enumeration order, if any.
inline std::optional<Embedding> find_embedding(const Graph &g, const RootedTree &t, const VertexSet &allowed) {
    std::optional<Embedding> found;
    enumerate_embeddings(
        g, t, 1,
        [&](const Embedding &e) {
            found = e;
            return false;
        },
        allowed);
    return found;
}

/// An embedding of T avoiding `forbidden`: the greedy construction when its degree condition
/// holds there, otherwise the first one found by exhaustive search.
inline std::optional<Embedding> embed_avoiding(const Graph &g, const RootedTree &t, const VertexSet &forbidden) {
    const VertexSet allowed = forbidden.complement();
    if (allowed.size() >= t.order() && min_degree(g, allowed) >= t.order() - 1)
        return greedy_embed(g, t, allowed);
    return find_embedding(g, t, allowed);
}

} // namespace kremove
