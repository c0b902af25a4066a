#pragma once

#include "kremove/errors.hpp"
#include "kremove/graph.hpp"
#include "kremove/random.hpp"
#include "kremove/vertex_set.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kremove {

/// Rooted tree on vertices 0..m-1. `id(v)` is a stable external label that survives
/// subtree extraction, so maps built on a subtree compose with the original tree.
class RootedTree {
  public:
    RootedTree() = default;

    /// `parent[root] == kNoVertex`; every other entry names the parent. Throws
    /// std::invalid_argument unless the links form a single tree.
    static RootedTree from_parents(std::vector<Vertex> parent, std::vector<Vertex> ids = {}) {
        const int m = static_cast<int>(parent.size());
        if (m == 0)
            throw std::invalid_argument("a tree needs at least one vertex");
        RootedTree t;
        t.parent_ = std::move(parent);
        t.children_.assign(static_cast<std::size_t>(m), {});
        t.adj_.assign(static_cast<std::size_t>(m), {});
        for (Vertex v = 0; v < m; ++v) {
            Vertex p = t.parent_[static_cast<std::size_t>(v)];
            if (p == kNoVertex) {
                if (t.root_ != kNoVertex)
                    throw std::invalid_argument("more than one root");
                t.root_ = v;
                continue;
            }
            if (p < 0 || p >= m || p == v)
                throw std::invalid_argument("bad parent link at vertex " + std::to_string(v));
            t.children_[static_cast<std::size_t>(p)].push_back(v);
            t.adj_[static_cast<std::size_t>(p)].push_back(v);
            t.adj_[static_cast<std::size_t>(v)].push_back(p);
        }
        if (t.root_ == kNoVertex)
            throw std::invalid_argument("no root");
        for (auto &a : t.adj_)
            std::sort(a.begin(), a.end());
        if (static_cast<int>(t.bfs_order().size()) != m)
            throw std::invalid_argument("parent links contain a cycle");
        if (ids.empty()) {
            ids.resize(static_cast<std::size_t>(m));
            for (Vertex v = 0; v < m; ++v)
                ids[static_cast<std::size_t>(v)] = v;
        } else if (static_cast<int>(ids.size()) != m) {
            throw std::invalid_argument("id map size differs from tree order");
        }
        t.ids_ = std::move(ids);
        return t;
    }

    /// Tree on m vertices from m-1 undirected edges, oriented away from `root`.
    static RootedTree from_edges(int m, std::span<const Edge> edges, Vertex root = 0) {
        if (m < 1 || static_cast<int>(edges.size()) != m - 1)
            throw std::invalid_argument("a tree on m vertices needs m-1 edges");
        std::vector<std::vector<Vertex>> adj(static_cast<std::size_t>(m));
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u >= m || v >= m || u == v)
                throw std::invalid_argument("bad tree edge");
            adj[static_cast<std::size_t>(u)].push_back(v);
            adj[static_cast<std::size_t>(v)].push_back(u);
        }
        if (root < 0 || root >= m)
            throw std::invalid_argument("root out of range");
        std::vector<Vertex> parent(static_cast<std::size_t>(m), kNoVertex);
        std::vector<bool> seen(static_cast<std::size_t>(m), false);
        std::deque<Vertex> queue{root};
        seen[static_cast<std::size_t>(root)] = true;
        while (!queue.empty()) {
            Vertex v = queue.front();
            queue.pop_front();
            for (Vertex w : adj[static_cast<std::size_t>(v)])
                if (!seen[static_cast<std::size_t>(w)]) {
                    seen[static_cast<std::size_t>(w)] = true;
                    parent[static_cast<std::size_t>(w)] = v;
                    queue.push_back(w);
                }
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end())
            throw std::invalid_argument("tree edges do not connect all vertices");
        return from_parents(std::move(parent));
    }

    static RootedTree from_edges(int m, const std::vector<Edge> &edges, Vertex root = 0) {
        return from_edges(m, std::span<const Edge>(edges), root);
    }

    int order() const noexcept { return static_cast<int>(parent_.size()); }
    Vertex root() const noexcept { return root_; }
    Vertex parent(Vertex v) const { return parent_.at(static_cast<std::size_t>(v)); }
    std::span<const Vertex> children(Vertex v) const { return children_.at(static_cast<std::size_t>(v)); }
    /// Unrooted adjacency, ascending.
    std::span<const Vertex> neighbors(Vertex v) const { return adj_.at(static_cast<std::size_t>(v)); }
    int degree(Vertex v) const { return static_cast<int>(neighbors(v).size()); }
    Vertex id(Vertex v) const { return ids_.at(static_cast<std::size_t>(v)); }
    const std::vector<Vertex> &ids() const noexcept { return ids_; }
    const std::vector<Vertex> &parents() const noexcept { return parent_; }
    VertexSet vertices() const { return VertexSet::full(order()); }

    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (Vertex v = 0; v < order(); ++v)
            if (v != root_)
                out.emplace_back(parent(v), v);
        return out;
    }

    /// Breadth-first order from the root, children visited in ascending order.
    std::vector<Vertex> bfs_order() const {
        std::vector<Vertex> order{root_};
        for (std::size_t i = 0; i < order.size() && order.size() <= parent_.size(); ++i)
            for (Vertex c : children(order[i]))
                order.push_back(c);
        return order;
    }

    /// Same vertices and edges, rooted at r.
    RootedTree rerooted(Vertex r) const {
        auto t = from_edges(order(), edges(), r);
        t.ids_ = ids_;
        return t;
    }

  private:
    std::vector<Vertex> parent_;
    std::vector<std::vector<Vertex>> children_;
    std::vector<std::vector<Vertex>> adj_;
    std::vector<Vertex> ids_;
    Vertex root_ = kNoVertex;
};

/// Vertices of T_v: v and all its descendants.
inline VertexSet descendants(const RootedTree &t, Vertex v) {
    VertexSet out(t.order());
    std::vector<Vertex> stack{v};
    while (!stack.empty()) {
        Vertex x = stack.back();
        stack.pop_back();
        out.insert(x);
        for (Vertex c : t.children(x))
            stack.push_back(c);
    }
    return out;
}

/// T_v as its own rooted tree; ids() maps back to the external ids of `t`.
inline RootedTree subtree_at(const RootedTree &t, Vertex v) {
    auto members = descendants(t, v).members();
    std::vector<Vertex> local(static_cast<std::size_t>(t.order()), kNoVertex);
    for (std::size_t i = 0; i < members.size(); ++i)
        local[static_cast<std::size_t>(members[i])] = static_cast<Vertex>(i);
    std::vector<Vertex> parent(members.size(), kNoVertex);
    std::vector<Vertex> ids(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        Vertex x = members[i];
        ids[i] = t.id(x);
        if (x != v)
            parent[i] = local[static_cast<std::size_t>(t.parent(x))];
    }
    return RootedTree::from_parents(std::move(parent), std::move(ids));
}

/// Rooted leaves: vertices with no children. The root of a one-vertex tree is a leaf.
inline VertexSet leaves(const RootedTree &t) {
    VertexSet out(t.order());
    for (Vertex v = 0; v < t.order(); ++v)
        if (t.children(v).empty())
            out.insert(v);
    return out;
}

/// Rooted leaves of the subtree of `t` induced by `within`, which must be closed under
/// taking parents up to its own top vertex.
inline VertexSet leaves_within(const RootedTree &t, const VertexSet &within) {
    VertexSet out(t.order());
    within.for_each([&](Vertex v) {
        for (Vertex c : t.children(v))
            if (within.contains(c))
                return;
        out.insert(v);
    });
    return out;
}

/// Unrooted leaves of the forest induced by `within`: vertices of degree at most one there,
/// isolated vertices included.
inline VertexSet unrooted_leaves(const RootedTree &t, const VertexSet &within) {
    VertexSet out(t.order());
    within.for_each([&](Vertex v) {
        int d = 0;
        for (Vertex w : t.neighbors(v))
            d += within.contains(w) ? 1 : 0;
        if (d <= 1)
            out.insert(v);
    });
    return out;
}

inline bool is_connected_within(const RootedTree &t, const VertexSet &within) {
    if (within.empty())
        return false;
    VertexSet seen(t.order());
    std::vector<Vertex> stack{within.min()};
    seen.insert(within.min());
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (Vertex w : t.neighbors(v))
            if (within.contains(w) && !seen.contains(w)) {
                seen.insert(w);
                stack.push_back(w);
            }
    }
    return seen == within;
}

/// Peeled leaf layers of T_w. L1 = Leaf(T_w), L2 = Leaf(T_w - L1), L3 = V(T_w - w) minus both.
/// Taken literally, so w itself lands in L1 or L2 when T_w is tiny; callers drop it.
struct LeafPartition {
    VertexSet l1;
    VertexSet l2;
    VertexSet l3;
};

inline LeafPartition leaf_partition(const RootedTree &t, Vertex w) {
    const VertexSet region = descendants(t, w);
    LeafPartition p;
    p.l1 = leaves_within(t, region);
    p.l2 = leaves_within(t, region - p.l1);
    VertexSet below = region;
    below.erase(w);
    p.l3 = below - p.l1 - p.l2;
    return p;
}

/// Counts from the two leaf inequalities for a tree T and a connected subtree T0:
/// |L1| >= |L0| and |L1| + |L2| >= |L0| + k, where L0 = Leaf(T0), L1 = Leaf(T),
/// L2 = Leaf(T - L1) (unrooted leaves) and k counts the components of T - V(T0).
struct LeafCount {
    int l0 = 0;
    int l1 = 0;
    int l2 = 0;
    int k = 0;
    bool ok = false;
};

inline LeafCount check_leaf_counting(const RootedTree &t, const VertexSet &sub) {
    if (sub.universe() != t.order())
        throw NotASubtree("subtree is not over the vertices of the tree");
    if (!is_connected_within(t, sub))
        throw NotASubtree("vertex set does not induce a connected subtree");
    const VertexSet all = t.vertices();
    const VertexSet l1 = unrooted_leaves(t, all);
    LeafCount c;
    c.l0 = unrooted_leaves(t, sub).size();
    c.l1 = l1.size();
    c.l2 = unrooted_leaves(t, all - l1).size();

    VertexSet rest = all - sub;
    VertexSet seen(t.order());
    rest.for_each([&](Vertex s) {
        if (seen.contains(s))
            return;
        ++c.k;
        std::vector<Vertex> stack{s};
        seen.insert(s);
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (Vertex w : t.neighbors(v))
                if (rest.contains(w) && !seen.contains(w)) {
                    seen.insert(w);
                    stack.push_back(w);
                }
        }
    });
    c.ok = c.l1 >= c.l0 && c.l1 + c.l2 >= c.l0 + c.k;
    return c;
}

// ---------------------------------------------------------------------------
// Prüfer codes and generation

/// Tree edges encoded by a Prüfer sequence over {0..m-1}, m = sequence length + 2.
inline std::vector<Edge> prufer_decode(std::span<const Vertex> code) {
    const int m = static_cast<int>(code.size()) + 2;
    std::vector<int> degree(static_cast<std::size_t>(m), 1);
    for (Vertex v : code) {
        if (v < 0 || v >= m)
            throw std::invalid_argument("Prüfer entry out of range");
        ++degree[static_cast<std::size_t>(v)];
    }
    std::vector<Edge> edges;
    for (Vertex v : code) {
        Vertex leaf = 0;
        while (degree[static_cast<std::size_t>(leaf)] != 1)
            ++leaf;
        edges.emplace_back(leaf, v);
        --degree[static_cast<std::size_t>(leaf)];
        --degree[static_cast<std::size_t>(v)];
    }
    Vertex a = kNoVertex;
    for (Vertex v = 0; v < m; ++v)
        if (degree[static_cast<std::size_t>(v)] == 1) {
            if (a == kNoVertex)
                a = v;
            else
                edges.emplace_back(a, v);
        }
    return edges;
}

inline std::vector<Vertex> prufer_encode(const RootedTree &t) {
    const int m = t.order();
    std::vector<int> degree(static_cast<std::size_t>(m));
    for (Vertex v = 0; v < m; ++v)
        degree[static_cast<std::size_t>(v)] = t.degree(v);
    VertexSet removed(m);
    std::vector<Vertex> code;
    for (int step = 0; step + 2 < m; ++step) {
        Vertex leaf = 0;
        while (removed.contains(leaf) || degree[static_cast<std::size_t>(leaf)] != 1)
            ++leaf;
        Vertex nbr = kNoVertex;
        for (Vertex w : t.neighbors(leaf))
            if (!removed.contains(w))
                nbr = w;
        code.push_back(nbr);
        removed.insert(leaf);
        --degree[static_cast<std::size_t>(nbr)];
    }
    return code;
}

/// Uniform labeled tree on m vertices rooted at 0, deterministic per seed.
inline RootedTree random_tree(int m, std::uint64_t seed) {
    if (m < 1)
        throw std::invalid_argument("tree order must be positive");
    if (m <= 2)
        return m == 1 ? RootedTree::from_parents({kNoVertex}) : RootedTree::from_parents({kNoVertex, 0});
    SplitMix64 rng(seed);
    std::vector<Vertex> code(static_cast<std::size_t>(m - 2));
    for (auto &c : code)
        c = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(m)));
    return RootedTree::from_edges(m, prufer_decode(code), 0);
}

/// Calls `visit` with every labeled tree on m vertices (m^(m-2) of them), rooted at 0.
inline void for_each_labeled_tree(int m, const std::function<void(const RootedTree &)> &visit) {
    if (m <= 2) {
        visit(random_tree(m, 0));
        return;
    }
    std::vector<Vertex> code(static_cast<std::size_t>(m - 2), 0);
    while (true) {
        visit(RootedTree::from_edges(m, prufer_decode(code), 0));
        std::size_t i = 0;
        while (i < code.size() && ++code[i] == m)
            code[i++] = 0;
        if (i == code.size())
            return;
    }
}

inline RootedTree path_tree(int m) {
    std::vector<Vertex> parent(static_cast<std::size_t>(m));
    for (Vertex v = 0; v < m; ++v)
        parent[static_cast<std::size_t>(v)] = v - 1;
    parent[0] = kNoVertex;
    return RootedTree::from_parents(std::move(parent));
}

/// K_{1,m-1} rooted at its center 0.
inline RootedTree star_tree(int m) {
    std::vector<Vertex> parent(static_cast<std::size_t>(m), 0);
    parent[0] = kNoVertex;
    return RootedTree::from_parents(std::move(parent));
}

namespace detail {

inline std::string rooted_code(const RootedTree &t, Vertex v, Vertex from) {
    std::vector<std::string> parts;
    for (Vertex w : t.neighbors(v))
        if (w != from)
            parts.push_back(rooted_code(t, w, v));
    std::sort(parts.begin(), parts.end());
    std::string out = "(";
    for (auto &p : parts)
        out += p;
    return out + ")";
}

// Isomorphism-invariant code: smallest rooted code over the tree's centers.
inline std::string shape_code(const RootedTree &t) {
    VertexSet alive = t.vertices();
    while (alive.size() > 2)
        alive -= unrooted_leaves(t, alive);
    std::string best;
    alive.for_each([&](Vertex c) {
        auto code = rooted_code(t, c, kNoVertex);
        if (best.empty() || code < best)
            best = code;
    });
    return best;
}

} // namespace detail

/// One representative per isomorphism class of unrooted trees on m vertices, rooted at 0.
inline std::vector<RootedTree> tree_shapes(int m) {
    std::map<std::string, RootedTree> shapes;
    for_each_labeled_tree(m, [&](const RootedTree &t) { shapes.try_emplace(detail::shape_code(t), t); });
    std::vector<RootedTree> out;
    for (auto &[code, t] : shapes)
        out.push_back(t);
    return out;
}

} // namespace kremove
