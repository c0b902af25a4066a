#pragma once

#include "kremove/errors.hpp"
#include "kremove/vertex_set.hpp"

#include <algorithm>
#include <climits>
#include <deque>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kremove {

using Edge = std::pair<Vertex, Vertex>;

/// Ordered vertex sequence v1..vq. Consecutive vertices are adjacent, no vertex repeats.
using Path = std::vector<Vertex>;

/// Simple undirected graph on vertices 0..n-1. Immutable once built.
class Graph {
  public:
    Graph() = default;
    explicit Graph(int n) : adj_(static_cast<std::size_t>(n)), rows_(static_cast<std::size_t>(n), VertexSet(n)) {}

    /// Throws std::invalid_argument on loops, repeated edges or out-of-range endpoints.
    static Graph from_edges(int n, std::span<const Edge> edges) {
        if (n < 0)
            throw std::invalid_argument("negative vertex count");
        Graph g(n);
        for (auto [u, v] : edges) {
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw std::invalid_argument("edge endpoint out of range: " + std::to_string(u) + " " +
                                            std::to_string(v));
            if (u == v)
                throw std::invalid_argument("loop at vertex " + std::to_string(u));
            if (g.rows_[static_cast<std::size_t>(u)].contains(v))
                throw std::invalid_argument("repeated edge " + std::to_string(u) + " " + std::to_string(v));
            g.rows_[static_cast<std::size_t>(u)].insert(v);
            g.rows_[static_cast<std::size_t>(v)].insert(u);
            ++g.edges_;
        }
        for (Vertex v = 0; v < n; ++v)
            g.adj_[static_cast<std::size_t>(v)] = g.rows_[static_cast<std::size_t>(v)].members();
        return g;
    }

    static Graph from_edges(int n, const std::vector<Edge> &edges) {
        return from_edges(n, std::span<const Edge>(edges));
    }

    int order() const noexcept { return static_cast<int>(adj_.size()); }
    int size() const noexcept { return edges_; }

    std::span<const Vertex> neighbors(Vertex v) const { return adj_.at(index(v)); }
    const VertexSet &neighborhood(Vertex v) const { return rows_.at(index(v)); }
    int degree(Vertex v) const { return static_cast<int>(adj_.at(index(v)).size()); }
    bool adjacent(Vertex u, Vertex v) const { return rows_.at(index(u)).contains(v); }

    VertexSet vertices() const { return VertexSet::full(order()); }

    /// Edges with u < v, sorted.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(static_cast<std::size_t>(edges_));
        for (Vertex u = 0; u < order(); ++u)
            for (Vertex v : neighbors(u))
                if (u < v)
                    out.emplace_back(u, v);
        return out;
    }

    friend bool operator==(const Graph &a, const Graph &b) { return a.adj_ == b.adj_; }

  private:
    std::size_t index(Vertex v) const {
        if (v < 0 || v >= order())
            throw std::out_of_range("vertex " + std::to_string(v) + " not in graph of order " +
                                    std::to_string(order()));
        return static_cast<std::size_t>(v);
    }

    std::vector<std::vector<Vertex>> adj_;
    std::vector<VertexSet> rows_;
    int edges_ = 0;
};

inline int degree(const Graph &g, Vertex v) { return g.degree(v); }

/// N(v) ∩ S.
inline VertexSet neighbors_in(const Graph &g, Vertex v, const VertexSet &s) { return g.neighborhood(v) & s; }

/// N_G(U): vertices outside U with a neighbor in U.
inline VertexSet neighborhood_of(const Graph &g, const VertexSet &u) {
    VertexSet out(g.order());
    u.for_each([&](Vertex v) { out |= g.neighborhood(v); });
    return out - u;
}

/// Minimum degree of the subgraph induced by `active`; INT_MAX when `active` is empty.
inline int min_degree(const Graph &g, const VertexSet &active) {
    int best = INT_MAX;
    active.for_each([&](Vertex v) { best = std::min(best, g.neighborhood(v).count_common(active)); });
    return best;
}

inline int min_degree(const Graph &g) { return g.order() == 0 ? INT_MAX : min_degree(g, g.vertices()); }

/// Induced subgraph on V(G) \ S. `to_old[new]` and `to_new[old]` (kNoVertex when deleted)
/// translate between labelings; relabeling preserves vertex order.
struct InducedGraph {
    Graph graph;
    std::vector<Vertex> to_old;
    std::vector<Vertex> to_new;

    VertexSet lift(const VertexSet &s) const {
        VertexSet out(static_cast<int>(to_new.size()));
        s.for_each([&](Vertex v) { out.insert(to_old[static_cast<std::size_t>(v)]); });
        return out;
    }
    VertexSet restrict(const VertexSet &s) const {
        VertexSet out(graph.order());
        s.for_each([&](Vertex v) {
            if (auto w = to_new[static_cast<std::size_t>(v)]; w != kNoVertex)
                out.insert(w);
        });
        return out;
    }
};

inline InducedGraph delete_vertices(const Graph &g, const VertexSet &removed) {
    InducedGraph out;
    out.to_new.assign(static_cast<std::size_t>(g.order()), kNoVertex);
    for (Vertex v = 0; v < g.order(); ++v) {
        if (removed.contains(v))
            continue;
        out.to_new[static_cast<std::size_t>(v)] = static_cast<Vertex>(out.to_old.size());
        out.to_old.push_back(v);
    }
    std::vector<Edge> edges;
    for (auto [u, v] : g.edges()) {
        auto nu = out.to_new[static_cast<std::size_t>(u)];
        auto nv = out.to_new[static_cast<std::size_t>(v)];
        if (nu != kNoVertex && nv != kNoVertex)
            edges.emplace_back(nu, nv);
    }
    out.graph = Graph::from_edges(static_cast<int>(out.to_old.size()), edges);
    return out;
}

inline InducedGraph induced_subgraph(const Graph &g, const VertexSet &keep) {
    return delete_vertices(g, keep.complement());
}

// ---------------------------------------------------------------------------
// Connectivity

/// Number of connected components of G[active].
inline int component_count(const Graph &g, const VertexSet &active) {
    VertexSet seen(g.order());
    int components = 0;
    std::vector<Vertex> stack;
    active.for_each([&](Vertex s) {
        if (seen.contains(s))
            return;
        ++components;
        seen.insert(s);
        stack.push_back(s);
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (Vertex w : g.neighbors(v))
                if (active.contains(w) && !seen.contains(w)) {
                    seen.insert(w);
                    stack.push_back(w);
                }
        }
    });
    return components;
}

inline bool is_connected(const Graph &g, const VertexSet &active) {
    return !active.empty() && component_count(g, active) == 1;
}

inline bool is_connected(const Graph &g) { return is_connected(g, g.vertices()); }

/// k-connectivity of G[active] for k in {1,2,3}: more than k vertices and no separating set
/// of fewer than k vertices. Checked by enumerating every candidate cut.
inline bool is_k_connected(const Graph &g, const VertexSet &active, int k) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("is_k_connected supports k in {1,2,3}, got " + std::to_string(k));
    if (active.size() <= k || !is_connected(g, active))
        return false;
    const auto members = active.members();
    if (k >= 2) {
        for (Vertex u : members) {
            auto rest = active;
            rest.erase(u);
            if (!is_connected(g, rest))
                return false;
        }
    }
    if (k >= 3) {
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                auto rest = active;
                rest.erase(members[i]);
                rest.erase(members[j]);
                if (!is_connected(g, rest))
                    return false;
            }
    }
    return true;
}

inline bool is_k_connected(const Graph &g, int k) { return is_k_connected(g, g.vertices(), k); }

// ---------------------------------------------------------------------------
// Blocks

struct BlockDecomposition {
    std::vector<VertexSet> blocks;
    VertexSet cut_vertices;
};

/// Block/cut-vertex decomposition of G[active]. Bridges are 2-vertex blocks and isolated
/// vertices are singleton blocks. Blocks are ordered by smallest member.
inline BlockDecomposition blocks(const Graph &g, const VertexSet &active) {
    const int n = g.order();
    BlockDecomposition out{{}, VertexSet(n)};
    std::vector<int> disc(static_cast<std::size_t>(n), -1);
    std::vector<int> low(static_cast<std::size_t>(n), 0);
    std::vector<Edge> edge_stack;
    int clock = 0;

    struct Frame {
        Vertex v;
        Vertex parent;
        std::size_t next;
    };

    for (Vertex s : active.members()) {
        if (disc[static_cast<std::size_t>(s)] != -1)
            continue;
        disc[static_cast<std::size_t>(s)] = low[static_cast<std::size_t>(s)] = clock++;
        if (g.neighborhood(s).count_common(active) == 0) {
            out.blocks.push_back(VertexSet(n, {s}));
            continue;
        }
        int root_children = 0;
        std::vector<Frame> frames{{s, kNoVertex, 0}};
        while (!frames.empty()) {
            const Vertex v = frames.back().v;
            auto nbrs = g.neighbors(v);
            if (frames.back().next < nbrs.size()) {
                const Vertex w = nbrs[frames.back().next++];
                if (!active.contains(w))
                    continue;
                auto wi = static_cast<std::size_t>(w);
                auto vi = static_cast<std::size_t>(v);
                if (disc[wi] == -1) {
                    edge_stack.emplace_back(v, w);
                    disc[wi] = low[wi] = clock++;
                    frames.push_back({w, v, 0});
                } else if (w != frames.back().parent && disc[wi] < disc[vi]) {
                    edge_stack.emplace_back(v, w);
                    low[vi] = std::min(low[vi], disc[wi]);
                }
                continue;
            }
            const Vertex p = frames.back().parent;
            frames.pop_back();
            if (p == kNoVertex)
                continue;
            auto pi = static_cast<std::size_t>(p);
            low[pi] = std::min(low[pi], low[static_cast<std::size_t>(v)]);
            if (low[static_cast<std::size_t>(v)] >= disc[pi]) {
                VertexSet block(n);
                while (true) {
                    auto e = edge_stack.back();
                    edge_stack.pop_back();
                    block.insert(e.first);
                    block.insert(e.second);
                    if (e == Edge{p, v})
                        break;
                }
                out.blocks.push_back(std::move(block));
                if (frames.size() > 1)
                    out.cut_vertices.insert(p);
                else
                    ++root_children;
            }
        }
        if (root_children > 1)
            out.cut_vertices.insert(s);
    }
    std::stable_sort(out.blocks.begin(), out.blocks.end(),
                     [](const VertexSet &a, const VertexSet &b) { return a.min() < b.min(); });
    return out;
}

inline BlockDecomposition blocks(const Graph &g) { return blocks(g, g.vertices()); }

/// Largest block of G[active]; ties go to the block with the smallest least vertex.
inline VertexSet max_block(const Graph &g, const VertexSet &active) {
    auto decomposition = blocks(g, active);
    VertexSet best(g.order());
    for (const auto &b : decomposition.blocks)
        if (b.size() > best.size() || (b.size() == best.size() && b.min() < best.min()))
            best = b;
    return best;
}

// ---------------------------------------------------------------------------
// Paths

inline bool is_path(const Graph &g, const Path &p) {
    if (p.empty())
        return false;
    VertexSet seen(g.order());
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0 || p[i] >= g.order() || seen.contains(p[i]))
            return false;
        seen.insert(p[i]);
        if (i > 0 && !g.adjacent(p[i - 1], p[i]))
            return false;
    }
    return true;
}

namespace detail {

constexpr int kUnreached = INT_MAX;

// Distances to `target` along paths whose vertices other than `target` stay in `corridor`.
inline std::vector<int> corridor_distances(const Graph &g, Vertex target, const VertexSet &corridor) {
    std::vector<int> dist(static_cast<std::size_t>(g.order()), kUnreached);
    std::deque<Vertex> queue;
    dist[static_cast<std::size_t>(target)] = 0;
    queue.push_back(target);
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex w : g.neighbors(v))
            if (corridor.contains(w) && dist[static_cast<std::size_t>(w)] == kUnreached) {
                dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
                queue.push_back(w);
            }
    }
    return dist;
}

// Lexicographically smallest shortest walk from `start` down a distance field to `target`.
// The first step always enters the corridor.
inline Path descend(const Graph &g, Vertex start, const std::vector<int> &dist, const VertexSet &corridor,
                    Vertex target) {
    Path path{start};
    Vertex cur = start;
    int remaining = INT_MAX;
    for (Vertex w : g.neighbors(cur))
        if (corridor.contains(w) && dist[static_cast<std::size_t>(w)] != kUnreached)
            remaining = std::min(remaining, dist[static_cast<std::size_t>(w)]);
    while (cur != target) {
        Vertex next = kNoVertex;
        for (Vertex w : g.neighbors(cur))
            if ((corridor.contains(w) || (w == target && cur != start)) &&
                dist[static_cast<std::size_t>(w)] == remaining) {
                next = w;
                break;
            }
        path.push_back(next);
        cur = next;
        --remaining;
    }
    return path;
}

} // namespace detail

/// Shortest path with both ends in B, every inner vertex outside B and at least one inner
/// vertex. Ties: smaller (first, last) endpoint pair, then lexicographic sequence.
inline Path shortest_ear_path(const Graph &g, const VertexSet &b) {
    const VertexSet outside = b.complement();
    int best_len = detail::kUnreached;
    Vertex best_a = kNoVertex, best_b = kNoVertex;
    std::vector<int> best_dist;
    for (Vertex target : b.members()) {
        auto dist = detail::corridor_distances(g, target, outside);
        b.for_each([&](Vertex a) {
            if (a >= target)
                return;
            int len = detail::kUnreached;
            for (Vertex x : g.neighbors(a))
                if (outside.contains(x) && dist[static_cast<std::size_t>(x)] != detail::kUnreached)
                    len = std::min(len, dist[static_cast<std::size_t>(x)] + 1);
            if (len == detail::kUnreached)
                return;
            if (len < best_len || (len == best_len && std::pair(a, target) < std::pair(best_a, best_b))) {
                best_len = len;
                best_a = a;
                best_b = target;
                best_dist = dist;
            }
        });
    }
    if (best_a == kNoVertex)
        throw NoSuchPath("no path with both ends in the set and an inner vertex outside it");
    return detail::descend(g, best_a, best_dist, outside, best_b);
}

/// Shortest (X,Y)-path: one end in X, the other in Y, inner vertices outside X ∪ Y.
/// A vertex in X ∩ Y is a path of length zero.
inline Path find_xy_path(const Graph &g, const VertexSet &x, const VertexSet &y) {
    if (x.empty() || y.empty())
        throw NoSuchPath("empty end set");
    if (auto common = x & y; !common.empty())
        return Path{common.min()};
    const VertexSet inner = (x | y).complement();
    std::vector<int> dist(static_cast<std::size_t>(g.order()), detail::kUnreached);
    std::deque<Vertex> queue;
    y.for_each([&](Vertex v) {
        dist[static_cast<std::size_t>(v)] = 0;
        queue.push_back(v);
    });
    while (!queue.empty()) {
        Vertex v = queue.front();
        queue.pop_front();
        for (Vertex w : g.neighbors(v)) {
            auto wi = static_cast<std::size_t>(w);
            if (dist[wi] != detail::kUnreached || y.contains(w))
                continue;
            dist[wi] = dist[static_cast<std::size_t>(v)] + 1;
            if (inner.contains(w))
                queue.push_back(w);
        }
    }
    Vertex start = kNoVertex;
    x.for_each([&](Vertex v) {
        if (dist[static_cast<std::size_t>(v)] != detail::kUnreached &&
            (start == kNoVertex || dist[static_cast<std::size_t>(v)] < dist[static_cast<std::size_t>(start)]))
            start = v;
    });
    if (start == kNoVertex)
        throw NoSuchPath("no (X,Y)-path");
    Path path{start};
    Vertex cur = start;
    while (!y.contains(cur)) {
        const int want = dist[static_cast<std::size_t>(cur)] - 1;
        for (Vertex w : g.neighbors(cur))
            if (dist[static_cast<std::size_t>(w)] == want && (inner.contains(w) || y.contains(w))) {
                cur = w;
                break;
            }
        path.push_back(cur);
    }
    return path;
}

/// `count` paths from u to B that pairwise share only u and end at their first vertex in B,
/// minimizing total length. Solved as a unit-capacity min-cost flow on the vertex-split graph.
inline std::vector<Path> fan_to_set(const Graph &g, Vertex u, const VertexSet &b, int count) {
    if (b.contains(u))
        throw std::invalid_argument("fan source lies in the target set");
    const int n = g.order();
    const int sink = 2 * n;
    auto in = [](Vertex v) { return 2 * v; };
    auto out = [](Vertex v) { return 2 * v + 1; };

    struct Arc {
        int to;
        int cap;
        int cost;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<int>> incident(static_cast<std::size_t>(2 * n + 1));
    auto add_arc = [&](int from, int to, int cost) {
        incident[static_cast<std::size_t>(from)].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({to, 1, cost});
        incident[static_cast<std::size_t>(to)].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({from, 0, -cost});
    };
    for (Vertex v = 0; v < n; ++v) {
        if (b.contains(v))
            add_arc(in(v), sink, 0);
        else if (v != u)
            add_arc(in(v), out(v), 0);
    }
    for (Vertex x = 0; x < n; ++x) {
        if (b.contains(x))
            continue;
        for (Vertex y : g.neighbors(x))
            if (y != u)
                add_arc(out(x), in(y), 1);
    }

    const int source = out(u);
    for (int round = 0; round < count; ++round) {
        std::vector<int> dist(static_cast<std::size_t>(2 * n + 1), INT_MAX);
        std::vector<int> via(static_cast<std::size_t>(2 * n + 1), -1);
        dist[static_cast<std::size_t>(source)] = 0;
        for (int pass = 0; pass <= 2 * n + 1; ++pass) {
            bool changed = false;
            for (int node = 0; node <= 2 * n; ++node) {
                auto d = dist[static_cast<std::size_t>(node)];
                if (d == INT_MAX)
                    continue;
                for (int id : incident[static_cast<std::size_t>(node)]) {
                    const auto &arc = arcs[static_cast<std::size_t>(id)];
                    if (arc.cap > 0 && d + arc.cost < dist[static_cast<std::size_t>(arc.to)]) {
                        dist[static_cast<std::size_t>(arc.to)] = d + arc.cost;
                        via[static_cast<std::size_t>(arc.to)] = id;
                        changed = true;
                    }
                }
            }
            if (!changed)
                break;
        }
        if (dist[static_cast<std::size_t>(sink)] == INT_MAX)
            throw NoSuchFan("only " + std::to_string(round) + " disjoint paths from " + std::to_string(u) +
                            " to the target set");
        for (int node = sink; node != source;) {
            int id = via[static_cast<std::size_t>(node)];
            arcs[static_cast<std::size_t>(id)].cap -= 1;
            arcs[static_cast<std::size_t>(id ^ 1)].cap += 1;
            node = arcs[static_cast<std::size_t>(id ^ 1)].to;
        }
    }

    // Flow decomposition: every saturated forward arc out of a vertex carries one path.
    auto used = [&](int id) { return id % 2 == 0 && arcs[static_cast<std::size_t>(id)].cap == 0; };
    std::vector<Path> paths;
    for (int id : incident[static_cast<std::size_t>(source)]) {
        if (!used(id))
            continue;
        Path p{u};
        int node = arcs[static_cast<std::size_t>(id)].to;
        while (true) {
            Vertex v = node / 2;
            p.push_back(v);
            if (b.contains(v))
                break;
            int next = -1;
            for (int e : incident[static_cast<std::size_t>(out(v))])
                if (used(e)) {
                    next = arcs[static_cast<std::size_t>(e)].to;
                    break;
                }
            node = next;
        }
        paths.push_back(std::move(p));
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

} // namespace kremove
