#pragma once

#include "kremove/errors.hpp"
#include "kremove/graph.hpp"
#include "kremove/random.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace kremove {

inline Graph complete_graph(int n) {
    std::vector<Edge> edges;
    for (Vertex u = 0; u < n; ++u)
        for (Vertex v = u + 1; v < n; ++v)
            edges.emplace_back(u, v);
    return Graph::from_edges(n, edges);
}

inline Graph cycle_graph(int n) {
    if (n < 3)
        throw std::invalid_argument("a cycle needs at least 3 vertices");
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v)
        edges.emplace_back(v, (v + 1) % n);
    return Graph::from_edges(n, edges);
}

inline Graph path_graph(int n) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v + 1 < n; ++v)
        edges.emplace_back(v, v + 1);
    return Graph::from_edges(n, edges);
}

/// Hub 0 joined to the cycle 1..n-1.
inline Graph wheel_graph(int n) {
    if (n < 4)
        throw std::invalid_argument("a wheel needs at least 4 vertices");
    std::vector<Edge> edges;
    for (Vertex v = 1; v < n; ++v) {
        edges.emplace_back(0, v);
        edges.emplace_back(v, v + 1 < n ? v + 1 : 1);
    }
    return Graph::from_edges(n, edges);
}

/// Outer cycle 0..4, spokes i -- i+5, inner pentagram on 5..9.
inline Graph petersen_graph() {
    std::vector<Edge> edges;
    for (Vertex i = 0; i < 5; ++i) {
        edges.emplace_back(i, (i + 1) % 5);
        edges.emplace_back(i, i + 5);
        edges.emplace_back(5 + i, 5 + (i + 2) % 5);
    }
    return Graph::from_edges(10, edges);
}

/// Hub 0 joined to 1..n-1.
inline Graph star_graph(int n) {
    std::vector<Edge> edges;
    for (Vertex v = 1; v < n; ++v)
        edges.emplace_back(0, v);
    return Graph::from_edges(n, edges);
}

/// Parameters of a seeded batch of instances. n and m are upper ends; each instance draws its
/// order from [n_min, n] and its tree order from [m_min, m] (n_min, m_min <= 0 mean fixed).
/// delta_min <= 0 selects the theorem threshold for k.
struct InstanceSpec {
    int n = 10;
    int m = 3;
    int k = 2;
    int delta_min = 0;
    std::uint64_t seed = 1;
    int count = 1;
    int n_min = 0;
    int m_min = 0;
};

/// Minimum degree under which the constructive searches are proved to succeed: m for
/// connected hosts, m + 2 for 2-connected, m + 3 for 3-connected.
inline int theorem_degree(int k, int m) {
    switch (k) {
    case 1:
        return m;
    case 2:
        return m + 2;
    case 3:
        return m + 3;
    }
    throw std::invalid_argument("k must be 1, 2 or 3");
}

/// floor(3k/2) + m - 1, the conjectured threshold for general k.
inline int conjecture_degree(int k, int m) { return 3 * k / 2 + m - 1; }

inline constexpr int kGenerationAttempts = 10000;

/// Seeded random graph that is k-connected with min degree >= delta_min. Each attempt draws
/// G(n, p) with p aimed just above the target degree, tops up deficient vertices with edges
/// to random non-neighbors, then keeps the graph only if both predicates hold.
inline Graph random_k_connected_graph(int n, int k, int delta_min, std::uint64_t seed) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("k must be 1, 2 or 3");
    if (n <= std::max(delta_min, k))
        throw GenerationExhausted("no graph on " + std::to_string(n) + " vertices has min degree " +
                                  std::to_string(delta_min) + " and is " + std::to_string(k) + "-connected");
    SplitMix64 rng(seed);
    const double p = std::min(1.0, (delta_min + 0.5) / (n - 1));
    for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
        std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
        std::vector<int> deg(static_cast<std::size_t>(n), 0);
        auto link = [&](Vertex u, Vertex v) {
            adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
            adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = true;
            ++deg[static_cast<std::size_t>(u)];
            ++deg[static_cast<std::size_t>(v)];
        };
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = u + 1; v < n; ++v)
                if (rng.unit() < p)
                    link(u, v);
        for (Vertex u = 0; u < n; ++u)
            while (deg[static_cast<std::size_t>(u)] < delta_min) {
                std::vector<Vertex> free;
                for (Vertex v = 0; v < n; ++v)
                    if (v != u && !adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)])
                        free.push_back(v);
                link(u, free[rng.below(free.size())]);
            }
        std::vector<Edge> edges;
        for (Vertex u = 0; u < n; ++u)
            for (Vertex v = u + 1; v < n; ++v)
                if (adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)])
                    edges.emplace_back(u, v);
        Graph g = Graph::from_edges(n, edges);
        if (min_degree(g) >= delta_min && is_k_connected(g, k))
            return g;
    }
    throw GenerationExhausted("no " + std::to_string(k) + "-connected graph found in " +
                              std::to_string(kGenerationAttempts) + " attempts");
}

inline Graph random_k_connected_graph(const InstanceSpec &spec) {
    const int delta = spec.delta_min > 0 ? spec.delta_min : theorem_degree(spec.k, spec.m);
    return random_k_connected_graph(spec.n, spec.k, delta, spec.seed);
}

} // namespace kremove
