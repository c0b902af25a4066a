#pragma once

#include "kremove/errors.hpp"
#include "kremove/graph.hpp"
#include "kremove/vertex_set.hpp"

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace kremove {

/// An induced subgraph B that is a subdivision of a simple 3-connected graph. Branch vertices
/// have degree >= 3 in B; every other vertex is inner to exactly one ear.
struct SubdivisionCert {
    VertexSet vertices;
    VertexSet branch;
    std::vector<Path> ears;

    int t() const { return branch.size(); }
    int order() const { return vertices.size(); }
    /// Degree-2 vertices, i.e. B \ X.
    VertexSet inner() const { return vertices - branch; }

    /// Index of the ear whose vertices include every member of `s`.
    std::optional<std::size_t> ear_containing(const VertexSet &s) const {
        for (std::size_t i = 0; i < ears.size(); ++i) {
            VertexSet on(vertices.universe());
            for (Vertex v : ears[i])
                on.insert(v);
            if (s.is_subset_of(on))
                return i;
        }
        return std::nullopt;
    }

    /// Index of the ear carrying degree-2 vertex y.
    std::optional<std::size_t> ear_of(Vertex y) const {
        for (std::size_t i = 0; i < ears.size(); ++i)
            for (std::size_t j = 1; j + 1 < ears[i].size(); ++j)
                if (ears[i][j] == y)
                    return i;
        return std::nullopt;
    }
};

namespace detail {

struct EarScan {
    VertexSet branch;
    std::vector<Path> ears;
    std::optional<std::string> defect;
};

inline EarScan scan_ears(const Graph &g, const VertexSet &b) {
    EarScan out{VertexSet(g.order()), {}, std::nullopt};
    auto deg = [&](Vertex v) { return g.neighborhood(v).count_common(b); };
    bool low_degree = false;
    b.for_each([&](Vertex v) {
        if (deg(v) >= 3)
            out.branch.insert(v);
        else if (deg(v) < 2)
            low_degree = true;
    });
    if (b.empty()) {
        out.defect = "empty vertex set";
        return out;
    }
    if (low_degree) {
        out.defect = "a vertex has fewer than two neighbors inside the set";
        return out;
    }
    VertexSet covered = out.branch;
    for (Vertex x : out.branch.members()) {
        for (Vertex y : g.neighbors(x)) {
            if (!b.contains(y))
                continue;
            Path ear{x, y};
            Vertex prev = x, cur = y;
            while (!out.branch.contains(cur)) {
                Vertex next = kNoVertex;
                for (Vertex w : g.neighbors(cur))
                    if (b.contains(w) && w != prev)
                        next = w;
                prev = cur;
                cur = next;
                ear.push_back(cur);
            }
            if (ear.front() == ear.back()) {
                out.defect = "an ear starts and ends at branch vertex " + std::to_string(x);
                return out;
            }
            for (Vertex v : ear)
                covered.insert(v);
            // Each ear is met once from either end; keep the walk from the smaller end.
            if (ear.front() < ear.back())
                out.ears.push_back(std::move(ear));
        }
    }
    if (covered != b)
        out.defect = "a cycle of degree-2 vertices carries no branch vertex";
    return out;
}

} // namespace detail

/// Why G[b] is not a subdivision of a simple 3-connected graph, or nullopt.
inline std::optional<std::string> subdivision_defect(const Graph &g, const VertexSet &b) {
    auto scan = detail::scan_ears(g, b);
    if (scan.defect)
        return scan.defect;
    if (!is_connected(g, b))
        return "induced subgraph is disconnected";
    std::set<std::pair<Vertex, Vertex>> ends;
    for (const auto &ear : scan.ears)
        if (!ends.emplace(ear.front(), ear.back()).second)
            return "two ears join " + std::to_string(ear.front()) + " and " + std::to_string(ear.back());
    const auto branch = scan.branch.members();
    std::vector<Vertex> index(static_cast<std::size_t>(g.order()), kNoVertex);
    for (std::size_t i = 0; i < branch.size(); ++i)
        index[static_cast<std::size_t>(branch[i])] = static_cast<Vertex>(i);
    std::vector<Edge> contracted;
    for (auto [a, c] : ends)
        contracted.emplace_back(index[static_cast<std::size_t>(a)], index[static_cast<std::size_t>(c)]);
    if (!is_k_connected(Graph::from_edges(static_cast<int>(branch.size()), contracted), 3))
        return "contracting the ears does not give a 3-connected graph";
    return std::nullopt;
}

/// Certificate for G[b]; throws NoSubdivision naming the defect when b does not qualify.
inline SubdivisionCert certify_subdivision(const Graph &g, const VertexSet &b) {
    if (auto defect = subdivision_defect(g, b))
        throw NoSubdivision(*defect);
    auto scan = detail::scan_ears(g, b);
    return SubdivisionCert{b, std::move(scan.branch), std::move(scan.ears)};
}

/// Whether G[active] contains a K4 minor (equivalently a K4 subdivision): true exactly when
/// deleting vertices of degree <= 1 and suppressing vertices of degree 2 cannot empty it.
inline bool has_k4_minor(const Graph &g, const VertexSet &active) {
    std::vector<VertexSet> nbrs(static_cast<std::size_t>(g.order()), VertexSet(g.order()));
    active.for_each([&](Vertex v) { nbrs[static_cast<std::size_t>(v)] = g.neighborhood(v) & active; });
    VertexSet alive = active;
    bool changed = true;
    while (changed && !alive.empty()) {
        changed = false;
        for (Vertex v : alive.members()) {
            auto &nv = nbrs[static_cast<std::size_t>(v)];
            const int d = nv.size();
            if (d > 2)
                continue;
            const auto ends = nv.members();
            for (Vertex w : ends)
                nbrs[static_cast<std::size_t>(w)].erase(v);
            if (d == 2) {
                nbrs[static_cast<std::size_t>(ends[0])].insert(ends[1]);
                nbrs[static_cast<std::size_t>(ends[1])].insert(ends[0]);
            }
            alive.erase(v);
            changed = true;
        }
    }
    return !alive.empty();
}

/// Inclusion-minimal induced subgraph of G - forbidden that still contains a K4 subdivision,
/// found by deleting vertices in ascending order whenever the rest keeps a K4 minor.
inline SubdivisionCert build_subdivision_base(const Graph &g, const VertexSet &forbidden) {
    VertexSet active = forbidden.complement();
    if (!has_k4_minor(g, active))
        throw NoSubdivision("no K4 subdivision outside the forbidden set");
    for (Vertex v : active.members()) {
        VertexSet trial = active;
        trial.erase(v);
        if (has_k4_minor(g, trial))
            active = std::move(trial);
    }
    return certify_subdivision(g, active);
}

} // namespace kremove
