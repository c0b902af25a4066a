#pragma once

#include "kremove/embedding.hpp"
#include "kremove/errors.hpp"
#include "kremove/graph.hpp"
#include "kremove/improvement.hpp"
#include "kremove/oracle.hpp"
#include "kremove/subdivision.hpp"
#include "kremove/tree.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace kremove {

/// Smallest x with G - x still k-connected.
inline Vertex find_removable_vertex(const Graph &g, int k) {
    for (Vertex v = 0; v < g.order(); ++v) {
        VertexSet rest = g.vertices();
        rest.erase(v);
        if (is_k_connected(g, rest, k))
            return v;
    }
    throw NotFound("no vertex leaves a " + std::to_string(k) + "-connected graph");
}

/// Order of the largest block left after removing the embedded tree.
inline int potential_2(const Graph &g, const Embedding &phi) {
    return max_block(g, phi.image(g.order()).complement()).size();
}

/// (t(B), -|B|), compared lexicographically.
inline std::pair<int, int> potential_3(const SubdivisionCert &cert) { return {cert.t(), -cert.order()}; }

/// A search step that broke one of its own runtime checks.
struct Incident {
    std::string instance;
    std::string stage;
    std::string claim;
    nlohmann::json state;
    nlohmann::json potential_before;
    nlohmann::json potential_after;
    std::string message;

    nlohmann::json to_json() const {
        return {{"instance", instance},
                {"stage", stage},
                {"claim", claim},
                {"state", state},
                {"potential_before", potential_before},
                {"potential_after", potential_after},
                {"message", message}};
    }
};

struct SearchOptions {
    bool fallback = true;
    /// Re-check the three-neighbor bound on every state that reaches the path step (k = 3).
    bool check_neighbor_bound = false;
    /// Starting tree instead of the greedy one.
    std::optional<Embedding> start;
};

struct SearchResult {
    Embedding embedding;
    int iterations = 0;
    std::vector<Incident> incidents;
    /// Potential after the initial tree and after every accepted move, as a lexicographic key:
    /// {block order} for k = 2, {t(B), -|B|} for k = 3.
    std::vector<std::vector<int>> potentials;
    std::vector<std::string> moves;
    bool used_fallback = false;
};

/// FNV-1a over the edge list and the parent array; names an instance in incident records.
inline std::string instance_hash(const Graph &g, const RootedTree &t0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&](long long x) {
        for (int i = 0; i < 8; ++i) {
            h ^= static_cast<std::uint64_t>(x >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    mix(g.order());
    for (auto [u, v] : g.edges()) {
        mix(u);
        mix(v);
    }
    mix(t0.order());
    for (Vertex p : t0.parents())
        mix(p);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace detail {

inline nlohmann::json set_json(const VertexSet &s) { return s.members(); }

/// Where a search is, kept current so a failure can be reported with full context.
struct Tracker {
    std::string stage = "start";
    std::string claim;
    nlohmann::json state;
    nlohmann::json potential;
};

template <typename Body>
SearchResult run_guarded(const Graph &g, const RootedTree &t0, int k, const SearchOptions &options, Body body) {
    SearchResult result;
    Tracker tracker;
    std::string message;
    try {
        body(result, tracker);
        if (!verify_solution(g, t0, k, result.embedding))
            throw InternalContradiction("final", "returned tree does not verify");
        return result;
    } catch (const HypothesisUnmet &) {
        throw;
    } catch (const std::exception &e) {
        message = e.what();
    }
    nlohmann::json after = nullptr;
    result.incidents.push_back(
        Incident{instance_hash(g, t0), tracker.stage, tracker.claim, tracker.state, tracker.potential, after, message});
    if (!options.fallback)
        throw SearchFailed(message);
    auto found = brute_force_removable(g, t0, k);
    if (!found)
        throw SearchFailed("constructive search failed (" + message + ") and no removable tree exists");
    result.embedding = *found;
    result.used_fallback = true;
    return result;
}

inline void require_hypothesis(const Graph &g, const RootedTree &t0, int k, int slack) {
    if (!is_k_connected(g, k))
        throw HypothesisUnmet("graph is not " + std::to_string(k) + "-connected");
    if (min_degree(g) < t0.order() + slack)
        throw HypothesisUnmet("minimum degree " + std::to_string(min_degree(g)) + " is below " +
                              std::to_string(t0.order() + slack));
}

inline Embedding single_vertex(Vertex v) {
    Embedding phi(1);
    phi[0] = v;
    return phi;
}

inline Embedding greedy_outside(const Graph &g, const RootedTree &t0, const VertexSet &forbidden,
                                const std::string &stage) {
    const VertexSet allowed = forbidden.complement();
    if (allowed.size() < t0.order() || min_degree(g, allowed) < t0.order() - 1)
        throw InternalContradiction(stage, "minimum degree outside the protected set is below m - 1");
    return greedy_embed(g, t0, allowed);
}

} // namespace detail

// ---------------------------------------------------------------------------
// 2-connected

/// Tree T' ≅ T0 with G - V(T') 2-connected; needs G 2-connected with min degree >= m + 2.
/// Grows the largest block of the complement until it is everything.
inline SearchResult search_removable_tree_2(const Graph &g, const RootedTree &t0, const SearchOptions &options = {}) {
    detail::require_hypothesis(g, t0, 2, 2);
    return detail::run_guarded(g, t0, 2, options, [&](SearchResult &out, detail::Tracker &tr) {
        const int n = g.order();
        const int m = t0.order();
        if (m == 1) {
            tr.stage = "single vertex";
            out.embedding = detail::single_vertex(find_removable_vertex(g, 2));
            out.potentials.push_back({potential_2(g, out.embedding)});
            return;
        }
        tr.stage = "initial tree";
        Embedding phi = options.start ? *options.start : greedy_embed(g, t0);
        int before = potential_2(g, phi);
        out.potentials.push_back({before});
        while (true) {
            const VertexSet rest = phi.image(n).complement();
            if (is_k_connected(g, rest, 2))
                break;
            const VertexSet b = max_block(g, rest);
            const TBHState state{phi, b, rest - b};
            tr.state = {{"embedding", phi.map}, {"B", detail::set_json(b)}, {"H", detail::set_json(state.h)}};
            tr.potential = before;
            if (state.h.empty())
                throw InternalContradiction("final", "complement is one block but not 2-connected");

            tr.stage = "improvement";
            tr.claim = "lemma";
            const Outcome outcome = improve_or_certify(g, t0, state, m + 1);
            if (auto defect = outcome_defect(g, t0, state, m + 1, outcome))
                throw InternalContradiction("outcome", *defect);
            Embedding next;
            std::string move;
            if (outcome.tag == OutcomeTag::C) {
                next = outcome.embedding;
                move = outcome.via;
            } else {
                tr.stage = "ear path";
                tr.claim = std::string("outcome ") + to_string(outcome.tag);
                const Path q = shortest_ear_path(g, b);
                next = detail::greedy_outside(g, t0, b | VertexSet::of(n, q), "ear path");
                move = "ear path";
            }
            const int after = potential_2(g, next);
            if (after <= before)
                throw InternalContradiction("potential", "block order " + std::to_string(before) + " -> " +
                                                             std::to_string(after) + " after " + move);
            if (++out.iterations > n)
                throw InternalContradiction("iterations", "more accepted moves than vertices");
            out.potentials.push_back({after});
            out.moves.push_back(move);
            before = after;
            phi = std::move(next);
        }
        out.embedding = phi;
    });
}

inline Embedding find_removable_tree_2(const Graph &g, const RootedTree &t0) {
    return search_removable_tree_2(g, t0).embedding;
}

// ---------------------------------------------------------------------------
// 3-connected

namespace detail {

struct Move3 {
    Embedding embedding;
    SubdivisionCert cert;
    std::string via;
};

inline bool better(const SubdivisionCert &a, const SubdivisionCert &b) { return potential_3(a) > potential_3(b); }

/// B with u attached: absorbed as a new branch vertex when its B-neighbors are not on one
/// ear, or as a shortcut of the ear segment between its outermost neighbors otherwise.
inline std::optional<SubdivisionCert> attach_vertex(const Graph &g, const SubdivisionCert &cert, Vertex u,
                                                    std::string &via) {
    const VertexSet nb = g.neighborhood(u) & cert.vertices;
    if (nb.size() < 2)
        return std::nullopt;
    const auto ear = cert.ear_containing(nb);
    VertexSet grown = cert.vertices;
    if (!ear) {
        if (nb.size() < 3)
            return std::nullopt;
        grown.insert(u);
        via = "absorb";
    } else {
        const Path &q = cert.ears[*ear];
        std::size_t a = q.size(), b = 0;
        for (std::size_t i = 0; i < q.size(); ++i)
            if (nb.contains(q[i])) {
                a = std::min(a, i);
                b = std::max(b, i);
            }
        if (b - a < 3)
            return std::nullopt;
        for (std::size_t i = a + 1; i < b; ++i)
            grown.erase(q[i]);
        grown.insert(u);
        via = "shortcut";
    }
    if (subdivision_defect(g, grown))
        return std::nullopt;
    auto next = certify_subdivision(g, grown);
    if (!better(next, cert))
        return std::nullopt;
    return next;
}

/// Re-embedding avoiding `forbidden`: the current one if already disjoint, else the greedy
/// construction when the degree bound allows it, else exhaustive search.
inline std::optional<Embedding> tree_outside(const Graph &g, const RootedTree &t0, const Embedding &phi,
                                             const VertexSet &forbidden) {
    if (!phi.image(g.order()).intersects(forbidden))
        return phi;
    return embed_avoiding(g, t0, forbidden);
}

/// Shortest path from u (on an ear) through vertices outside B to every other B-vertex.
inline std::vector<Path> paths_off_subdivision(const Graph &g, const SubdivisionCert &cert, Vertex u) {
    const int n = g.order();
    std::vector<Vertex> parent(static_cast<std::size_t>(n), kNoVertex);
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    std::deque<Vertex> queue{u};
    dist[static_cast<std::size_t>(u)] = 0;
    std::vector<Path> out;
    while (!queue.empty()) {
        const Vertex v = queue.front();
        queue.pop_front();
        for (Vertex w : g.neighbors(v)) {
            auto wi = static_cast<std::size_t>(w);
            if (dist[wi] != -1)
                continue;
            if (cert.vertices.contains(w)) {
                if (v == u)
                    continue; // would reuse an edge of B
                dist[wi] = dist[static_cast<std::size_t>(v)] + 1;
                parent[wi] = v;
                continue;
            }
            dist[wi] = dist[static_cast<std::size_t>(v)] + 1;
            parent[wi] = v;
            queue.push_back(w);
        }
    }
    cert.vertices.for_each([&](Vertex v) {
        if (v == u || dist[static_cast<std::size_t>(v)] == -1)
            return;
        Path p{v};
        while (p.back() != u)
            p.push_back(parent[static_cast<std::size_t>(p.back())]);
        std::reverse(p.begin(), p.end());
        out.push_back(std::move(p));
    });
    return out;
}

inline std::vector<Vertex> neighbor_bound_violations(const Graph &g, const RootedTree &t0, const Embedding &phi,
                                                     const SubdivisionCert &cert) {
    std::vector<Vertex> out;
    cert.vertices.complement().for_each([&](Vertex v) {
        if (g.neighborhood(v).count_common(cert.vertices) <= 3)
            return;
        VertexSet forbidden = cert.vertices;
        forbidden.insert(v);
        if (tree_outside(g, t0, phi, forbidden))
            out.push_back(v);
    });
    return out;
}

inline std::optional<Move3> next_move_3(const Graph &g, const RootedTree &t0, const Embedding &phi,
                                        const SubdivisionCert &cert, const SearchOptions &options, Tracker &tr) {
    const int n = g.order();
    const int m = t0.order();
    const VertexSet image = phi.image(n);
    const VertexSet h = (image | cert.vertices).complement();
    std::string via;

    tr.stage = "attach";
    tr.claim = "claim 1/2 in H";
    for (Vertex u : h.members())
        if (auto next = attach_vertex(g, cert, u, via))
            return Move3{phi, *next, via + " H"};

    tr.claim = "claim 3";
    for (Vertex v : image.members()) {
        if (g.neighborhood(v).count_common(cert.vertices) < 4)
            continue;
        const TBHState state{phi, cert.vertices, h};
        const Outcome outcome = improve_or_certify(g, t0, state, m + 3);
        if (auto defect = outcome_defect(g, t0, state, m + 3, outcome))
            throw InternalContradiction("outcome", *defect);
        Vertex spared = outcome.vertex;
        Embedding rebuilt = outcome.embedding;
        if (outcome.tag == OutcomeTag::B)
            throw InternalContradiction("claim 3", "outcome B although a tree vertex has four B-neighbors");
        if (outcome.tag == OutcomeTag::A) {
            spared = v;
            rebuilt = greedy_outside(g, t0, image | cert.vertices, "claim 3");
        }
        auto next = attach_vertex(g, cert, spared, via);
        if (!next)
            throw InternalContradiction("claim 3", "spared vertex " + std::to_string(spared) + " cannot be attached");
        return Move3{rebuilt, *next, via + " lemma " + outcome.via};
    }

    tr.claim = "claim 1/2 in T";
    for (Vertex u : image.members()) {
        auto next = attach_vertex(g, cert, u, via);
        if (!next)
            continue;
        VertexSet forbidden = next->vertices;
        if (auto moved = tree_outside(g, t0, phi, forbidden))
            return Move3{*moved, *next, via + " T"};
    }

    if (cert.inner().empty()) {
        tr.stage = "fan";
        tr.claim = "claim 4";
        std::vector<std::pair<std::size_t, Vertex>> order;
        std::vector<std::vector<Path>> fans(static_cast<std::size_t>(n));
        cert.vertices.complement().for_each([&](Vertex u) {
            try {
                auto paths = fan_to_set(g, u, cert.vertices, 3);
                std::size_t total = 0;
                for (const auto &p : paths)
                    total += p.size();
                fans[static_cast<std::size_t>(u)] = std::move(paths);
                order.emplace_back(total, u);
            } catch (const NoSuchFan &) {
            }
        });
        std::sort(order.begin(), order.end());
        for (auto [total, u] : order) {
            VertexSet grown = cert.vertices;
            for (const auto &p : fans[static_cast<std::size_t>(u)])
                for (Vertex v : p)
                    grown.insert(v);
            if (subdivision_defect(g, grown))
                continue;
            auto next = certify_subdivision(g, grown);
            if (!better(next, cert))
                continue;
            if (auto moved = tree_outside(g, t0, phi, grown))
                return Move3{*moved, next, "fan"};
        }
    }

    if (options.check_neighbor_bound) {
        if (auto bad = neighbor_bound_violations(g, t0, phi, cert); !bad.empty())
            throw InternalContradiction("claim 3", "vertex " + std::to_string(bad.front()) +
                                                       " has four B-neighbors and a tree avoiding it");
    }

    tr.stage = "path";
    tr.claim = "(Y,B)-path";
    std::vector<std::tuple<std::size_t, Vertex, Vertex, Path>> candidates;
    cert.inner().for_each([&](Vertex u) {
        const auto ear = cert.ear_of(u);
        VertexSet on_ear(n);
        for (Vertex v : cert.ears[*ear])
            on_ear.insert(v);
        for (auto &p : paths_off_subdivision(g, cert, u))
            if (!on_ear.contains(p.back()))
                candidates.emplace_back(p.size(), u, p.back(), std::move(p));
    });
    std::sort(candidates.begin(), candidates.end());
    for (const auto &[len, u, v, p] : candidates) {
        VertexSet grown = cert.vertices | VertexSet::of(n, p);
        if (subdivision_defect(g, grown))
            continue;
        auto next = certify_subdivision(g, grown);
        if (!better(next, cert) || next.t() <= cert.t())
            continue;
        if (auto moved = tree_outside(g, t0, phi, grown))
            return Move3{*moved, next, "path"};
    }
    return std::nullopt;
}

} // namespace detail

/// Tree T' ≅ T0 with G - V(T') 3-connected; needs G 3-connected with min degree >= m + 3.
/// Maintains an induced subdivision B of a 3-connected graph outside the tree and improves
/// (t(B), -|B|) until B is the whole complement.
inline SearchResult search_removable_tree_3(const Graph &g, const RootedTree &t0, const SearchOptions &options = {}) {
    detail::require_hypothesis(g, t0, 3, 3);
    return detail::run_guarded(g, t0, 3, options, [&](SearchResult &out, detail::Tracker &tr) {
        const int n = g.order();
        if (t0.order() == 1) {
            tr.stage = "single vertex";
            out.embedding = detail::single_vertex(find_removable_vertex(g, 3));
            auto [t, size] = potential_3(build_subdivision_base(g, out.embedding.image(n)));
            out.potentials.push_back({t, size});
            return;
        }
        tr.stage = "initial tree";
        Embedding phi = options.start ? *options.start : greedy_embed(g, t0);
        SubdivisionCert cert = build_subdivision_base(g, phi.image(n));
        auto pot_key = [](const SubdivisionCert &c) {
            auto [t, size] = potential_3(c);
            return std::vector<int>{t, size};
        };
        out.potentials.push_back(pot_key(cert));
        while (!is_k_connected(g, phi.image(n).complement(), 3)) {
            tr.state = {{"embedding", phi.map}, {"B", detail::set_json(cert.vertices)},
                        {"branch", detail::set_json(cert.branch)}};
            tr.potential = pot_key(cert);
            if ((phi.image(n) | cert.vertices) == g.vertices())
                throw InternalContradiction("final", "B is the whole complement but not 3-connected");
            auto move = detail::next_move_3(g, t0, phi, cert, options, tr);
            if (!move)
                throw InternalContradiction("no move", "no improvement applies");
            if (auto defect = embedding_defect(g, t0, move->embedding))
                throw InternalContradiction("move", "embedding invalid after " + move->via + ": " + *defect);
            if (move->embedding.image(n).intersects(move->cert.vertices))
                throw InternalContradiction("move", "tree meets B after " + move->via);
            if (auto defect = subdivision_defect(g, move->cert.vertices))
                throw InternalContradiction("move", "B invalid after " + move->via + ": " + *defect);
            if (!detail::better(move->cert, cert))
                throw InternalContradiction("potential", "no strict increase after " + move->via);
            if (++out.iterations > n * n)
                throw InternalContradiction("iterations", "more accepted moves than n^2");
            out.potentials.push_back(pot_key(move->cert));
            out.moves.push_back(move->via);
            phi = std::move(move->embedding);
            cert = std::move(move->cert);
        }
        out.embedding = phi;
    });
}

inline Embedding find_removable_tree_3(const Graph &g, const RootedTree &t0) {
    return search_removable_tree_3(g, t0).embedding;
}

/// Dispatch on k: the constructive searches for k = 2, 3 and the oracle for k = 1.
inline SearchResult search_removable_tree(const Graph &g, const RootedTree &t0, int k,
                                          const SearchOptions &options = {}) {
    if (k == 2)
        return search_removable_tree_2(g, t0, options);
    if (k == 3)
        return search_removable_tree_3(g, t0, options);
    if (k != 1)
        throw std::invalid_argument("k must be 1, 2 or 3");
    auto found = brute_force_removable(g, t0, 1);
    if (!found)
        throw SearchFailed("no tree leaves a connected graph");
    SearchResult out;
    out.embedding = *found;
    return out;
}

} // namespace kremove
