#pragma once

#include "kremove/embedding.hpp"
#include "kremove/graph.hpp"
#include "kremove/tree.hpp"

#include <optional>
#include <stdexcept>

namespace kremove {

/// True iff phi embeds T0 in G and G minus its image is k-connected.
inline bool verify_solution(const Graph &g, const RootedTree &t0, int k, const Embedding &phi) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("k must be 1, 2 or 3");
    if (!is_valid_embedding(g, t0, phi))
        return false;
    return is_k_connected(g, phi.image(g.order()).complement(), k);
}

/// First embedding in enumeration order whose removal leaves a k-connected graph.
inline std::optional<Embedding> brute_force_removable(const Graph &g, const RootedTree &t0, int k,
                                                      EnumerationOrder order = EnumerationOrder::Ascending) {
    if (k < 1 || k > 3)
        throw std::invalid_argument("k must be 1, 2 or 3");
    std::optional<Embedding> found;
    enumerate_embeddings(
        g, t0, 0,
        [&](const Embedding &phi) {
            if (is_k_connected(g, phi.image(g.order()).complement(), k)) {
                found = phi;
                return false;
            }
            return true;
        },
        g.vertices(), order);
    return found;
}

} // namespace kremove
