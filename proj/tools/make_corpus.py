#!/usr/bin/env python3
"""Generates the graph6 corpora stored under data/.

  two_connected_mindeg4_n8.g6  every 2-connected graph on <= 8 vertices with
                               minimum degree >= 4
  all_graphs_n8.g6             every graph on 1..8 vertices

One graph6 line per isomorphism class. Graphs on <= 7 vertices come from the
networkx graph atlas; graphs on 8 vertices are produced by adding a vertex to
each 7-vertex atlas graph and removing isomorphic duplicates. Deleting any
vertex of an 8-vertex graph with minimum degree d leaves a 7-vertex graph with
minimum degree >= d - 1, so restricting the base graphs that way loses nothing.
"""
import itertools
import os
import sys

import networkx as nx


def min_degree(g):
    return min((d for _, d in g.degree()), default=0)


def corpus(min_deg, biconnected):
    def keep(g):
        if g.number_of_nodes() == 0 or min_degree(g) < min_deg:
            return False
        return not biconnected or nx.is_biconnected(g)

    found = [g for g in nx.graph_atlas_g() if keep(g)]
    buckets = {}
    for base in nx.graph_atlas_g():
        if base.number_of_nodes() != 7 or min_degree(base) < min_deg - 1:
            continue
        for size in range(max(min_deg, 0), 8):
            for nbrs in itertools.combinations(range(7), size):
                g = base.copy()
                g.add_node(7)
                g.add_edges_from((7, v) for v in nbrs)
                if not keep(g):
                    continue
                key = nx.weisfeiler_lehman_graph_hash(g, iterations=4)
                bucket = buckets.setdefault(key, [])
                if not any(nx.is_isomorphic(g, h) for h in bucket):
                    bucket.append(g)
    for key in sorted(buckets):
        found.extend(buckets[key])
    return found


def write(path, graphs):
    with open(path, "wb") as f:
        for g in graphs:
            f.write(nx.to_graph6_bytes(g, header=False))
    print(f"{len(graphs)} graphs written to {path}", file=sys.stderr)


def main(out_dir):
    write(os.path.join(out_dir, "two_connected_mindeg4_n8.g6"), corpus(4, True))
    write(os.path.join(out_dir, "all_graphs_n8.g6"), corpus(0, False))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data")
