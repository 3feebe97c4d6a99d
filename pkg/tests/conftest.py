"""Shared generators and independent oracles for the test suite.

The oracles here deliberately avoid the library's own code paths: spanning
trees are enumerated by brute force, black-line flags are recomputed by a
quadratic per-edge reachability test, and equilibria are checked against
exhaustive best-response scans.
"""

from itertools import combinations

import numpy as np

from mucca.graph import PartialLabeling, WeightedGraph, from_edge_list
from mucca.spanning import SpanningTree


def random_tree_graph(rng, n, weights="uniform"):
    """Random tree as (graph, parent_array); node i attaches below i."""
    parent = np.full(n, -1, dtype=np.int64)
    triples = []
    for i in range(1, n):
        p = int(rng.integers(0, i))
        parent[i] = p
        if weights == "uniform":
            w = float(rng.uniform(0.0, 1.0))
            w = w if w > 0 else 1.0  # uniform(0,1] with zero excluded
        elif weights == "dyadic":
            w = float(rng.choice([0.25, 0.5, 1.0, 2.0, 4.0]))
        else:
            w = 1.0
        triples.append((i, p, w))
    g = from_edge_list(triples, n=n)
    return g, parent


def tree_from_parents(g: WeightedGraph, parent: np.ndarray) -> SpanningTree:
    """Build a SpanningTree over g whose edges are exactly g's edges."""
    n = g.n
    pw = np.full(n, np.nan)
    pe = np.full(n, -1, dtype=np.int64)
    lookup = {}
    for eid, (u, v, w) in enumerate(g.edges()):
        lookup[(u, v)] = (w, eid)
        lookup[(v, u)] = (w, eid)
    for i in range(n):
        if parent[i] >= 0:
            pw[i], pe[i] = lookup[(i, int(parent[i]))]
    return SpanningTree(parent, pw, pe)


def random_revealed(rng, n, c, min_revealed=1, rate=0.3):
    """Partial labeling with at least ``min_revealed`` random reveals."""
    labels = np.full(n, -1, dtype=np.int64)
    k = max(min_revealed, int(rng.binomial(n, rate)))
    k = min(k, n)
    chosen = rng.choice(n, size=k, replace=False)
    labels[chosen] = rng.integers(0, c, size=k)
    return PartialLabeling(labels, num_classes=c)


def enumerate_spanning_trees(g: WeightedGraph):
    """All spanning trees of a connected graph as frozensets of edge ids.

    Brute force over edge subsets of size n-1; only for tiny graphs.
    """
    m = g.num_edges
    n = g.n
    trees = []
    for combo in combinations(range(m), n - 1):
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        acyclic = True
        for eid in combo:
            ru, rv = find(int(g.edge_u[eid])), find(int(g.edge_v[eid]))
            if ru == rv:
                acyclic = False
                break
            parent[ru] = rv
        if acyclic:
            trees.append(frozenset(combo))
    return trees


def black_flags_quadratic(tree: SpanningTree, labeling: PartialLabeling):
    """Per-edge oracle: does some revealed pair's tree path use the edge?

    A revealed pair's path crosses the edge between ``child`` and its parent
    exactly when each side of the cut holds a revealed node, so both sides
    are walked independently for every edge.
    """
    revealed = labeling.revealed_mask
    ptr, nbr, _, _ = tree.adjacency()

    def revealed_on_side(start, banned_a, banned_b):
        seen = {start}
        stack = [start]
        count = 0
        while stack:
            u = stack.pop()
            if revealed[u]:
                count += 1
            for v in nbr[ptr[u]:ptr[u + 1]]:
                v = int(v)
                if (u, v) in ((banned_a, banned_b), (banned_b, banned_a)):
                    continue
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return count

    flags = np.zeros(tree.n, dtype=bool)
    for child in np.flatnonzero(tree.parent >= 0):
        child = int(child)
        par = int(tree.parent[child])
        below = revealed_on_side(child, child, par)
        above = revealed_on_side(par, child, par)
        flags[child] = below >= 1 and above >= 1
    return flags
