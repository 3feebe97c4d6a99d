"""Spanning trees of weighted graphs.

Two extractors feed the tree labeler: a deterministic maximum-similarity
spanning tree (Kruskal over descending weights, so the tree minimizes total
resistance 1/w), and Wilson's loop-erased random walk sampler, whose output
distribution over spanning trees is proportional to the product of the tree's
edge weights.  Disconnected inputs yield a spanning forest with one root per
component.
"""

from __future__ import annotations

import numpy as np

from .graph import WeightedGraph, component_ids

__all__ = [
    "SpanningTree",
    "max_similarity_spanning_tree",
    "wilson_random_spanning_tree",
]


class SpanningTree:
    """Rooted spanning forest stored as parent arrays.

    ``parent[i] == -1`` marks a root (exactly one per connected component of
    the source graph).  ``parent_weight`` and ``parent_edge_id`` describe the
    edge to the parent and are NaN / -1 at roots.  Every tree edge exists in
    the source graph with identical weight.
    """

    def __init__(self, parent, parent_weight, parent_edge_id):
        self.parent = np.asarray(parent, dtype=np.int64)
        self.parent_weight = np.asarray(parent_weight, dtype=np.float64)
        self.parent_edge_id = np.asarray(parent_edge_id, dtype=np.int64)
        self.n = len(self.parent)
        self._children = None
        self._adj = None

    @property
    def roots(self) -> np.ndarray:
        return np.flatnonzero(self.parent < 0)

    @property
    def num_edges(self) -> int:
        return int((self.parent >= 0).sum())

    def children_csr(self):
        """CSR arrays ``(indptr, children)``; children sorted by node id."""
        if self._children is None:
            nodes = np.flatnonzero(self.parent >= 0)
            order = np.argsort(self.parent[nodes], kind="stable")
            kids = nodes[order]
            counts = np.bincount(self.parent[nodes], minlength=self.n)
            indptr = np.concatenate([[0], np.cumsum(counts)])
            self._children = (indptr, kids)
        return self._children

    def preorder(self) -> np.ndarray:
        """All nodes with every parent preceding its children."""
        indptr, kids = self.children_csr()
        indptr_l, kids_l = indptr.tolist(), kids.tolist()
        order = np.empty(self.n, dtype=np.int64)
        pos = 0
        stack = self.roots.tolist()[::-1]
        while stack:
            u = stack.pop()
            order[pos] = u
            pos += 1
            stack.extend(kids_l[indptr_l[u]:indptr_l[u + 1]][::-1])
        return order[:pos]

    def adjacency(self):
        """Undirected CSR view of the tree: ``(indptr, nbr, weight, child_key)``.

        ``child_key`` identifies the tree edge by its child endpoint, which is
        the natural per-edge index for a rooted tree.
        """
        if self._adj is None:
            nodes = np.flatnonzero(self.parent >= 0)
            src = np.concatenate([nodes, self.parent[nodes]])
            dst = np.concatenate([self.parent[nodes], nodes])
            wgt = np.concatenate([self.parent_weight[nodes]] * 2)
            key = np.concatenate([nodes, nodes])
            order = np.argsort(src, kind="stable")
            counts = np.bincount(src, minlength=self.n)
            indptr = np.concatenate([[0], np.cumsum(counts)])
            self._adj = (indptr, dst[order], wgt[order], key[order])
        return self._adj

    def edges(self):
        """Iterate tree edges as ``(child, parent, weight, source_edge_id)``."""
        for child in np.flatnonzero(self.parent >= 0):
            yield (int(child), int(self.parent[child]),
                   float(self.parent_weight[child]),
                   int(self.parent_edge_id[child]))

    def total_similarity(self) -> float:
        mask = self.parent >= 0
        return float(self.parent_weight[mask].sum())

    def to_graph(self) -> WeightedGraph:
        """The tree itself as a WeightedGraph (edge ids renumbered)."""
        mask = self.parent >= 0
        nodes = np.flatnonzero(mask)
        return WeightedGraph(self.n, nodes, self.parent[nodes],
                             self.parent_weight[nodes])

    def validate(self, g: WeightedGraph) -> None:
        """Raise AssertionError unless this is a spanning forest of ``g``."""
        assert self.n == g.n, "node count mismatch"
        comp = component_ids(g)
        n_components = len(np.unique(comp)) if g.n else 0
        assert len(self.roots) == n_components, "one root per component"
        order = self.preorder()
        assert len(order) == self.n, "parent links must reach every node"
        for child in np.flatnonzero(self.parent >= 0):
            eid = self.parent_edge_id[child]
            assert 0 <= eid < g.num_edges, "edge id out of range"
            ends = {int(g.edge_u[eid]), int(g.edge_v[eid])}
            assert ends == {int(child), int(self.parent[child])}, \
                "tree edge not in source graph"
            assert g.edge_w[eid] == self.parent_weight[child], \
                "tree edge weight differs from source"

    def __repr__(self):
        return f"SpanningTree(n={self.n}, roots={len(self.roots)})"


def _orient(g: WeightedGraph, chosen: np.ndarray) -> SpanningTree:
    """Turn an acyclic chosen-edge set into parent arrays.

    The root of each component is its smallest node id.
    """
    n = g.n
    src = np.concatenate([g.edge_u[chosen], g.edge_v[chosen]])
    dst = np.concatenate([g.edge_v[chosen], g.edge_u[chosen]])
    wgt = np.concatenate([g.edge_w[chosen]] * 2)
    eid = np.concatenate([chosen, chosen])
    order = np.argsort(src, kind="stable")
    nbr, wgt, eid = dst[order], wgt[order], eid[order]
    counts = np.bincount(src, minlength=n)
    ptr = np.concatenate([[0], np.cumsum(counts)])

    parent = np.full(n, -1, dtype=np.int64)
    parent_w = np.full(n, np.nan)
    parent_eid = np.full(n, -1, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    for start in range(n):
        if visited[start]:
            continue
        visited[start] = True
        stack = [start]
        while stack:
            u = stack.pop()
            for k in range(ptr[u], ptr[u + 1]):
                v = int(nbr[k])
                if not visited[v]:
                    visited[v] = True
                    parent[v] = u
                    parent_w[v] = wgt[k]
                    parent_eid[v] = eid[k]
                    stack.append(v)
    return SpanningTree(parent, parent_w, parent_eid)


def max_similarity_spanning_tree(g: WeightedGraph) -> SpanningTree:
    """Spanning forest of maximum total similarity.

    Equivalently the forest minimizing total resistance (sum of 1/w), built
    by Kruskal over edges in descending weight order.  Deterministic: weight
    ties break toward the smaller edge id.
    """
    order = np.argsort(-g.edge_w, kind="stable")
    parent_uf = list(range(g.n))

    def find(x: int) -> int:
        root = x
        while parent_uf[root] != root:
            root = parent_uf[root]
        while parent_uf[x] != root:
            parent_uf[x], x = root, parent_uf[x]
        return root

    chosen = []
    for eid in order:
        ru, rv = find(int(g.edge_u[eid])), find(int(g.edge_v[eid]))
        if ru != rv:
            parent_uf[ru] = rv
            chosen.append(int(eid))
    return _orient(g, np.array(sorted(chosen), dtype=np.int64))


def wilson_random_spanning_tree(g: WeightedGraph, seed: int) -> SpanningTree:
    """Sample a spanning tree by loop-erased random walks.

    Each component gets a uniformly chosen root; walks step to a neighbor
    with probability proportional to the edge weight, so the sampled tree's
    probability is proportional to the product of its edge weights.  The
    stream is a seeded PCG64 generator, making every draw reproducible.
    """
    rng = np.random.default_rng(seed)
    ptr, nbr, wgt, eid = g.adjacency
    n = g.n

    parent = np.full(n, -1, dtype=np.int64)
    parent_w = np.full(n, np.nan)
    parent_eid = np.full(n, -1, dtype=np.int64)
    in_tree = np.zeros(n, dtype=bool)
    nxt = np.full(n, -1, dtype=np.int64)
    nxt_slot = np.full(n, -1, dtype=np.int64)

    comp = component_ids(g)
    for root_of in np.unique(comp):
        members = np.flatnonzero(comp == root_of)
        root = int(rng.choice(members))
        in_tree[root] = True

    for start in range(n):
        if in_tree[start]:
            continue
        # loop-erased walk: overwriting nxt[] on revisit erases the loop
        u = start
        while not in_tree[u]:
            lo, hi = ptr[u], ptr[u + 1]
            cum = np.cumsum(wgt[lo:hi])
            slot = int(np.searchsorted(cum, rng.random() * cum[-1], "right"))
            slot = min(slot, hi - lo - 1)
            nxt[u] = nbr[lo + slot]
            nxt_slot[u] = lo + slot
            u = int(nxt[u])
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            parent[u] = nxt[u]
            parent_w[u] = wgt[nxt_slot[u]]
            parent_eid[u] = eid[nxt_slot[u]]
            u = int(nxt[u])
    return SpanningTree(parent, parent_w, parent_eid)
