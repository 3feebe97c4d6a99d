"""Weighted graphs and node labelings.

The graph is undirected with strictly positive edge weights interpreted as
similarities.  Nodes are dense integers ``0..n-1`` so adjacency lookups are
O(1) array slices; external node names, if any, are mapped before the graph
is built.  Graphs and labelings are immutable after construction and safe to
share across workers.

Full labelings are plain ``numpy`` integer arrays of shape ``(n,)``; partial
labelings use ``-1`` as the unrevealed sentinel and are wrapped in
:class:`PartialLabeling`, which also carries the class count.
"""

from __future__ import annotations

import io
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DuplicateEdgeError,
    EmptyGraphError,
    MalformedLineError,
    NonPositiveWeightError,
    SelfLoopError,
)

__all__ = [
    "WeightedGraph",
    "PartialLabeling",
    "from_edge_list",
    "weighted_cut_fraction",
    "connected_components",
    "parse_edge_list",
    "load_edge_list",
    "dump_edge_list",
    "save_edge_list",
    "parse_labels",
    "load_labels",
    "dump_labels",
    "save_labels",
]

UNREVEALED = -1


class WeightedGraph:
    """Undirected graph with positive edge weights in CSR adjacency form.

    Attributes
    ----------
    n : int
        Node count; nodes are ``0..n-1``.
    edge_u, edge_v, edge_w : ndarray
        Endpoint and weight arrays, one entry per edge.  The edge id is the
        index into these arrays.
    """

    def __init__(self, n: int, edge_u, edge_v, edge_w):
        self.n = int(n)
        self.edge_u = np.asarray(edge_u, dtype=np.int64)
        self.edge_v = np.asarray(edge_v, dtype=np.int64)
        self.edge_w = np.asarray(edge_w, dtype=np.float64)
        self._build_adjacency()

    def _build_adjacency(self):
        m = self.num_edges
        src = np.concatenate([self.edge_u, self.edge_v])
        dst = np.concatenate([self.edge_v, self.edge_u])
        wgt = np.concatenate([self.edge_w, self.edge_w])
        eid = np.concatenate([np.arange(m), np.arange(m)])
        order = np.argsort(src, kind="stable")
        self._adj_nbr = dst[order]
        self._adj_w = wgt[order]
        self._adj_eid = eid[order]
        counts = np.bincount(src, minlength=self.n)
        self._adj_ptr = np.concatenate([[0], np.cumsum(counts)])

    @property
    def num_edges(self) -> int:
        return len(self.edge_w)

    @property
    def total_weight(self) -> float:
        return float(self.edge_w.sum())

    def neighbors(self, u: int):
        """Return ``(neighbor_ids, weights, edge_ids)`` array views for node u."""
        lo, hi = self._adj_ptr[u], self._adj_ptr[u + 1]
        return self._adj_nbr[lo:hi], self._adj_w[lo:hi], self._adj_eid[lo:hi]

    def degree(self, u: int) -> int:
        return int(self._adj_ptr[u + 1] - self._adj_ptr[u])

    @property
    def adjacency(self):
        """CSR arrays ``(indptr, neighbors, weights, edge_ids)`` of the whole graph."""
        return self._adj_ptr, self._adj_nbr, self._adj_w, self._adj_eid

    def edges(self) -> Iterable[tuple[int, int, float]]:
        for u, v, w in zip(self.edge_u, self.edge_v, self.edge_w):
            yield int(u), int(v), float(w)

    def weight_matrix(self):
        """Symmetric sparse CSR weight matrix of shape (n, n)."""
        from scipy.sparse import coo_matrix

        src = np.concatenate([self.edge_u, self.edge_v])
        dst = np.concatenate([self.edge_v, self.edge_u])
        wgt = np.concatenate([self.edge_w, self.edge_w])
        return coo_matrix((wgt, (src, dst)), shape=(self.n, self.n)).tocsr()

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, edges={self.num_edges})"


def from_edge_list(triples: Iterable[tuple[int, int, float]],
                   n: int | None = None) -> WeightedGraph:
    """Build a graph from ``(u, v, w)`` triples.

    Node count defaults to ``1 + max node id``.  Rejects self loops,
    non-positive or non-finite weights, and duplicate unordered pairs; error
    messages name the offending entry by position.
    """
    us, vs, ws = [], [], []
    seen: dict[tuple[int, int], int] = {}
    for idx, triple in enumerate(triples):
        try:
            u, v, w = triple
            u, v, w = int(u), int(v), float(w)
        except (TypeError, ValueError) as exc:
            raise MalformedLineError(f"edge {idx}: cannot parse {triple!r}") from exc
        if u < 0 or v < 0:
            raise MalformedLineError(f"edge {idx}: negative node id in {triple!r}")
        if u == v:
            raise SelfLoopError(f"edge {idx}: self loop at node {u}")
        if not (w > 0.0) or not np.isfinite(w):
            raise NonPositiveWeightError(f"edge {idx}: weight {w!r} for ({u}, {v})")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEdgeError(
                f"edge {idx}: pair ({u}, {v}) already given at edge {seen[key]}")
        seen[key] = idx
        us.append(u)
        vs.append(v)
        ws.append(w)
    max_id = max((max(us, default=-1), max(vs, default=-1)))
    if n is None:
        n = max_id + 1
    elif max_id >= n:
        raise MalformedLineError(f"node id {max_id} out of range for n={n}")
    return WeightedGraph(max(n, 0), us, vs, ws)


def weighted_cut_fraction(g: WeightedGraph, y) -> float:
    """Weight of label-disagreeing edges divided by total edge weight.

    This is the irregularity of the labeling ``y`` on ``g``: 0 when adjacent
    nodes always agree, approaching 1 as heavy edges cross class boundaries.
    """
    if g.num_edges == 0:
        raise EmptyGraphError("cut fraction needs at least one edge")
    y = np.asarray(y)
    cut = g.edge_w[y[g.edge_u] != y[g.edge_v]].sum()
    return float(cut / g.edge_w.sum())


def component_ids(g: WeightedGraph) -> np.ndarray:
    """Per-node component id; ids are the smallest node of each component."""
    ptr, nbr = g._adj_ptr, g._adj_nbr
    comp = np.full(g.n, -1, dtype=np.int64)
    for start in range(g.n):
        if comp[start] >= 0:
            continue
        comp[start] = start
        stack = [start]
        while stack:
            u = stack.pop()
            for v in nbr[ptr[u]:ptr[u + 1]]:
                if comp[v] < 0:
                    comp[v] = start
                    stack.append(int(v))
    return comp


def connected_components(g: WeightedGraph) -> list[np.ndarray]:
    """Partition of ``0..n-1`` by reachability, ordered by smallest member."""
    comp = component_ids(g)
    order = np.argsort(comp, kind="stable")
    splits = np.flatnonzero(np.diff(comp[order])) + 1
    return [np.sort(part) for part in np.split(order, splits)]


# -- edge-list text format ----------------------------------------------------
#
# One `u v w` triple per line, whitespace separated.  `#` starts a comment;
# blank lines are skipped.

def parse_edge_list(lines: Iterable[str], n: int | None = None) -> WeightedGraph:
    triples = []
    positions = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise MalformedLineError(
                f"line {lineno}: expected 'u v w', got {raw.rstrip()!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError as exc:
            raise MalformedLineError(
                f"line {lineno}: cannot parse {raw.rstrip()!r}") from exc
        triples.append((u, v, w))
        positions.append(lineno)
    try:
        return from_edge_list(triples, n=n)
    except (MalformedLineError, SelfLoopError, NonPositiveWeightError,
            DuplicateEdgeError) as exc:
        raise type(exc)(_remap_edge_message(str(exc), positions)) from None


def _remap_edge_message(message: str, positions: list[int]) -> str:
    # from_edge_list reports 0-based edge positions; translate to line numbers
    import re

    def repl(match):
        return f"line {positions[int(match.group(1))]}"

    return re.sub(r"edge (\d+)", repl, message)


def load_edge_list(path, n: int | None = None) -> WeightedGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh, n=n)


def dump_edge_list(g: WeightedGraph) -> str:
    buf = io.StringIO()
    for u, v, w in g.edges():
        buf.write(f"{u} {v} {w!r}\n")
    return buf.getvalue()


def save_edge_list(g: WeightedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_edge_list(g))


class PartialLabeling:
    """Per-node optional class in ``0..num_classes-1``; ``-1`` means unrevealed.

    The revealed subset is the training set.  Accepts either a sequence with
    ``None`` holes or an integer array using the ``-1`` sentinel.
    """

    def __init__(self, assignments: Sequence, num_classes: int | None = None):
        if isinstance(assignments, np.ndarray) and assignments.dtype != object:
            labels = assignments.astype(np.int64, copy=True)
        else:
            labels = np.array(
                [UNREVEALED if a is None else int(a) for a in assignments],
                dtype=np.int64)
        if labels.ndim != 1:
            raise ValueError("assignments must be one-dimensional")
        if (labels < UNREVEALED).any():
            raise ValueError("class ids must be >= 0 (-1 marks unrevealed)")
        revealed = labels >= 0
        if num_classes is None:
            num_classes = int(labels.max(initial=UNREVEALED)) + 1
        if revealed.any() and int(labels[revealed].max()) >= num_classes:
            raise ValueError(
                f"class id {int(labels[revealed].max())} outside "
                f"0..{num_classes - 1}")
        self.labels = labels
        self.labels.setflags(write=False)
        self.num_classes = int(num_classes)

    def __len__(self):
        return len(self.labels)

    @property
    def revealed_mask(self) -> np.ndarray:
        return self.labels >= 0

    @property
    def revealed_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.labels >= 0)

    @property
    def num_revealed(self) -> int:
        return int((self.labels >= 0).sum())

    def is_revealed(self, i: int) -> bool:
        return bool(self.labels[i] >= 0)

    def __getitem__(self, i):
        return self.labels[i]

    def plurality_class(self) -> int:
        """Most frequent revealed class; ties go to the smallest class id."""
        revealed = self.labels[self.labels >= 0]
        if len(revealed) == 0:
            raise ValueError("no revealed labels")
        counts = np.bincount(revealed, minlength=self.num_classes)
        return int(np.argmax(counts))

    def __repr__(self):
        return (f"PartialLabeling(n={len(self.labels)}, "
                f"revealed={self.num_revealed}, classes={self.num_classes})")


# -- labels text format ---------------------------------------------------
#
# One `node class` pair per line; nodes absent from the file are unrevealed.

def parse_labels(lines: Iterable[str], n: int,
                 num_classes: int | None = None) -> PartialLabeling:
    labels = np.full(n, UNREVEALED, dtype=np.int64)
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise MalformedLineError(
                f"line {lineno}: expected 'node class', got {raw.rstrip()!r}")
        try:
            node, cls = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise MalformedLineError(
                f"line {lineno}: cannot parse {raw.rstrip()!r}") from exc
        if not 0 <= node < n:
            raise MalformedLineError(f"line {lineno}: node {node} out of range")
        if cls < 0:
            raise MalformedLineError(f"line {lineno}: negative class {cls}")
        if labels[node] != UNREVEALED:
            raise MalformedLineError(f"line {lineno}: node {node} labeled twice")
        labels[node] = cls
    return PartialLabeling(labels, num_classes=num_classes)


def load_labels(path, n: int, num_classes: int | None = None) -> PartialLabeling:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_labels(fh, n, num_classes=num_classes)


def dump_labels(assignments) -> str:
    buf = io.StringIO()
    arr = assignments.labels if isinstance(assignments, PartialLabeling) else assignments
    for node, cls in enumerate(np.asarray(arr)):
        if cls >= 0:
            buf.write(f"{node} {int(cls)}\n")
    return buf.getvalue()


def save_labels(assignments, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_labels(assignments))
