"""Four-phase equilibrium labeling of a partially labeled tree.

Given a rooted spanning tree and a training labeling, the predictor

1. flags every edge lying on a path between two revealed nodes ("black
   line" edges) and collects the forks: unrevealed nodes with at least three
   incident black edges;
2. labels every fork by bottleneck majority over its incident hinge lines:
   each line contributes the weight of its minimum (epsilon) edge toward the
   class of its far endpoint, and lines between two forks are settled
   jointly by best-response rounds;
3. labels the interior of every hinge line (path between consecutive hinge
   nodes): uniformly when the endpoints agree, otherwise split at a
   minimum-weight edge of the line;
4. floods every remaining (grafted) subtree with the label of its unique
   attachment node.

The output is a pure Nash equilibrium of the graph transduction game played
on the tree: no unrevealed node can strictly raise its weighted agreement
with its tree neighbors by relabeling itself.  Components containing no
revealed node fall back to the training plurality class.

Everything here is linear in the node count except fork scoring, which costs
the size of the fork's native hinge tree per fork.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import NoRevealedNodesError, UnlabeledHingeNodeError
from .graph import PartialLabeling
from .spanning import SpanningTree

__all__ = [
    "HingeDecomposition",
    "EpsilonEdge",
    "mark_black_lines",
    "label_forks",
    "cut_hinge_lines",
    "label_grafted",
    "predict",
]

#: grafted-array sentinel: node is covered (revealed, fork, or on a hinge line)
COVERED = -1
#: grafted-array sentinel: node sits in a component with no revealed node
NO_ANCHOR = -2


@dataclass(frozen=True)
class EpsilonEdge:
    """A minimum-weight edge on a tree path.

    ``position`` is the edge's index along the path; when several edges tie
    for the minimum, the one closest to the path's start is taken.  ``key``
    identifies the tree edge (its child endpoint) when known, else -1.
    """

    key: int
    weight: float
    position: int


def epsilon_edge(weights, keys=None) -> EpsilonEdge:
    """First minimum-weight edge along a path given its edge weights."""
    weights = np.asarray(weights, dtype=np.float64)
    pos = int(np.argmin(weights))
    key = int(keys[pos]) if keys is not None else -1
    return EpsilonEdge(key=key, weight=float(weights[pos]), position=pos)


@dataclass
class HingeDecomposition:
    """Structural annotation of a tree under a partial labeling.

    ``black_line[i]`` flags the tree edge between node ``i`` and its parent
    (False at roots).  ``grafted`` maps every node outside the hinge
    structure to its unique attachment node; ``COVERED`` marks nodes that are
    revealed, forks, or hinge-line members, and ``NO_ANCHOR`` marks nodes in
    components without any revealed node.
    """

    black_line: np.ndarray
    forks: np.ndarray
    hinge_nodes: np.ndarray
    hinge_lines: list[np.ndarray]
    grafted: np.ndarray
    black_degree: np.ndarray = field(repr=False, default=None)

    def grafted_nodes(self) -> np.ndarray:
        return np.flatnonzero(self.grafted != COVERED)

    def category(self, labeling: PartialLabeling) -> np.ndarray:
        """Per-node category: 0 revealed, 1 fork, 2 line interior, 3 grafted."""
        n = len(self.black_line)
        cat = np.full(n, 3, dtype=np.int64)
        on_line = (self.black_degree > 0)
        cat[on_line] = 2
        cat[self.forks] = 1
        cat[labeling.revealed_mask] = 0
        return cat


def _line_weights(tree: SpanningTree, nodes: np.ndarray) -> np.ndarray:
    """Weights of the consecutive edges along a path of tree nodes."""
    parent = tree.parent
    out = np.empty(len(nodes) - 1)
    for t in range(len(nodes) - 1):
        a, b = int(nodes[t]), int(nodes[t + 1])
        out[t] = tree.parent_weight[a] if parent[a] == b else tree.parent_weight[b]
    return out


def mark_black_lines(tree: SpanningTree,
                     labeling: PartialLabeling) -> HingeDecomposition:
    """Phase 1 plus structure: black flags, forks, hinge lines, graft anchors.

    An edge is black exactly when the revealed count in the child-side
    subtree and in the rest of its component are both positive, which is the
    path criterion evaluated in one pass over the tree.
    """
    n = tree.n
    revealed = labeling.revealed_mask
    if not revealed.any():
        raise NoRevealedNodesError("no revealed nodes anywhere in the tree")

    order = tree.preorder()
    parent = tree.parent.tolist()
    order_list = order.tolist()

    comp = [0] * n
    for u in order_list:
        p = parent[u]
        comp[u] = u if p < 0 else comp[p]
    sub = revealed.astype(np.int64).tolist()
    for u in reversed(order_list):
        p = parent[u]
        if p >= 0:
            sub[p] += sub[u]

    comp = np.asarray(comp, dtype=np.int64)
    sub = np.asarray(sub, dtype=np.int64)
    nonroot = tree.parent >= 0
    black = np.zeros(n, dtype=bool)
    black[nonroot] = (sub[nonroot] >= 1) & \
        (sub[comp[nonroot]] - sub[nonroot] >= 1)

    black_nodes = np.flatnonzero(black)
    degree = np.zeros(n, dtype=np.int64)
    np.add.at(degree, black_nodes, 1)
    np.add.at(degree, tree.parent[black_nodes], 1)
    forks = np.flatnonzero(~revealed & (degree >= 3))

    is_hinge = revealed.copy()
    is_hinge[forks] = True
    hinge_nodes = np.flatnonzero(is_hinge)

    lines = _extract_hinge_lines(tree, black_nodes, is_hinge)
    grafted = _graft_anchors(tree, revealed, degree)

    return HingeDecomposition(
        black_line=black,
        forks=forks,
        hinge_nodes=hinge_nodes,
        hinge_lines=lines,
        grafted=grafted,
        black_degree=degree,
    )


def _extract_hinge_lines(tree: SpanningTree, black_nodes: np.ndarray,
                         is_hinge: np.ndarray) -> list[np.ndarray]:
    """Split the black subforest into paths between consecutive hinge nodes."""
    if len(black_nodes) == 0:
        return []
    n = tree.n
    src = np.concatenate([black_nodes, tree.parent[black_nodes]])
    dst = np.concatenate([tree.parent[black_nodes], black_nodes])
    key = np.concatenate([black_nodes, black_nodes])
    order = np.argsort(src, kind="stable")
    dst, key = dst[order], key[order]
    counts = np.bincount(src, minlength=n)
    ptr = np.concatenate([[0], np.cumsum(counts)])

    visited = np.zeros(n, dtype=bool)  # keyed by the edge's child endpoint
    lines: list[np.ndarray] = []
    black_endpoints = np.unique(np.concatenate([black_nodes,
                                                tree.parent[black_nodes]]))
    for h in black_endpoints:
        if not is_hinge[h]:
            continue
        for slot in range(ptr[h], ptr[h + 1]):
            if visited[key[slot]]:
                continue
            visited[key[slot]] = True
            line = [int(h), int(dst[slot])]
            prev, cur = int(h), int(dst[slot])
            while not is_hinge[cur]:
                nxt = -1
                for slot2 in range(ptr[cur], ptr[cur + 1]):
                    if dst[slot2] != prev:
                        nxt = int(dst[slot2])
                        visited[key[slot2]] = True
                        break
                assert nxt >= 0, "hinge line left the black subforest"
                line.append(nxt)
                prev, cur = cur, nxt
            lines.append(np.asarray(line, dtype=np.int64))
    return lines


def _graft_anchors(tree: SpanningTree, revealed: np.ndarray,
                   black_degree: np.ndarray) -> np.ndarray:
    """Attachment node for every node outside the hinge structure."""
    n = tree.n
    covered = revealed | (black_degree > 0)
    anchor = np.full(n, NO_ANCHOR, dtype=np.int64)
    anchor[covered] = COVERED
    ptr, nbr, _, _ = tree.adjacency()
    queue = deque(np.flatnonzero(covered).tolist())
    while queue:
        u = queue.popleft()
        for slot in range(ptr[u], ptr[u + 1]):
            v = int(nbr[slot])
            if anchor[v] == NO_ANCHOR:
                anchor[v] = u if anchor[u] == COVERED else anchor[u]
                queue.append(v)
    return anchor


def label_forks(tree: SpanningTree, labeling: PartialLabeling,
                decomp: HingeDecomposition) -> dict[int, int]:
    """Phase 2: pick each fork's class by bottleneck-edge majority.

    Each hinge line incident to a fork contributes the weight of its
    bottleneck edge (the line's minimum; the value a cut on that line could
    cost) toward the class of the line's other endpoint.  Since the lines
    are edge disjoint, a bottleneck segment shared by several same-class
    connection nodes enters a fork's score exactly once, through the single
    line that leads toward them.  A fork takes the class with the highest
    bottleneck total, ties to the smallest class id.

    Lines between two forks couple their choices: those scores are settled
    by best-response rounds over the forks, in ascending node order, which
    terminate because every switch strictly raises the total agreement the
    forks can lock in.  The stable outcome is what makes the final labeling
    a best response at every fork.
    """
    labels = labeling.labels
    c = labeling.num_classes
    forks = decomp.forks
    if len(forks) == 0:
        return {}
    is_fork = np.zeros(tree.n, dtype=bool)
    is_fork[forks] = True
    index = {int(f): i for i, f in enumerate(forks)}

    base = np.zeros((len(forks), c))
    fork_edges: list[tuple[int, int, float]] = []
    for nodes in decomp.hinge_lines:
        a, b = int(nodes[0]), int(nodes[-1])
        if not (is_fork[a] or is_fork[b]):
            continue
        eps = epsilon_edge(_line_weights(tree, nodes)).weight
        if is_fork[a] and is_fork[b]:
            fork_edges.append((index[a], index[b], eps))
        elif is_fork[a]:
            base[index[a], labels[b]] += eps
        else:
            base[index[b], labels[a]] += eps

    current = np.argmax(base, axis=1)
    if fork_edges:
        nbrs: list[list[tuple[int, float]]] = [[] for _ in forks]
        for i, j, eps in fork_edges:
            nbrs[i].append((j, eps))
            nbrs[j].append((i, eps))
        changed = True
        while changed:
            changed = False
            for i in range(len(forks)):
                scores = base[i].copy()
                for j, eps in nbrs[i]:
                    scores[current[j]] += eps
                best = int(np.argmax(scores))
                if scores[best] > scores[current[i]]:
                    current[i] = best
                    changed = True
    return {int(f): int(current[i]) for i, f in enumerate(forks)}


def _cut_position(weights: np.ndarray) -> int:
    """Index of the edge to cut on a line whose endpoints disagree.

    Returns ``j`` meaning interiors up to path node ``j`` keep the start
    label and the rest take the end label.  The cut always lands on a
    minimum-weight edge, the payoff-safe location; among tied minima the one
    best matching per-node nearest-endpoint preferences (resistance
    distance, ties toward the start) is chosen, smaller index on a tie.
    """
    eps = epsilon_edge(weights)
    candidates = np.flatnonzero(weights == eps.weight)
    if len(candidates) == 1:
        return eps.position
    resistance = 1.0 / weights
    total = resistance.sum()
    d0 = np.cumsum(resistance)[:-1]  # start -> interior node i+1
    prefers_start = d0 <= (total - d0)
    j_pref = int(prefers_start.sum())
    gap = np.abs(candidates - j_pref)
    return int(candidates[np.argmin(gap)])


def cut_hinge_lines(tree: SpanningTree, labeling: PartialLabeling,
                    decomp: HingeDecomposition,
                    fork_labels: dict[int, int]) -> np.ndarray:
    """Phase 3: label hinge-line interiors; -1 everywhere else.

    Lines with agreeing endpoints are filled uniformly.  Otherwise the line
    is split at a minimum-weight edge: interiors before the cut take the
    start endpoint's label, the rest the end endpoint's label.
    """
    endpoint = labeling.labels.copy()
    for fork, cls in fork_labels.items():
        endpoint[fork] = cls

    out = np.full(tree.n, -1, dtype=np.int64)
    for nodes in decomp.hinge_lines:
        a, b = int(nodes[0]), int(nodes[-1])
        la, lb = int(endpoint[a]), int(endpoint[b])
        if la < 0 or lb < 0:
            raise UnlabeledHingeNodeError(
                f"hinge line endpoint {a if la < 0 else b} has no label")
        if len(nodes) == 2:
            continue
        interiors = nodes[1:-1]
        if la == lb:
            out[interiors] = la
        else:
            weights = _line_weights(tree, nodes)
            j = _cut_position(weights)
            out[nodes[1:j + 1]] = la
            out[nodes[j + 1:-1]] = lb
    return out


def label_grafted(tree: SpanningTree, labeling: PartialLabeling,
                  decomp: HingeDecomposition, partial: np.ndarray) -> np.ndarray:
    """Phase 4: flood grafted subtrees from their attachment nodes.

    ``partial`` must label every covered node (revealed, forks, line
    interiors).  Components without a revealed node take the training
    plurality class.  The result is total.
    """
    full = np.asarray(partial, dtype=np.int64).copy()
    anchor = decomp.grafted
    grafted = np.flatnonzero(anchor >= 0)
    full[grafted] = full[anchor[grafted]]
    orphans = anchor == NO_ANCHOR
    if orphans.any():
        full[orphans] = labeling.plurality_class()
    assert (full >= 0).all(), "labeling must be total"
    return full


def predict(tree: SpanningTree, labeling: PartialLabeling) -> np.ndarray:
    """Run the four phases and return a total labeling of the tree.

    Revealed nodes keep their labels.  Raises NoRevealedNodesError when the
    whole forest has no training labels.
    """
    decomp = mark_black_lines(tree, labeling)
    fork_labels = label_forks(tree, labeling, decomp)
    interiors = cut_hinge_lines(tree, labeling, decomp, fork_labels)

    partial = labeling.labels.copy()
    for fork, cls in fork_labels.items():
        partial[fork] = cls
    filled = interiors >= 0
    partial[filled] = interiors[filled]
    return label_grafted(tree, labeling, decomp, partial)
