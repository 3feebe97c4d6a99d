"""Comparison predictors: weighted majority vote and label propagation.

Weighted majority vote looks only at revealed neighbors and costs one pass
over the edges.  Label propagation relaxes, per class, the harmonic function
that minimizes the quadratic cut energy ``1/2 sum_ij w_ij (f_i - f_j)^2``
with revealed nodes clamped to 0/1 indicators; prediction is the per-node
argmax across classes.  The relaxation is a Gauss-Seidel sweep in fixed
ascending node order, realized as one sparse triangular solve per sweep so
all classes advance together.
"""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix, diags, tril, triu
from scipy.sparse.linalg import spsolve_triangular

from .errors import NoRevealedNodesError, NotConvergedError
from .graph import PartialLabeling, WeightedGraph

__all__ = ["wmv_predict", "label_propagation", "energy"]


def wmv_predict(g: WeightedGraph, y: PartialLabeling) -> np.ndarray:
    """Label each node by the heaviest class among its revealed neighbors.

    Nodes without a revealed neighbor fall back to the training plurality
    class; score ties go to the smallest class id.  Revealed nodes keep
    their labels.
    """
    if y.num_revealed == 0:
        raise NoRevealedNodesError("majority vote needs training labels")
    n, c = g.n, y.num_classes
    labels = y.labels
    scores = np.zeros((n, c))
    rev_u = y.revealed_mask[g.edge_u]
    rev_v = y.revealed_mask[g.edge_v]
    np.add.at(scores, (g.edge_u[rev_v], labels[g.edge_v[rev_v]]), g.edge_w[rev_v])
    np.add.at(scores, (g.edge_v[rev_u], labels[g.edge_u[rev_u]]), g.edge_w[rev_u])

    out = labels.copy()
    undet = np.flatnonzero(~y.revealed_mask)
    out[undet] = np.argmax(scores[undet], axis=1)
    no_vote = undet[scores[undet].sum(axis=1) == 0]
    out[no_vote] = y.plurality_class()
    return out


def energy(g: WeightedGraph, scores: np.ndarray) -> float:
    """Total quadratic cut energy of a score table across all classes."""
    diff = scores[g.edge_u] - scores[g.edge_v]
    return float(0.5 * (g.edge_w[:, None] * diff * diff).sum())


def label_propagation(g: WeightedGraph, y: PartialLabeling,
                      tol: float = 1e-6, max_iters: int = 10000,
                      on_sweep=None):
    """Clamped harmonic scores per class and the argmax labeling.

    Sweeps ``f_i <- sum_j w_ij f_j / sum_j w_ij`` over unrevealed nodes in
    ascending order until the largest score change drops below ``tol``,
    raising NotConvergedError (carrying the residual) at ``max_iters``.
    Unrevealed nodes in components with no revealed node keep score 0 in
    every class and are decoded to the training plurality class.
    ``on_sweep(scores)`` is called after each sweep when given.

    Returns ``(scores, labels)`` with ``scores`` of shape (n, classes).
    """
    if y.num_revealed == 0:
        raise NoRevealedNodesError("label propagation needs training labels")
    if max_iters < 1:
        raise ValueError("max_iters must be at least 1")
    n, c = g.n, y.num_classes
    scores = np.zeros((n, c))
    rev = y.revealed_nodes
    scores[rev, y.labels[rev]] = 1.0
    undet = np.flatnonzero(~y.revealed_mask)

    if len(undet) and g.num_edges:
        W = g.weight_matrix()
        deg = np.asarray(W.sum(axis=1)).ravel()
        active = undet[deg[undet] > 0]
        if len(active):
            Wuu = W[active][:, active]
            # boundary inflow from revealed neighbors, fixed across sweeps
            inflow = W[active][:, rev] @ scores[rev]
            lower = csr_matrix(diags(deg[active]) - tril(Wuu, k=-1))
            upper = triu(Wuu, k=1, format="csr")
            f = scores[active]
            for sweep in range(1, max_iters + 1):
                f_new = spsolve_triangular(lower, upper @ f + inflow,
                                           lower=True)
                delta = float(np.abs(f_new - f).max(initial=0.0))
                f = f_new
                scores[active] = f
                if on_sweep is not None:
                    on_sweep(scores)
                if delta < tol:
                    break
            else:
                raise NotConvergedError(
                    f"residual {delta:.3e} above {tol} after {max_iters} "
                    "sweeps", residual=delta)

    labels = y.labels.copy()
    labels[undet] = np.argmax(scores[undet], axis=1)
    no_signal = undet[scores[undet].sum(axis=1) == 0]
    labels[no_signal] = y.plurality_class()
    return scores, labels
