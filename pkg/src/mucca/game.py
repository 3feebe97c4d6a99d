"""The graph transduction game and its equilibrium machinery.

Nodes are players, classes are pure strategies, and a player's payoff is the
total weight of edges to neighbors playing the same strategy.  Training nodes
are determined players with a frozen pure strategy; test nodes are
undetermined and free to move.  The module provides exact pure-equilibrium
checking and desk-scale exhaustive enumeration (the test oracle), plus the
GTG-ESS solver: synchronous discrete replicator dynamics

    x[i,h] <- x[i,h] * u_i(e_h) / u_i(x)

whose updates never decrease the total weighted agreement
``sum_(i,j) w_ij <x_i, x_j>`` and whose one-hot fixed points are pure Nash
equilibria.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import (
    InconsistentWithTrainingError,
    TooLargeError,
    ZeroUtilityError,
)
from .graph import PartialLabeling, WeightedGraph

__all__ = [
    "GameInstance",
    "payoff_pure",
    "utility_mixed",
    "is_pure_nash",
    "enumerate_pure_nash",
    "uniform_profile",
    "replicator_step",
    "potential",
    "gtg_ess_solve",
]

ENUMERATION_BUDGET = 10 ** 6


class GameInstance:
    """A transduction game: a weighted graph plus the train/test split."""

    def __init__(self, graph: WeightedGraph, labeling: PartialLabeling):
        if labeling.num_classes < 2:
            raise ValueError("a game needs at least 2 classes")
        if len(labeling) != graph.n:
            raise ValueError("labeling length must match node count")
        self.graph = graph
        self.labeling = labeling
        self.num_classes = labeling.num_classes
        self._W = None

    @property
    def determined(self) -> np.ndarray:
        return self.labeling.revealed_nodes

    @property
    def undetermined(self) -> np.ndarray:
        return np.flatnonzero(~self.labeling.revealed_mask)

    def weight_matrix(self):
        if self._W is None:
            self._W = self.graph.weight_matrix()
        return self._W


def payoff_pure(game: GameInstance, s, i: int) -> float:
    """Weight of edges from ``i`` to neighbors sharing its label under ``s``."""
    s = np.asarray(s)
    nbr, w, _ = game.graph.neighbors(i)
    return float(w[s[nbr] == s[i]].sum())


def utility_mixed(game: GameInstance, x, i: int) -> float:
    """Expected agreement of player ``i`` under mixed profile ``x``."""
    x = np.asarray(x, dtype=np.float64)
    nbr, w, _ = game.graph.neighbors(i)
    if len(nbr) == 0:
        return 0.0
    return float(x[i] @ (w[:, None] * x[nbr]).sum(axis=0))


def _agreement_scores(game: GameInstance, s: np.ndarray) -> np.ndarray:
    """(n, c) matrix: weight of neighbors of i labeled k under ``s``."""
    onehot = np.zeros((game.graph.n, game.num_classes))
    onehot[np.arange(game.graph.n), s] = 1.0
    return game.weight_matrix() @ onehot


def is_pure_nash(game: GameInstance, s):
    """Check whether full labeling ``s`` is a pure Nash equilibrium.

    Returns ``(True, None)`` when no undetermined player can strictly improve
    its agreement by relabeling itself, else ``(False, (node, better_class))``
    for one deviating player.  Comparisons are exact.
    """
    s = np.asarray(s, dtype=np.int64)
    det = game.determined
    if not np.array_equal(s[det], game.labeling.labels[det]):
        bad = det[s[det] != game.labeling.labels[det]][0]
        raise InconsistentWithTrainingError(
            f"node {int(bad)} flips its training label")
    scores = _agreement_scores(game, s)
    undet = game.undetermined
    current = scores[undet, s[undet]]
    best = scores[undet].max(axis=1) if len(undet) else np.zeros(0)
    losers = np.flatnonzero(current < best)
    if len(losers) == 0:
        return True, None
    i = int(undet[losers[0]])
    return False, (i, int(np.argmax(scores[i])))


def enumerate_pure_nash(game: GameInstance) -> list[np.ndarray]:
    """All pure Nash equilibria by exhaustive search, lexicographic order.

    Only feasible at desk scale; raises TooLargeError when the profile count
    ``c ** |undetermined|`` exceeds ``ENUMERATION_BUDGET``.
    """
    undet = game.undetermined
    c = game.num_classes
    if c ** len(undet) > ENUMERATION_BUDGET:
        raise TooLargeError(
            f"{c}^{len(undet)} profiles exceed budget {ENUMERATION_BUDGET}")
    base = game.labeling.labels.copy()
    found = []
    for combo in itertools.product(range(c), repeat=len(undet)):
        s = base.copy()
        s[undet] = combo
        ok, _ = is_pure_nash(game, s)
        if ok:
            found.append(s)
    return found


def uniform_profile(game: GameInstance) -> np.ndarray:
    """Default start: one-hot rows for training nodes, uniform rows elsewhere."""
    n, c = game.graph.n, game.num_classes
    x = np.full((n, c), 1.0 / c)
    det = game.determined
    x[det] = 0.0
    x[det, game.labeling.labels[det]] = 1.0
    return x


def check_profile(game: GameInstance, x, atol: float = 1e-9) -> None:
    """Validate shape, nonnegativity, row sums, and frozen training rows."""
    x = np.asarray(x)
    if x.shape != (game.graph.n, game.num_classes):
        raise ValueError(f"profile shape {x.shape} != "
                         f"({game.graph.n}, {game.num_classes})")
    if (x < 0).any():
        raise ValueError("profile has negative entries")
    if np.abs(x.sum(axis=1) - 1.0).max(initial=0.0) > atol:
        raise ValueError("profile rows must sum to 1")
    det = game.determined
    if len(det) and not (x[det, game.labeling.labels[det]] == 1.0).all():
        raise ValueError("training rows must be one-hot at the revealed class")


def replicator_step(game: GameInstance, x) -> np.ndarray:
    """One synchronous step of the discrete replicator dynamics.

    Undetermined rows are reweighted by the per-class utilities and divided
    by the row utility, which is exactly the normalizing constant; training
    rows pass through unchanged.  Raises ZeroUtilityError when an
    undetermined player has zero utility (an isolated node, or all neighbor
    mass vanished), since the update would divide by zero.
    """
    x = np.asarray(x, dtype=np.float64)
    undet = game.undetermined
    class_util = game.weight_matrix() @ x
    row_util = (x * class_util).sum(axis=1)
    if len(undet) and (row_util[undet] == 0.0).any():
        dead = int(undet[row_util[undet] == 0.0][0])
        raise ZeroUtilityError(f"player {dead} has zero utility")
    out = x.copy()
    out[undet] = x[undet] * class_util[undet] / row_util[undet, None]
    return out


def potential(game: GameInstance, x) -> float:
    """Total weighted agreement ``sum_(i,j) in E w_ij <x_i, x_j>``."""
    x = np.asarray(x, dtype=np.float64)
    return float(0.5 * (x * (game.weight_matrix() @ x)).sum())


def gtg_ess_solve(game: GameInstance, init=None, tol: float = 1e-6,
                  max_iters: int | None = None, callback=None):
    """Run replicator dynamics to (approximate) convergence and decode.

    Iterates :func:`replicator_step` until the largest entry change drops
    below ``tol`` or ``max_iters`` (default ``10 * n``) is hit, then decodes
    every undetermined row by argmax with ties to the smallest class id.
    Isolated undetermined players have zero utility forever, so they are
    left out of the dynamics and decoded to the training plurality class
    instead.  ``callback(iteration, potential, max_change)`` is invoked after
    each step when given.

    Returns ``(profile, labels, iterations)``.
    """
    n = game.graph.n
    if max_iters is None:
        max_iters = 10 * n
    x = uniform_profile(game) if init is None else \
        np.asarray(init, dtype=np.float64).copy()
    check_profile(game, x)

    undet = game.undetermined
    degrees = np.diff(game.graph.adjacency[0])
    isolated = undet[degrees[undet] == 0]
    active = undet[degrees[undet] > 0]
    W = game.weight_matrix()

    iterations = 0
    for iterations in range(1, max_iters + 1):
        class_util = W @ x
        row_util = (x * class_util).sum(axis=1)
        if len(active) and (row_util[active] == 0.0).any():
            dead = int(active[row_util[active] == 0.0][0])
            raise ZeroUtilityError(f"player {dead} has zero utility")
        new_x = x.copy()
        if len(active):
            new_x[active] = x[active] * class_util[active] / \
                row_util[active, None]
        delta = float(np.abs(new_x - x).max(initial=0.0))
        x = new_x
        if callback is not None:
            callback(iterations, potential(game, x), delta)
        if delta < tol:
            break

    labels = game.labeling.labels.copy()
    labels[undet] = np.argmax(x[undet], axis=1)
    if len(isolated):
        labels[isolated] = game.labeling.plurality_class()
    return x, labels, iterations
