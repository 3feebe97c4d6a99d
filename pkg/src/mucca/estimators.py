"""Estimator wrappers with a scikit-learn flavored API.

The task is transductive: an estimator is fit on a graph together with the
training labels (``-1`` marks the nodes to predict) and exposes the completed
labeling as ``transduction_``, the same convention scikit-learn's
semi-supervised estimators use.  ``predict`` takes no features because there
is no out-of-sample data; it simply returns the transduction.

Example
-------
>>> from mucca import MuccaClassifier, from_edge_list
>>> g = from_edge_list([(0, 1, 1.0), (1, 2, 1.0)])
>>> model = MuccaClassifier(tree_mode="mst")
>>> model.fit_predict(g, [0, -1, 1])
array([0, 0, 1])
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin

from .baselines import label_propagation, wmv_predict
from .game import GameInstance, gtg_ess_solve
from .harness import committee_predict
from .spanning import max_similarity_spanning_tree, wilson_random_spanning_tree
from .validation import check_graph, check_training_labels

__all__ = [
    "MuccaClassifier",
    "GtgEssClassifier",
    "HarmonicPropagationClassifier",
    "MajorityVoteClassifier",
]


class GraphTransducer(ClassifierMixin, BaseEstimator):
    """Shared fit/predict plumbing for the transductive estimators."""

    def __init__(self, n_classes=None):
        self.n_classes = n_classes

    def fit(self, g, y):
        g = check_graph(g)
        labeling = check_training_labels(y, g.n, num_classes=self.n_classes)
        self.n_classes_ = labeling.num_classes
        self.classes_ = np.arange(labeling.num_classes)
        self.transduction_ = self._transduce(g, labeling)
        return self

    def predict(self, g=None):
        """Completed labeling of the fitted graph; ``g`` is ignored."""
        if not hasattr(self, "transduction_"):
            raise RuntimeError("call fit first")
        return self.transduction_.copy()

    def fit_predict(self, g, y):
        return self.fit(g, y).predict()

    def _transduce(self, g, labeling):
        raise NotImplementedError


class MuccaClassifier(GraphTransducer):
    """Tree-equilibrium labeling, optionally as a committee of random trees.

    Parameters
    ----------
    tree_mode : "mst" or "rst"
        Predict on the maximum-similarity spanning tree, or on random
        spanning trees sampled by loop-erased walks.
    committee_size : int
        Odd number of tree predictors aggregated by per-node majority vote.
        Meaningful with "rst"; with "mst" all members coincide.
    random_state : int
        Seed for the tree sampler; member seeds derive from it.
    """

    def __init__(self, tree_mode="mst", committee_size=1, random_state=0,
                 n_classes=None):
        super().__init__(n_classes=n_classes)
        self.tree_mode = tree_mode
        self.committee_size = committee_size
        self.random_state = random_state

    def _transduce(self, g, labeling):
        if self.tree_mode not in ("mst", "rst"):
            raise ValueError(f"unknown tree_mode {self.tree_mode!r}")
        if self.committee_size < 1 or self.committee_size % 2 == 0:
            raise ValueError("committee_size must be odd and >= 1")
        seeds = np.random.SeedSequence(
            self.random_state).generate_state(self.committee_size)
        return committee_predict(g, labeling, self.committee_size, seeds,
                                 tree_mode=self.tree_mode)


class GtgEssClassifier(GraphTransducer):
    """Replicator-dynamics equilibrium search on the full graph.

    After fitting, ``label_distributions_`` holds the final mixed strategies
    and ``n_iter_`` the iteration count.
    """

    def __init__(self, tol=1e-6, max_iter=None, n_classes=None):
        super().__init__(n_classes=n_classes)
        self.tol = tol
        self.max_iter = max_iter

    def _transduce(self, g, labeling):
        profile, labels, iters = gtg_ess_solve(
            GameInstance(g, labeling), tol=self.tol, max_iters=self.max_iter)
        self.label_distributions_ = profile
        self.n_iter_ = iters
        return labels


class HarmonicPropagationClassifier(GraphTransducer):
    """Per-class clamped harmonic scores decoded by argmax.

    ``score_table_`` holds the converged (n, classes) score matrix and
    ``n_iter_`` the number of sweeps.
    """

    def __init__(self, tol=1e-6, max_iter=10000, n_classes=None):
        super().__init__(n_classes=n_classes)
        self.tol = tol
        self.max_iter = max_iter

    def _transduce(self, g, labeling):
        sweeps = [0]

        def count(_):
            sweeps[0] += 1

        scores, labels = label_propagation(
            g, labeling, tol=self.tol, max_iters=self.max_iter,
            on_sweep=count)
        self.score_table_ = scores
        self.n_iter_ = sweeps[0]
        return labels


class MajorityVoteClassifier(GraphTransducer):
    """Weighted majority vote over revealed neighbors."""

    def _transduce(self, g, labeling):
        return wmv_predict(g, labeling)
