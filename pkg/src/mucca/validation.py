"""Input validation shared by the estimators and the CLI."""

from __future__ import annotations

import numpy as np

from .errors import NoRevealedNodesError
from .graph import PartialLabeling, WeightedGraph

__all__ = ["check_graph", "check_training_labels"]


def check_graph(g) -> WeightedGraph:
    if not isinstance(g, WeightedGraph):
        raise TypeError(
            f"expected a WeightedGraph, got {type(g).__name__}; build one "
            "with from_edge_list, load_edge_list, or knn_graph")
    return g


def check_training_labels(y, n: int,
                          num_classes: int | None = None) -> PartialLabeling:
    """Coerce ``y`` (-1 or None marking unlabeled nodes) to a PartialLabeling.

    The class count defaults to ``1 + max`` over the labels present.
    """
    if isinstance(y, PartialLabeling):
        labeling = y if num_classes is None else \
            PartialLabeling(y.labels, num_classes=num_classes)
    else:
        arr = np.asarray(
            [(-1 if v is None else int(v)) for v in y], dtype=np.int64)
        labeling = PartialLabeling(arr, num_classes=num_classes)
    if len(labeling) != n:
        raise ValueError(f"labels length {len(labeling)} != node count {n}")
    if labeling.num_revealed == 0:
        raise NoRevealedNodesError("at least one training label is required")
    return labeling
