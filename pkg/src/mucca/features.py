"""Build k-NN similarity graphs from feature vectors.

Each row keeps its k nearest neighbors by Euclidean distance; the directed
lists are then symmetrized by union.  An edge's weight is
``exp(-d_ij / sigma_ij^2)`` with a local scale: ``sigma_ij`` is the mean
Euclidean distance over the k-NN edges incident to either endpoint.  All
weights land in (0, 1] and identical points get weight exactly 1.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateFeaturesError,
    EmptyInputError,
    MalformedRowError,
)
from .graph import WeightedGraph

__all__ = ["FeatureMatrix", "knn_graph", "load_features"]

_DISTANCE_BLOCK = 512


@dataclass
class FeatureMatrix:
    """Dense real features, one row per future graph node.

    ``labels`` is either None or an int array aligned with the rows, using
    -1 for rows without a label.
    """

    X: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        if self.X.ndim != 2:
            raise MalformedRowError("features must form a 2-d matrix")
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if len(self.labels) != len(self.X):
                raise MalformedRowError("one label per feature row required")

    @property
    def num_rows(self) -> int:
        return self.X.shape[0]


def knn_graph(feats: FeatureMatrix, k: int) -> WeightedGraph:
    """Union-symmetrized k-nearest-neighbor graph with local-scale weights.

    Neighbor lists are deterministic: distance ties break toward the smaller
    node id.  Requires finite features and at least two rows.
    """
    X = feats.X
    m = X.shape[0]
    if k < 1:
        raise ValueError("k must be at least 1")
    if m < 2:
        raise ValueError("need at least two rows to build a graph")
    if not np.isfinite(X).all():
        bad = int(np.flatnonzero(~np.isfinite(X).all(axis=1))[0])
        raise DegenerateFeaturesError(f"row {bad} has NaN or infinite features")

    k_eff = min(k, m - 1)
    sq_norms = (X * X).sum(axis=1)
    pair_d: dict[tuple[int, int], float] = {}
    for start in range(0, m, _DISTANCE_BLOCK):
        stop = min(start + _DISTANCE_BLOCK, m)
        block = X[start:stop]
        d2 = sq_norms[start:stop, None] - 2.0 * (block @ X.T) + sq_norms[None, :]
        np.maximum(d2, 0.0, out=d2)
        dist = np.sqrt(d2)
        rows = np.arange(start, stop)
        dist[np.arange(stop - start), rows] = np.inf  # exclude self
        # stable sort: equal distances keep ascending id order
        nearest = np.argsort(dist, axis=1, kind="stable")[:, :k_eff]
        for local, i in enumerate(rows):
            for j in nearest[local]:
                key = (int(i), int(j)) if i < j else (int(j), int(i))
                pair_d[key] = float(dist[local, j])

    pairs = sorted(pair_d)
    dists = np.array([pair_d[p] for p in pairs])
    us = np.array([p[0] for p in pairs], dtype=np.int64)
    vs = np.array([p[1] for p in pairs], dtype=np.int64)

    incident_sum = np.zeros(m)
    incident_cnt = np.zeros(m, dtype=np.int64)
    np.add.at(incident_sum, us, dists)
    np.add.at(incident_sum, vs, dists)
    np.add.at(incident_cnt, us, 1)
    np.add.at(incident_cnt, vs, 1)

    # union of the two incidence sets shares exactly the edge (u, v) itself
    sigma = (incident_sum[us] + incident_sum[vs] - dists) / \
        (incident_cnt[us] + incident_cnt[vs] - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        weights = np.exp(-dists / (sigma * sigma))
    weights[dists == 0.0] = 1.0
    return WeightedGraph(m, us, vs, weights)


def load_features(path) -> FeatureMatrix:
    """Read a feature CSV, with an optional header naming a ``label`` column.

    Rows must be numeric and rectangular; violations raise MalformedRowError
    with the line number.  Label values are mapped to dense class ids by
    sorted order of their distinct values; empty label cells mean unlabeled.
    """
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        rows = [(lineno, row) for lineno, row in enumerate(reader, start=1)
                if row and any(cell.strip() for cell in row)]
    if not rows:
        raise EmptyInputError(f"{path}: no data rows")

    label_col = None
    first = [cell.strip() for cell in rows[0][1]]
    has_header = not _all_numeric(first)
    if has_header:
        names = [cell.lower() for cell in first]
        if "label" in names:
            label_col = names.index("label")
        rows = rows[1:]
        if not rows:
            raise EmptyInputError(f"{path}: header but no data rows")

    width = len(rows[0][1])
    feats, raw_labels = [], []
    for lineno, row in rows:
        if len(row) != width:
            raise MalformedRowError(
                f"line {lineno}: {len(row)} cells, expected {width}")
        values = []
        for col, cell in enumerate(row):
            cell = cell.strip()
            if col == label_col:
                raw_labels.append(cell)
                continue
            try:
                values.append(float(cell))
            except ValueError:
                raise MalformedRowError(
                    f"line {lineno}: non-numeric cell {cell!r}") from None
        feats.append(values)

    labels = None
    if label_col is not None:
        present = sorted({v for v in raw_labels if v})
        to_id = {v: i for i, v in enumerate(present)}
        labels = np.array([to_id[v] if v else -1 for v in raw_labels],
                          dtype=np.int64)
    return FeatureMatrix(np.array(feats, dtype=np.float64), labels)


def _all_numeric(cells) -> bool:
    for cell in cells:
        try:
            float(cell)
        except ValueError:
            return False
    return True
