"""Batch experiment driver: splits, committees, error tables, timings.

A config names the predictors, training fractions, and runs-per-cell; the
driver samples a fresh training split and fresh random trees for every run,
deriving all randomness from the master seed so the whole result table is a
pure function of (config, graph, labels).  Wall-clock time covers the
predictor call only.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .baselines import label_propagation, wmv_predict
from .errors import EmptyTestSetError, NoLabelsError
from .game import GameInstance, gtg_ess_solve
from .graph import PartialLabeling, WeightedGraph
from .hinge import predict as mucca_predict
from .spanning import max_similarity_spanning_tree, wilson_random_spanning_tree

__all__ = [
    "AlgorithmSpec",
    "ExperimentConfig",
    "ResultTable",
    "sample_split",
    "committee_predict",
    "error_rate",
    "run_experiment",
]

ALGORITHMS = ("mucca", "gtg-ess", "labprop", "wmv")
TREE_MODES = ("mst", "rst", "none")
DEFAULT_FRACTIONS = (0.005, 0.01, 0.02, 0.05)


@dataclass(frozen=True)
class AlgorithmSpec:
    """One predictor column: algorithm id, tree mode, committee size."""

    name: str
    tree_mode: str = "none"
    committee: int = 1

    def __post_init__(self):
        if self.name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.name!r}")
        if self.tree_mode not in TREE_MODES:
            raise ValueError(f"unknown tree mode {self.tree_mode!r}")
        if self.name == "mucca" and self.tree_mode == "none":
            raise ValueError("mucca needs a tree mode (mst or rst)")
        if self.committee < 1 or self.committee % 2 == 0:
            raise ValueError("committee size must be odd and >= 1")
        if self.committee > 1 and self.name != "mucca":
            raise ValueError("committees are defined for mucca only")

    @classmethod
    def parse(cls, text: str) -> "AlgorithmSpec":
        """Parse ``name[:tree_mode[:committee]]``, e.g. ``mucca:rst:11``."""
        parts = text.strip().split(":")
        name = parts[0]
        tree_mode = parts[1] if len(parts) > 1 else \
            ("mst" if name == "mucca" else "none")
        committee = int(parts[2]) if len(parts) > 2 else 1
        return cls(name, tree_mode, committee)

    def label(self) -> str:
        out = self.name
        if self.tree_mode != "none":
            out += f"+{self.tree_mode}"
        if self.committee > 1:
            out = f"{self.committee}*{out}"
        return out


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid definition; every run's seed derives from ``seed``."""

    algorithms: tuple[AlgorithmSpec, ...]
    fractions: tuple[float, ...] = DEFAULT_FRACTIONS
    runs: int = 10
    seed: int = 0

    def __post_init__(self):
        if not self.algorithms:
            raise ValueError("at least one algorithm required")
        for f in self.fractions:
            if not 0.0 < f <= 1.0:
                raise ValueError(f"training fraction {f} outside (0, 1]")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")


@dataclass
class RunRecord:
    algorithm: str
    tree_mode: str
    committee: int
    fraction: float
    run: int
    seed: int
    error: float
    seconds: float


@dataclass
class CellSummary:
    mean_error: float
    std_error: float
    mean_seconds: float
    seeds: tuple[int, ...]


@dataclass
class ResultTable:
    """Raw per-run records plus per-(algorithm, fraction) aggregation."""

    rows: list[RunRecord] = field(default_factory=list)
    runs_per_cell: int = 0

    CSV_HEADER = "algorithm,tree_mode,committee,fraction,run,seed,error,seconds"

    def summarize(self) -> dict[tuple[str, float], CellSummary]:
        cells: dict[tuple[str, float], list[RunRecord]] = {}
        for row in self.rows:
            spec = AlgorithmSpec(row.algorithm, row.tree_mode, row.committee)
            cells.setdefault((spec.label(), row.fraction), []).append(row)
        out = {}
        for key, rows in cells.items():
            assert len(rows) == self.runs_per_cell, \
                f"cell {key} has {len(rows)} runs, expected {self.runs_per_cell}"
            errors = np.array([r.error for r in rows])
            out[key] = CellSummary(
                mean_error=float(errors.mean()),
                std_error=float(errors.std()),
                mean_seconds=float(np.mean([r.seconds for r in rows])),
                seeds=tuple(r.seed for r in rows),
            )
        return out

    def to_csv(self) -> str:
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(f"{r.algorithm},{r.tree_mode},{r.committee},"
                         f"{r.fraction},{r.run},{r.seed},"
                         f"{r.error:.6f},{r.seconds:.6f}")
        return "\n".join(lines) + "\n"

    def save_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_csv())


def sample_split(labels, fraction: float, seed: int,
                 num_classes: int | None = None) -> PartialLabeling:
    """Reveal a uniform random ceil(fraction * m) of the labeled nodes.

    ``labels`` is the ground truth with -1 on unlabeled nodes; only labeled
    nodes are eligible.  The same seed always produces the same split.
    """
    labels = np.asarray(labels, dtype=np.int64)
    eligible = np.flatnonzero(labels >= 0)
    if len(eligible) == 0:
        raise NoLabelsError("no ground-truth labels to sample from")
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction {fraction} outside (0, 1]")
    size = max(1, int(np.ceil(fraction * len(eligible))))
    size = min(size, len(eligible))
    rng = np.random.default_rng(seed)
    chosen = rng.choice(eligible, size=size, replace=False)
    out = np.full(len(labels), -1, dtype=np.int64)
    out[chosen] = labels[chosen]
    if num_classes is None:
        num_classes = int(labels.max()) + 1
    return PartialLabeling(out, num_classes=num_classes)


def committee_predict(g: WeightedGraph, y: PartialLabeling, size: int,
                      seeds, tree_mode: str = "rst") -> np.ndarray:
    """Majority vote over tree predictors, one independent tree per member.

    Vote ties go to the smallest class id.  With size 1 this is exactly the
    single tree predictor.
    """
    seeds = list(seeds)
    if len(seeds) != size:
        raise ValueError(f"need {size} seeds, got {len(seeds)}")
    votes = np.zeros((g.n, y.num_classes), dtype=np.int64)
    for seed in seeds:
        if tree_mode == "mst":
            tree = max_similarity_spanning_tree(g)
        else:
            tree = wilson_random_spanning_tree(g, int(seed))
        member = mucca_predict(tree, y)
        votes[np.arange(g.n), member] += 1
    return np.argmax(votes, axis=1)


def error_rate(pred, truth, test_set) -> float:
    """Fraction of test nodes whose prediction differs from the truth."""
    test_set = np.asarray(test_set, dtype=np.int64)
    if len(test_set) == 0:
        raise EmptyTestSetError("no test nodes to score")
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    return float((pred[test_set] != truth[test_set]).mean())


def _dispatch(spec: AlgorithmSpec, g: WeightedGraph, split: PartialLabeling,
              seed: int) -> np.ndarray:
    if spec.name == "mucca":
        member_seeds = np.random.SeedSequence(seed).generate_state(spec.committee)
        return committee_predict(g, split, spec.committee, member_seeds,
                                 tree_mode=spec.tree_mode)
    if spec.name == "wmv":
        return wmv_predict(g, split)
    if spec.name == "labprop":
        return label_propagation(g, split)[1]
    if spec.name == "gtg-ess":
        return gtg_ess_solve(GameInstance(g, split))[1]
    raise ValueError(f"unknown algorithm {spec.name!r}")


def run_experiment(cfg: ExperimentConfig, graph: WeightedGraph,
                   labels) -> ResultTable:
    """Execute the full (algorithm, fraction, run) grid.

    Every run resamples both the training split and the member trees; the
    run's split and predictor seeds derive from
    ``SeedSequence([master, algorithm_idx, fraction_idx, run])``, so results
    are reproducible cell by cell.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if graph.n != len(labels):
        raise ValueError("labels length must match node count")
    num_classes = int(labels.max()) + 1
    table = ResultTable(runs_per_cell=cfg.runs)
    for ai, spec in enumerate(cfg.algorithms):
        for fi, fraction in enumerate(cfg.fractions):
            for run in range(cfg.runs):
                root = np.random.SeedSequence(
                    [cfg.seed, ai, fi, run]).generate_state(2)
                split_seed, algo_seed = int(root[0]), int(root[1])
                split = sample_split(labels, fraction, split_seed,
                                     num_classes=num_classes)
                test = np.flatnonzero((labels >= 0) & ~split.revealed_mask)
                start = time.perf_counter()
                pred = _dispatch(spec, graph, split, algo_seed)
                seconds = time.perf_counter() - start
                table.rows.append(RunRecord(
                    algorithm=spec.name,
                    tree_mode=spec.tree_mode,
                    committee=spec.committee,
                    fraction=fraction,
                    run=run,
                    seed=algo_seed,
                    error=error_rate(pred, labels, test),
                    seconds=seconds,
                ))
    return table
