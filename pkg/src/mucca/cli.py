"""Command-line interface.

Subcommands mirror the library surface:

  build-graph   features CSV -> edge-list graph and labels file
  spanning      extract a maximum-similarity or random spanning tree
  predict       tree-equilibrium labeling of a partially labeled graph
  solve-ess     replicator-dynamics labeling with a convergence log
  baseline      weighted majority vote or label propagation
  experiment    run a config-driven benchmark grid to CSV

Graphs travel as `u v w` edge-list text, labelings as `node class` lines;
`#` starts a comment in both.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .baselines import label_propagation, wmv_predict
from .errors import MuccaError
from .features import knn_graph, load_features
from .game import GameInstance, gtg_ess_solve
from .graph import (
    dump_labels,
    load_edge_list,
    load_labels,
    save_edge_list,
    save_labels,
)
from .harness import AlgorithmSpec, ExperimentConfig, run_experiment
from .hinge import predict as mucca_predict
from .spanning import max_similarity_spanning_tree, wilson_random_spanning_tree

__all__ = ["main"]


def _write_labels(labels, path) -> None:
    if path == "-":
        sys.stdout.write(dump_labels(np.asarray(labels)))
    else:
        save_labels(np.asarray(labels), path)


def _make_tree(graph, mode: str, seed: int):
    if mode == "mst":
        return max_similarity_spanning_tree(graph)
    return wilson_random_spanning_tree(graph, seed)


def cmd_build_graph(args) -> int:
    feats = load_features(args.features)
    graph = knn_graph(feats, args.k)
    save_edge_list(graph, args.out_graph)
    if args.out_labels:
        if feats.labels is None:
            raise MuccaError("features file has no label column")
        save_labels(feats.labels, args.out_labels)
    print(f"built k={args.k} graph: {graph.n} nodes, "
          f"{graph.num_edges} edges -> {args.out_graph}")
    return 0


def cmd_spanning(args) -> int:
    graph = load_edge_list(args.graph)
    tree = _make_tree(graph, args.mode, args.seed)
    save_edge_list(tree.to_graph(), args.out)
    print(f"{args.mode} tree: {tree.num_edges} edges, "
          f"total similarity {tree.total_similarity():.6g} -> {args.out}")
    return 0


def cmd_predict(args) -> int:
    graph = load_edge_list(args.graph)
    labeling = load_labels(args.labels, graph.n)
    if args.committee == 1:
        tree = _make_tree(graph, args.tree, args.seed)
        labels = mucca_predict(tree, labeling)
    else:
        from .harness import committee_predict

        seeds = np.random.SeedSequence(args.seed).generate_state(args.committee)
        labels = committee_predict(graph, labeling, args.committee, seeds,
                                   tree_mode=args.tree)
    _write_labels(labels, args.out)
    return 0


def cmd_solve_ess(args) -> int:
    graph = load_edge_list(args.graph)
    labeling = load_labels(args.labels, graph.n)
    log_rows = []

    def log(iteration, pot, delta):
        log_rows.append(f"{iteration},{pot!r},{delta!r}")

    _, labels, iters = gtg_ess_solve(
        GameInstance(graph, labeling), tol=args.tol,
        max_iters=args.max_iters, callback=log)
    _write_labels(labels, args.out)
    if args.log:
        with open(args.log, "w", encoding="utf-8") as fh:
            fh.write("iteration,potential,max_row_delta\n")
            fh.write("\n".join(log_rows) + "\n")
    print(f"converged after {iters} iterations")
    return 0


def cmd_baseline(args) -> int:
    graph = load_edge_list(args.graph)
    labeling = load_labels(args.labels, graph.n)
    if args.algo == "wmv":
        labels = wmv_predict(graph, labeling)
    else:
        _, labels = label_propagation(graph, labeling, tol=args.tol,
                                      max_iters=args.max_iters)
    _write_labels(labels, args.out)
    return 0


def _parse_config(path) -> ExperimentConfig:
    """key=value lines; comma-separated values; `#` comments."""
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise MuccaError(f"{path}:{lineno}: expected key = value")
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    if "algorithms" not in values:
        raise MuccaError(f"{path}: missing 'algorithms'")
    algorithms = tuple(AlgorithmSpec.parse(tok)
                       for tok in values["algorithms"].split(","))
    kwargs = {}
    if "fractions" in values:
        kwargs["fractions"] = tuple(float(tok) for tok in
                                    values["fractions"].split(","))
    if "runs" in values:
        kwargs["runs"] = int(values["runs"])
    if "seed" in values:
        kwargs["seed"] = int(values["seed"])
    return ExperimentConfig(algorithms=algorithms, **kwargs)


def cmd_experiment(args) -> int:
    cfg = _parse_config(args.config)
    graph = load_edge_list(args.graph)
    labeling = load_labels(args.labels, graph.n)
    table = run_experiment(cfg, graph, labeling.labels)
    table.save_csv(args.out)
    print(f"wrote {len(table.rows)} runs -> {args.out}")
    for (label, fraction), cell in sorted(table.summarize().items()):
        print(f"  {label:28s} fraction={fraction:<7g} "
              f"error={cell.mean_error:.4f} +/- {cell.std_error:.4f} "
              f"time={cell.mean_seconds:.3f}s")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mucca",
        description="Game-theoretic node classification on weighted graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-graph", help="k-NN graph from feature CSV")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--features", required=True)
    p.add_argument("--out-graph", required=True)
    p.add_argument("--out-labels", default=None)
    p.set_defaults(func=cmd_build_graph)

    p = sub.add_parser("spanning", help="extract a spanning tree")
    p.add_argument("--mode", choices=("mst", "rst"), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spanning)

    p = sub.add_parser("predict", help="tree-equilibrium labeling")
    p.add_argument("--tree", choices=("mst", "rst"), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--committee", type=int, default=1)
    p.add_argument("--graph", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("solve-ess", help="replicator-dynamics labeling")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--log", default=None,
                   help="write per-iteration convergence CSV here")
    p.add_argument("--graph", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_solve_ess)

    p = sub.add_parser("baseline", help="wmv or label propagation")
    p.add_argument("--algo", choices=("wmv", "labprop"), required=True)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=10000)
    p.add_argument("--graph", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("experiment", help="benchmark grid from a config file")
    p.add_argument("--config", required=True,
                   help="key=value lines: algorithms, fractions, runs, seed")
    p.add_argument("--graph", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MuccaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
