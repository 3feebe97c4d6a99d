"""Game-theoretic multiclass node classification on weighted graphs.

The package predicts the unknown labels of a partially labeled graph by
finding a pure Nash equilibrium of the graph transduction game on a spanning
tree (the MUCCA four-phase labeler), and ships the reference competitors:
GTG-ESS replicator dynamics on the full graph, harmonic label propagation,
and weighted majority vote.  An experiment harness reproduces committee and
training-fraction sweeps, and sklearn-style estimator wrappers expose every
predictor through ``fit`` / ``predict``.
"""

from .errors import MuccaError
from .graph import (
    PartialLabeling,
    WeightedGraph,
    connected_components,
    from_edge_list,
    load_edge_list,
    load_labels,
    save_edge_list,
    save_labels,
    weighted_cut_fraction,
)
from .spanning import (
    SpanningTree,
    max_similarity_spanning_tree,
    wilson_random_spanning_tree,
)
from .hinge import (
    HingeDecomposition,
    cut_hinge_lines,
    label_forks,
    label_grafted,
    mark_black_lines,
    predict,
)
from .game import (
    GameInstance,
    enumerate_pure_nash,
    gtg_ess_solve,
    is_pure_nash,
    payoff_pure,
    replicator_step,
    uniform_profile,
    utility_mixed,
)
from .baselines import label_propagation, wmv_predict
from .features import FeatureMatrix, knn_graph, load_features
from .harness import (
    ExperimentConfig,
    ResultTable,
    committee_predict,
    error_rate,
    run_experiment,
    sample_split,
)
from .estimators import (
    GtgEssClassifier,
    HarmonicPropagationClassifier,
    MajorityVoteClassifier,
    MuccaClassifier,
)

__version__ = "0.1.0"

__all__ = [
    "MuccaError",
    "WeightedGraph",
    "PartialLabeling",
    "from_edge_list",
    "weighted_cut_fraction",
    "connected_components",
    "load_edge_list",
    "save_edge_list",
    "load_labels",
    "save_labels",
    "SpanningTree",
    "max_similarity_spanning_tree",
    "wilson_random_spanning_tree",
    "HingeDecomposition",
    "mark_black_lines",
    "label_forks",
    "cut_hinge_lines",
    "label_grafted",
    "predict",
    "GameInstance",
    "payoff_pure",
    "utility_mixed",
    "is_pure_nash",
    "enumerate_pure_nash",
    "uniform_profile",
    "replicator_step",
    "gtg_ess_solve",
    "wmv_predict",
    "label_propagation",
    "FeatureMatrix",
    "knn_graph",
    "load_features",
    "ExperimentConfig",
    "ResultTable",
    "sample_split",
    "committee_predict",
    "error_rate",
    "run_experiment",
    "MuccaClassifier",
    "GtgEssClassifier",
    "HarmonicPropagationClassifier",
    "MajorityVoteClassifier",
    "__version__",
]
