"""Exception types raised across the package.

Every data or contract violation gets its own class so callers can catch
precisely.  Messages name the offending input (line number, node id, edge)
whenever one exists.
"""


class MuccaError(Exception):
    """Base class for all package errors."""


# -- graph construction ------------------------------------------------------

class MalformedLineError(MuccaError):
    """An input line could not be parsed."""


class NonPositiveWeightError(MuccaError):
    """An edge weight was zero, negative, or not finite."""


class SelfLoopError(MuccaError):
    """An edge connected a node to itself."""


class DuplicateEdgeError(MuccaError):
    """The same unordered node pair appeared twice in the edge list."""


class EmptyGraphError(MuccaError):
    """The operation needs at least one edge."""


# -- labelings ---------------------------------------------------------------

class NoRevealedNodesError(MuccaError):
    """Prediction was invoked with no training labels at all."""


class NoLabelsError(MuccaError):
    """A split was requested from a labeling with no ground-truth labels."""


# -- tree labeling internals -------------------------------------------------

class UnlabeledHingeNodeError(MuccaError):
    """A hinge-line endpoint had no label when the line was cut.

    Internal consistency failure: phases must label every hinge node before
    hinge lines are processed.
    """


# -- game --------------------------------------------------------------------

class InconsistentWithTrainingError(MuccaError):
    """A full labeling flips the label of a determined (training) player."""


class TooLargeError(MuccaError):
    """Exhaustive enumeration would exceed the configured budget."""


class ZeroUtilityError(MuccaError):
    """A replicator update would divide by a zero utility."""


# -- iterative solvers -------------------------------------------------------

class NotConvergedError(MuccaError):
    """An iterative solver hit its iteration cap above tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


# -- ingestion ---------------------------------------------------------------

class MalformedRowError(MuccaError):
    """A feature CSV row was ragged or not numeric."""


class EmptyInputError(MuccaError):
    """A feature file contained no data rows."""


class DegenerateFeaturesError(MuccaError):
    """Feature values were NaN or infinite."""


# -- experiment harness ------------------------------------------------------

class EmptyTestSetError(MuccaError):
    """Error rate was requested over an empty test set."""
