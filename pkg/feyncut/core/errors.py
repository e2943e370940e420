"""Exception hierarchy for feyncut."""


class FeyncutError(Exception):
    """Base class for every error raised by feyncut."""


class GraphError(FeyncutError, ValueError):
    """A graph, cut structure or forest failed validation."""


class NonPartitionError(GraphError):
    """A half-edge is missing from, or duplicated in, a partition."""


class SmallCorollaError(GraphError):
    """A vertex part has fewer than three half-edges."""


class BadEdgePartError(GraphError):
    """An edge part has more than two half-edges."""


class NoSuchEdgeError(GraphError):
    """The named internal edge does not exist."""


class NotFullAtVerticesError(GraphError):
    """A subgraph touches a corolla without containing all of it."""


class BridgedSubgraphError(GraphError):
    """A subgraph to be contracted has a bridge."""


class DisconnectedError(GraphError):
    """The operation needs a connected graph."""


class EdgeInTreeError(GraphError):
    """A fundamental cycle was requested for a tree edge."""


class NoCompatibleForestError(GraphError):
    """No spanning forest is compatible with the cut structure."""


class ContextMismatchError(GraphError):
    """Two incidence monomials live over different contexts."""


class ForestNotInTreeError(GraphError):
    """A forest is not contained in the given spanning tree."""


class StructureMismatchError(GraphError):
    """An insertion argument does not fit any insertion place."""


class NotBridgelessError(GraphError):
    """A coproduct generator is not bridgeless."""


class NotProperlyCutError(GraphError):
    """A cut graph has no cut that breaks a loop."""
