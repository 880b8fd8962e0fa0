"""Exception and warning types raised across the package."""


class ReconstructionError(Exception):
    """Base class for all package errors."""


class DegenerateInput(ReconstructionError):
    """Input has no four affinely independent points."""


class EmptyDiagram(ReconstructionError):
    """No finite 2-dimensional pair with positive persistence."""


class InternalInconsistency(ReconstructionError):
    """A persistent volume could not be found for a pair (pairing bug)."""


class EmptiedVolume(ReconstructionError):
    """Manifold cleanup deleted every tetrahedron of a volume."""


class NotManifold(ReconstructionError):
    """Mesh operation requires a closed 2-manifold triangle mesh."""


class EmptySubset(ReconstructionError):
    """No cloud point lies within the neighbourhood threshold of a cycle."""


class ParseError(ReconstructionError):
    """Malformed point-cloud file; the message names the offending location."""


class EmptyFile(ParseError):
    """Point-cloud file contains no points."""


class ReconstructionWarning(UserWarning):
    """Base class for recoverable conditions reported during a run."""


class AmbiguousSignificance(ReconstructionWarning):
    """Persistence values are too close to separate components reliably."""


class SimplificationBlocked(ReconstructionWarning):
    """Edge collapses stopped before reaching the requested face budget."""


class ZeroWeight(ReconstructionWarning):
    """A control vertex received no target support in an LSPIA step."""
