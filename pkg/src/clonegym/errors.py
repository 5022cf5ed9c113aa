"""Exception types shared across the toolkit.

Everything raised on purpose derives from SimulationError so callers (the
environments, the CLI) can distinguish domain failures from genuine bugs.
"""
from __future__ import annotations

__all__ = [
    "SimulationError",
    "AlphabetError",
    "TopologyError",
    "ParseError",
    "EmptyPoolError",
    "NameCollisionError",
    "UnknownEnzymeError",
    "EmptyPrimerError",
    "TmUnreachableError",
    "ArgumentConflictError",
    "PrimerNotFoundError",
    "AmbiguousPrimingError",
    "OrientationError",
    "OverlapNotFoundError",
    "AmbiguousAssemblyError",
    "NoAssemblyError",
    "NotTypeIISError",
    "PrematureStopError",
    "QueryParseError",
    "BackendUnavailableError",
    "VendorLimitError",
    "ExpressionError",
    "EpisodeOverError",
    "GraphError",
    "PolicyUnavailableError",
    "EmptyBufferError",
]


class SimulationError(Exception):
    """Base class for all deliberate toolkit errors."""


class AlphabetError(SimulationError):
    """Text contains characters outside the accepted alphabet."""


class TopologyError(SimulationError):
    """Operation is incompatible with the sequence topology."""


class ParseError(SimulationError):
    """A structured text input could not be parsed.

    Carries the 1-based line number when one is known.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyPoolError(SimulationError):
    """A sequence collection that must be non-empty was empty."""


class NameCollisionError(SimulationError):
    """Two sequences in one pool share a name."""


class UnknownEnzymeError(SimulationError):
    """Enzyme name not present in the catalogue."""


class EmptyPrimerError(SimulationError):
    """A primer or primer core was empty where bases are required."""


class TmUnreachableError(SimulationError):
    """No primer core within the allowed length window reaches the target Tm."""


class ArgumentConflictError(SimulationError):
    """Mutually exclusive arguments were both supplied."""


class PrimerNotFoundError(SimulationError):
    """A primer has no annealing site on the template."""


class AmbiguousPrimingError(SimulationError):
    """A primer anneals at more than one site on the template."""


class OrientationError(SimulationError):
    """Primer sites are ordered so that no product can be made."""


class OverlapNotFoundError(SimulationError):
    """No overlap of at least the minimum length exists."""


class AmbiguousAssemblyError(SimulationError):
    """A fragment end has more than one compatible joining partner."""


class NoAssemblyError(SimulationError):
    """No assembly product could be formed from the inputs."""


class NotTypeIISError(SimulationError):
    """The requested operation needs a Type IIS enzyme."""


class PrematureStopError(SimulationError):
    """A coding sequence translates with an internal stop codon."""


class QueryParseError(SimulationError):
    """A search query is syntactically invalid or has no positive term."""


class BackendUnavailableError(SimulationError):
    """A remote backend could not be reached; the call may be retried."""


class VendorLimitError(SimulationError):
    """A requested synthetic sequence exceeds the ordering limit."""


class ExpressionError(SimulationError):
    """An arithmetic expression failed to parse or evaluate."""


class EpisodeOverError(SimulationError):
    """step() was called after the episode already ended."""


class GraphError(SimulationError):
    """A computation graph is malformed (cycle or missing parent)."""


class PolicyUnavailableError(SimulationError):
    """The policy backend failed after retries; the episode is abandoned."""


class EmptyBufferError(SimulationError):
    """An export was requested from an empty trajectory buffer."""
