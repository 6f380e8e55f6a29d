"""Exception hierarchy.

Every error a caller can trigger with bad input derives from
:class:`EcGraphError` (itself a ``ValueError``); the command line maps
these to exit status 1.
"""


class EcGraphError(ValueError):
    """Base class for user-facing errors."""


class GraphError(EcGraphError):
    """Malformed graph input (out-of-range endpoint, self-loop, bad file)."""


class PartitionError(EcGraphError):
    """A partition violates its invariants against a graph."""


class ParameterError(EcGraphError):
    """Invalid family, strategy, cost-model or solver parameters."""


class CostOverflowError(EcGraphError, OverflowError):
    """An operation count does not fit in a double."""


class UnreachableError(EcGraphError):
    """No path exists between two blocks."""


class SizeCapError(EcGraphError):
    """A cluster or Hamiltonian is too large for the requested solver."""


class ConvergenceError(EcGraphError):
    """The iterative eigensolver did not reach its tolerance."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
