"""Exception types raised across the package."""


class MlcpError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(MlcpError):
    """Bad .mlcp text. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)


class ModelError(MlcpError):
    """A net or one of its parts violates a construction invariant."""


class CyclicNetError(ModelError):
    """Operation needs a topological order but the parent graph has a cycle."""


class CptLookupError(MlcpError):
    """Internal invariant violation: no row (or several rows) matched a
    parent assignment that the partition checks should have covered."""


class NotMoreOrLessError(MlcpError):
    """The net is not more-or-less, so category-based reasoning is undefined."""


class BudgetExceededError(MlcpError):
    """An outcome-space operation would touch more outcomes than allowed.

    ``count`` is the number of outcomes the operation would have needed
    (the full product when known up front, otherwise the count at which
    the lazy expansion gave up).
    """

    def __init__(self, message, count):
        self.count = count
        super().__init__(message)


class ResourceCapError(MlcpError):
    """A dominance search expanded more nodes than its cap allows."""

    def __init__(self, message, nodes):
        self.nodes = nodes
        super().__init__(message)


class NotImprovingError(MlcpError):
    """A sequence fails the improving-flip precondition."""


class NotIrreducibleError(MlcpError):
    """A sequence fails the irreducibility precondition."""


class BadRepMapError(MlcpError):
    """A representative map violates the constraints for the given endpoints."""


class ReductionError(MlcpError):
    """Post-assertion failure while rewriting a sequence into skip form."""


class RepIndependenceError(MlcpError):
    """Exhaustive representative sweep produced disagreeing verdicts."""
