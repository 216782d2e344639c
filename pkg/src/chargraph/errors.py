"""Exception hierarchy shared across the package.

Every error raised by the library derives from ChargraphError so callers
(and the CLI exit-code mapping) can distinguish library failures from bugs.
"""


class ChargraphError(Exception):
    """Base class for all library errors."""


class InputFormatError(ChargraphError):
    """Unparseable group / degree-list / graph input."""


class MalformedPermutation(InputFormatError):
    """Image array is not a bijection, or generator degrees disagree."""


class ResourceCapExceeded(ChargraphError):
    """A configured size cap was exceeded (group order, class count, graph size)."""


class ClosureExceedsCap(ResourceCapExceeded):
    """Generator closure grew past the configured group-order cap."""


class TooManyClasses(ResourceCapExceeded):
    """Conjugacy class count exceeds the normal-subgroup search cap."""


class GraphTooLarge(ResourceCapExceeded):
    """Graph has more vertices than the exact-algorithm cap allows."""


class PrimeDoesNotDivideOrder(ChargraphError):
    """Requested Sylow data for a prime not dividing the group order."""


class NotNormal(ChargraphError):
    """Quotient requested by a non-normal subgroup."""


class EmptyInput(InputFormatError):
    """Degree list was empty."""


class DegreeRecoveryFailure(ChargraphError):
    """Internal consistency failure in the degree computation (a bug, not data)."""


class NotDistanceThree(ChargraphError):
    """Endpoint pair is not at distance three."""


class NotConnected(ChargraphError):
    """Operation requires a connected graph."""


class SolverInconsistency(ChargraphError):
    """A guaranteed witness (e.g. a Hamiltonian path) was not found by the solver."""


class UnknownFixture(ChargraphError):
    """Requested fixture name is not in the registry."""
