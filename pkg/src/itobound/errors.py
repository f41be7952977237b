"""Exception hierarchy shared by all modules."""


class ItoBoundError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameters(ItoBoundError, ValueError):
    """A parameter violates the invariant of the receiving type."""


class DriftBoundZero(InvalidParameters):
    """A formula that divides by C**2 was called with C == 0."""


class NoConvergence(ItoBoundError, ArithmeticError):
    """A series or quadrature did not reach its tolerance within its budget."""


class DriftBoundViolation(ItoBoundError):
    """A drift rule exceeded its declared bound while inside its region."""


class InsufficientSamples(ItoBoundError, ValueError):
    """Too few Monte Carlo samples for the requested statistic."""
