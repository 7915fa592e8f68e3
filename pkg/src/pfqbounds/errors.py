"""Exception types shared across the package."""


class PfqError(Exception):
    """Base class for all package errors."""


class InvalidSpec(PfqError):
    """Parameter bundle violates a structural invariant."""


class DomainError(PfqError):
    """Arguments outside the domain of the requested operation."""


class PoleError(PfqError):
    """A pole makes the requested value infinite (a gamma factor in
    numerator position, or a lower parameter, at a non-positive
    integer)."""


class ZeroError(PfqError):
    """A quantity that must be non-zero evaluates to zero, so the
    requested ratio degenerates."""


class NotConverged(PfqError):
    """Iteration budget exhausted before the tolerance was met."""

    def __init__(self, message, value=None, err=None):
        super().__init__(message)
        self.value = value
        self.err = err


class DegenerateParameters(PfqError):
    """Numerator parameters differ by an integer; the inverse-power
    expansion splits into logarithmic branches that are out of scope."""


class NearIntegerDifference(PfqError):
    """A sine prefactor degenerates because a parameter difference is
    too close to an integer."""


class UnsupportedQ(PfqError):
    """No closed-form density is available for this parameter count."""


class ArgumentOutOfRange(PfqError):
    """Series arguments outside the convergence region."""
