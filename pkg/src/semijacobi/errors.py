"""Exception hierarchy for the semijacobi package.

Every failure mode maps to one of these classes so that callers (and the
command-line driver) can translate them into exit codes without string
matching.
"""


class SemiJacobiError(Exception):
    """Base class for all package errors."""


class DomainError(SemiJacobiError):
    """An argument lies outside the mathematical domain of the operation."""


class PrecisionError(SemiJacobiError):
    """A value could not be certified to the requested accuracy."""


class ConditioningError(PrecisionError):
    """The moment matrix defeated the precision-doubling policy.

    Carries the polynomial degree at which the factorization lost
    positive-definiteness or failed the cross-precision agreement check.
    """

    def __init__(self, message: str, degree: int | None = None):
        super().__init__(message)
        self.degree = degree


class SingularStepError(SemiJacobiError):
    """A forward iteration or reconstruction hit a vanishing denominator."""


class GridError(SemiJacobiError):
    """A sample grid violates the uniformity or size requirements."""


class UsageError(SemiJacobiError):
    """Invalid configuration of a command-line run."""
