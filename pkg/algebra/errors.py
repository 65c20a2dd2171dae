"""Exceptions raised by the rank-metric library.

Precondition errors map to CLI exit code 2, everything else to 1.
"""


class RankMetricError(Exception):
    """Base class for all library errors."""


class PreconditionError(RankMetricError, ValueError):
    """An input violates a documented precondition."""


class NotPrime(PreconditionError):
    pass


class ReduciblePolynomial(PreconditionError):
    pass


class NonPrimitivePolynomial(PreconditionError):
    pass


class DegreeMismatch(PreconditionError):
    pass


class NotInSubfield(PreconditionError):
    pass


class EvenCharacteristic(PreconditionError):
    pass


class TowerMismatch(PreconditionError):
    pass


class DependentBasis(PreconditionError):
    pass


class BadSupport(PreconditionError):
    pass


class BadStep(PreconditionError):
    pass


class BadK(PreconditionError):
    pass


class BadEta(PreconditionError):
    pass


class BadGamma(PreconditionError):
    pass


class OutOfRegime(PreconditionError):
    pass


class NonBijectiveComponent(PreconditionError):
    pass


class ZeroDivisorFound(PreconditionError):
    pass


class NotBiadditive(PreconditionError):
    pass


class BudgetExceeded(RankMetricError):
    """Enumeration would exceed the configured codeword budget."""
