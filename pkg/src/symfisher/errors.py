"""Exception types raised across the package.

Numerical problems derive from :class:`NumericalError`, malformed inputs and
configuration from :class:`ValidationError`. The CLI maps these onto exit
codes.
"""


class SymFisherError(Exception):
    """Base class for all package errors."""


class ValidationError(SymFisherError, ValueError):
    """Input has the wrong shape, content or type."""


class NumericalError(SymFisherError, ArithmeticError):
    """A numerical precondition (definiteness, conditioning) failed."""


class NotPositiveDefinite(NumericalError):
    pass


class NonPositiveEigenvalue(NumericalError):
    pass


class DegenerateKernel(NumericalError):
    pass


class NotSkewSymmetric(ValidationError):
    pass


class DimensionOdd(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class InvalidPairing(ValidationError):
    pass


class MissingNominal(ValidationError):
    pass


class ZeroNominal(ValidationError):
    pass


class OutputDimTooHigh(ValidationError):
    pass


class CoefficientsNotLoaded(ValidationError):
    pass


class ParseError(ValidationError):
    pass


class DimensionError(ParseError):
    pass


class ConfigError(ValidationError):
    pass
