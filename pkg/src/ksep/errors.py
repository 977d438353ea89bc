"""Exception types shared across the package."""


class KsepError(Exception):
    """Base class for every error raised deliberately by this package."""


class DimensionError(KsepError):
    """Operand shapes or per-site dimensions do not match."""


class ParameterError(KsepError):
    """Argument outside its documented range."""


class NormalizationError(KsepError):
    """A vector that must be unit norm is not."""


class WeightError(KsepError):
    """Mixture weights are negative or do not sum to one."""


class FormatError(KsepError):
    """A state or probe file cannot be parsed."""


class StateValidationError(KsepError):
    """A parsed matrix fails the density-matrix invariants.

    Carries the diagnostics record produced while checking, when available.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics


class NumericalError(KsepError):
    """A computed quantity is out of numerical tolerance, e.g. a diagonal
    expectation value more negative than rounding can explain."""


class GuardError(KsepError):
    """Requested problem size exceeds a hard safety guard."""
