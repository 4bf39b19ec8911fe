"""Exception hierarchy shared by every module."""


class EllbetaError(Exception):
    """Base class for library errors."""


class DomainError(EllbetaError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class TruncationError(DomainError):
    """The integrand does not decay along the line contour."""


class NonConvergence(EllbetaError, ArithmeticError):
    """An infinite product did not meet its tail bound within ``max_terms``."""


class PoleError(EllbetaError, ArithmeticError):
    """Evaluation point lies within resolution of a pole."""


class ZeroError(EllbetaError, ArithmeticError):
    """Evaluation point lies within resolution of a zero (when one is forbidden)."""


class QuadratureError(EllbetaError, ArithmeticError):
    """Base class for integration failures."""


class PoleOnContour(QuadratureError):
    """The integrand has a flagged singularity on or next to the contour."""


class ToleranceNotMet(QuadratureError):
    """Adaptive refinement hit its panel budget.

    The best available estimate is kept on ``result``.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


class CommensurateWarning(UserWarning):
    """Quasiperiods are (numerically) rationally related."""
