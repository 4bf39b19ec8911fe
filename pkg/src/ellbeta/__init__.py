"""Elliptic beta integrals and their hyperbolic degenerations, numerically."""

from . import errors
from ._kernels import BACKEND
from .errors import (
    CommensurateWarning,
    DomainError,
    EllbetaError,
    NonConvergence,
    PoleError,
    PoleOnContour,
    QuadratureError,
    ToleranceNotMet,
    TruncationError,
    ZeroError,
)
from .gammas import (
    QuasiPeriods,
    Regime,
    SinePair,
    SineRegime,
    b22,
    derive_bases,
    double_sine,
    double_sine_limit_check,
    elliptic_gamma,
    modified_gamma,
    modified_gamma_product,
    p_cubic,
    sine_pair,
)
from .qseries import (
    DEFAULT_POLICY,
    PrecisionPolicy,
    eta_product,
    qpochhammer,
    theta,
    theta1,
)

__version__ = "0.1.0"
