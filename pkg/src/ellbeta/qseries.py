"""Infinite q-products, Jacobi theta functions and the Dedekind-type product.

All functions accept scalars or array-likes and return a Python ``complex`` for
scalar input and a complex ndarray otherwise.
"""

import cmath
import dataclasses
import math

import numpy as np

from . import _kernels
from .errors import DomainError, NonConvergence

__all__ = [
    "PrecisionPolicy",
    "DEFAULT_POLICY",
    "check_base",
    "qpochhammer",
    "log_qpochhammer",
    "theta",
    "log_theta",
    "theta1",
    "eta_product",
    "value_flags",
]


@dataclasses.dataclass(frozen=True)
class PrecisionPolicy:
    """Truncation and quadrature knobs.

    Attributes
    ----------
    product_tol : float
        Bound on the neglected log-tail of every infinite product.
    max_terms : int
        Hard cap on factors per product (``NonConvergence`` beyond it).
    quad_rel_tol : float
        Target relative error for adaptive quadrature.
    quad_max_panels : int
        Panel (1-D) or cell (2-D) budget for adaptive quadrature.
    pole_tol : float
        A factor ``|1 - w|`` below this marks a pole or zero.
    prescan_points : int
        Samples along a contour for the singularity pre-scan.
    """

    product_tol: float = 1e-15
    max_terms: int = 10**6
    quad_rel_tol: float = 1e-10
    quad_max_panels: int = 4000
    pole_tol: float = 1e-10
    prescan_points: int = 512

    def __post_init__(self):
        if not self.product_tol > 0:
            raise DomainError("product_tol must be > 0")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if not self.quad_rel_tol > 0:
            raise DomainError("quad_rel_tol must be > 0")
        if self.quad_max_panels < 1:
            raise DomainError("quad_max_panels must be >= 1")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


DEFAULT_POLICY = PrecisionPolicy()


def _as_array(x):
    arr = np.asarray(x, dtype=np.complex128)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    if scalar:
        return complex(arr.reshape(()))
    return arr


def check_base(p, name="p"):
    """Return ``p`` as complex after checking |p| < 1."""
    p = complex(p)
    if not abs(p) < 1:
        raise DomainError(f"|{name}| = {abs(p):.6g} must be < 1")
    return p


def _checked(out, what):
    logv, mn, nt = out
    if np.any(nt < 0):
        raise NonConvergence(f"{what}: tail bound not met within max_terms")
    return logv, mn


def log_qpochhammer(a, p, policy=DEFAULT_POLICY):
    """``(log (a;p)_inf, min |1 - a p^n|)`` as arrays."""
    p = check_base(p)
    arr = np.asarray(a, dtype=np.complex128)
    return _checked(_kernels.log_qpoch(arr, p, policy.product_tol, policy.max_terms), "qpochhammer")


def qpochhammer(a, p, policy=DEFAULT_POLICY):
    """(a;p)_inf = prod_{n>=0} (1 - a p^n)."""
    arr, scalar = _as_array(a)
    logv, _ = log_qpochhammer(arr, p, policy)
    return _ret(np.exp(logv), scalar)


def log_theta(z, p, policy=DEFAULT_POLICY):
    """``(log θ(z;p), min factor)``; z must be nonzero."""
    p = check_base(p)
    z = np.asarray(z, dtype=np.complex128)
    if np.any(z == 0):
        raise DomainError("z=0 outside domain of theta")
    both = np.concatenate([z.ravel(), (p / z).ravel()])
    logv, mn = _checked(
        _kernels.log_qpoch(both, p, policy.product_tol, policy.max_terms), "theta"
    )
    n = z.size
    return (logv[:n] + logv[n:]).reshape(z.shape), np.minimum(mn[:n], mn[n:]).reshape(z.shape)


def theta(z, p, policy=DEFAULT_POLICY):
    """θ(z;p) = (z;p)_inf (p/z;p)_inf."""
    arr, scalar = _as_array(z)
    logv, _ = log_theta(arr, p, policy)
    return _ret(np.exp(logv), scalar)


def _check_tau(tau):
    tau = complex(tau)
    if not tau.imag > 0:
        raise DomainError(f"Im(tau) = {tau.imag:.6g} must be > 0")
    return tau


def theta1(u, tau, policy=DEFAULT_POLICY):
    """Jacobi θ₁(u|τ) through its product form.

    Uses θ₁(u|τ) = i p^{1/8} e^{-πiu} (p;p)_inf θ(e^{2πiu};p) with p = e^{2πiτ}
    and p^{1/8} = e^{πiτ/4}.
    """
    tau = _check_tau(tau)
    arr, scalar = _as_array(u)
    p = cmath.exp(2j * math.pi * tau)
    lt, _ = log_theta(_kernels.expi2pi(arr), p, policy)
    lpp, _ = log_qpochhammer(p, p, policy)
    logv = lt + lpp + 1j * math.pi * tau / 4 - 1j * math.pi * arr
    return _ret(1j * np.exp(logv), scalar)


def eta_product(tau, policy=DEFAULT_POLICY):
    """e^{πiτ/12} (e^{2πiτ}; e^{2πiτ})_inf."""
    tau = _check_tau(tau)
    p = cmath.exp(2j * math.pi * tau)
    lpp, _ = log_qpochhammer(p, p, policy)
    return complex(np.exp(lpp + 1j * math.pi * tau / 12))


def value_flags(value, policy=DEFAULT_POLICY):
    """Flags reported alongside a value: ``at_zero`` below 10·product_tol."""
    flags = []
    if abs(value) < 10 * policy.product_tol:
        flags.append("at_zero")
    return flags
