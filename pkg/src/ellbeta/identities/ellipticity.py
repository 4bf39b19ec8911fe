"""Ellipticity of the integrand ratio R(u) = Δ(u+ω₁)/Δ(u).

R can be built three ways: from its theta-function closed form, from the
Γ-integrand of the additive elliptic beta integral (needs |q| < 1), or from the
G-integrand of the modified integral (either regime).  All three agree, and R
is periodic under u -> u+ω₂ and u -> u+ω₃.
"""

import numpy as np

from .. import _kernels
from ..errors import DomainError, PoleError
from ..gammas import Regime
from ..qseries import DEFAULT_POLICY, log_theta
from .params import UnitCircleBetaParams
from .sides import _lG_ratio, _lG_reflinv_sum, _lgamma_ratio

__all__ = ["integrand_ratio", "ellipticity_residual"]

_E = _kernels.expi2pi


def _ltheta(x, p, policy):
    logv, minf = log_theta(np.asarray(x, dtype=np.complex128), p, policy)
    if np.any(minf < policy.pole_tol):
        raise PoleError("theta factor vanishes")
    return complex(logv)


def _ratio_theta(u, params, policy):
    om = params.omegas
    w1, w2 = om.omega1, om.omega2
    p, A = om.p, params.A
    e = lambda x: _E(x / w2)
    logv = 2j * np.pi * (w1 / w2)
    logv += _ltheta(e(2 * (u + w1)), p, policy) + _ltheta(e(u + w1 - A), p, policy)
    logv -= _ltheta(e(2 * u), p, policy) + _ltheta(e(u + A), p, policy)
    for g in params.g:
        logv += _ltheta(e(u + g), p, policy) - _ltheta(e(u + w1 - g), p, policy)
    return np.exp(logv)


def _log_delta_gamma(u, params, policy):
    om = params.omegas
    e = lambda x: np.asarray(_E(x / om.omega2), dtype=np.complex128)
    num = [e(g + u) for g in params.g] + [e(g - u) for g in params.g]
    den = [e(2 * u), e(-2 * u), e(params.A + u), e(params.A - u)]
    return complex(_lgamma_ratio(num, den, om.q, om.p, policy))


def _log_delta_modified(u, params, policy):
    om = params.omegas
    u = np.asarray(u, dtype=np.complex128)
    num = [g + u for g in params.g] + [g - u for g in params.g]
    logv = _lG_ratio(num, [params.A + u, params.A - u], om, policy)
    return complex(logv + _lG_reflinv_sum([2 * u], om, policy))


def integrand_ratio(u, params: UnitCircleBetaParams, policy=DEFAULT_POLICY, source="theta",
                    shift="omega1"):
    """Δ(u+ω)/Δ(u) with ω = ω₁ (the displacement of R) or another quasiperiod.

    ``source`` is ``"theta"`` (closed form, ω₁ only), ``"gamma"`` or ``"modified"``.
    """
    u = complex(u)
    om = params.omegas
    step = {"omega1": om.omega1, "omega2": om.omega2, "omega3": om.omega3}[shift]
    if source == "theta":
        if shift != "omega1":
            raise DomainError("the theta closed form describes the omega1 shift only")
        return _ratio_theta(u, params, policy)
    if source == "gamma":
        if om.regime is not Regime.STRICTLY_ELLIPTIC:
            raise DomainError("Gamma-built integrand needs |q| < 1")
        ld = _log_delta_gamma
    elif source == "modified":
        ld = _log_delta_modified
    else:
        raise ValueError(f"unknown source {source!r}")
    return np.exp(ld(u + step, params, policy) - ld(u, params, policy))


def ellipticity_residual(u, params: UnitCircleBetaParams, policy=DEFAULT_POLICY, source="theta",
                         shifts=("omega2", "omega3")):
    """max over the shifts of |R(u+ω) - R(u)| / |R(u)|."""
    om = params.omegas
    R0 = integrand_ratio(u, params, policy, source)
    if not np.isfinite(R0) or R0 == 0:
        raise PoleError("R(u) is singular at this point")
    res = 0.0
    for s in shifts:
        step = {"omega1": om.omega1, "omega2": om.omega2, "omega3": om.omega3}[s]
        R1 = integrand_ratio(complex(u) + step, params, policy, source)
        res = max(res, abs(R1 - R0) / abs(R0))
    return float(res)
