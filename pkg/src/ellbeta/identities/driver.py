"""Verification driver: LHS quadrature against RHS products, with reports."""

import dataclasses
import enum
import math
import time

from .._serial import cjson
from ..errors import DomainError, EllbetaError
from ..gammas import Regime
from ..qseries import DEFAULT_POLICY
from . import params as P
from . import sides as S

__all__ = [
    "IdentityId",
    "VerificationReport",
    "SCHEMA",
    "tolerance_for",
    "default_params",
    "params_from_dict",
    "sample",
    "verify",
    "rel_error",
]

SCHEMA = "1"


class IdentityId(str, enum.Enum):
    ELLIPTIC_BETA = "elliptic-beta"
    UNIT_CIRCLE_BETA = "unit-circle-beta"
    MULTI_ELLIPTIC_N1 = "multi-elliptic-n1"
    MULTI_ELLIPTIC_N2 = "multi-elliptic-n2"
    MULTI_MODIFIED_N1 = "multi-modified-n1"
    MULTI_MODIFIED_N2 = "multi-modified-n2"
    HYP_NR_N1 = "hyp-nr-n1"
    HYP_NR_N2 = "hyp-nr-n2"
    HYP_AW_N1 = "hyp-aw-n1"
    HYP_AW_N2 = "hyp-aw-n2"

    @property
    def dimension(self):
        return 2 if self.value.endswith("n2") else 1


_I = IdentityId

# identity -> (params class, sides function, N, hyperbolic kind)
_TABLE = {
    _I.ELLIPTIC_BETA: (P.EllipticBetaParams, S.elliptic_beta_sides, 1, None),
    _I.UNIT_CIRCLE_BETA: (P.UnitCircleBetaParams, S.unit_circle_beta_sides, 1, None),
    _I.MULTI_ELLIPTIC_N1: (P.MultiEllipticParams, S.multiple_elliptic_sides, 1, None),
    _I.MULTI_ELLIPTIC_N2: (P.MultiEllipticParams, S.multiple_elliptic_sides, 2, None),
    _I.MULTI_MODIFIED_N1: (P.MultiModifiedParams, S.multiple_modified_sides, 1, None),
    _I.MULTI_MODIFIED_N2: (P.MultiModifiedParams, S.multiple_modified_sides, 2, None),
    _I.HYP_NR_N1: (P.HyperbolicParams, S.hyperbolic_nr_sides, 1, "nr"),
    _I.HYP_NR_N2: (P.HyperbolicParams, S.hyperbolic_nr_sides, 2, "nr"),
    _I.HYP_AW_N1: (P.HyperbolicParams, S.hyperbolic_aw_sides, 1, "aw"),
    _I.HYP_AW_N2: (P.HyperbolicParams, S.hyperbolic_aw_sides, 2, "aw"),
}


def tolerance_for(identity_id, params=None):
    """Relative tolerance of the schedule for this identity (and regime)."""
    ident = IdentityId(identity_id)
    if ident in (_I.MULTI_ELLIPTIC_N2,):
        return 1e-4
    if ident.dimension == 2:
        return 1e-3
    if ident in (_I.HYP_NR_N1, _I.HYP_AW_N1):
        return 1e-6
    if ident in (_I.UNIT_CIRCLE_BETA, _I.MULTI_MODIFIED_N1):
        om = getattr(params, "omegas", None)
        if om is not None and om.regime is Regime.STRICTLY_ELLIPTIC:
            return 1e-8
        return 1e-6
    return 1e-8


def _policy_for(ident, tol):
    """Quadrature target a few orders below the identity tolerance."""
    if ident.dimension == 2:
        return DEFAULT_POLICY.replace(quad_rel_tol=tol * 1e-2, quad_max_panels=20000)
    return DEFAULT_POLICY.replace(quad_rel_tol=tol * 1e-3)


_T5 = (0.8, 0.75, 0.7 + 0.1j, 0.65, 0.78)
_HYP = (1 + 0.3j, 1.0)


def _uc_omegas():
    return P._omegas_from([1.0, math.sqrt(2), 1j])


def default_params(identity_id):
    """Documented example parameters for each identity."""
    ident = IdentityId(identity_id)
    if ident is _I.ELLIPTIC_BETA:
        return P.EllipticBetaParams(_T5, 0.3, 0.2)
    if ident is _I.UNIT_CIRCLE_BETA:
        return P.UnitCircleBetaParams([0.3] * 5, _uc_omegas())
    if ident is _I.MULTI_ELLIPTIC_N1:
        return P.MultiEllipticParams(0.5, _T5, 0.3, 0.2, 1)
    if ident is _I.MULTI_ELLIPTIC_N2:
        return P.MultiEllipticParams(0.6, (0.8, 0.75, 0.7, 0.65, 0.78), 0.3, 0.2, 2)
    if ident is _I.MULTI_MODIFIED_N1:
        return P.MultiModifiedParams(0.1 - 0.2j, [0.3] * 5, _uc_omegas(), 1)
    if ident is _I.MULTI_MODIFIED_N2:
        return P.MultiModifiedParams(0.1 - 0.2j, [0.3] * 5, _uc_omegas(), 2)
    if ident is _I.HYP_NR_N1:
        return P.HyperbolicParams(0.3, [0.35] * 5, _HYP, 1, "nr")
    if ident is _I.HYP_NR_N2:
        return P.HyperbolicParams(0.2, [0.25] * 5, _HYP, 2, "nr")
    if ident is _I.HYP_AW_N1:
        return P.HyperbolicParams(0.3, [0.4] * 4, _HYP, 1, "aw")
    return P.HyperbolicParams(0.2, [0.3] * 4, _HYP, 2, "aw")


def params_from_dict(identity_id, data):
    ident = IdentityId(identity_id)
    cls, _, N, kind = _TABLE[ident]
    data = dict(data)
    if cls in (P.MultiEllipticParams, P.MultiModifiedParams, P.HyperbolicParams):
        data["N"] = N
    if kind is not None:
        data["kind"] = kind
    return cls.from_dict(data)


def sample(identity_id, rng, regime="unit-circle"):
    """Admissible random parameters for ``identity_id``."""
    ident = IdentityId(identity_id)
    _, _, N, kind = _TABLE[ident]
    if ident is _I.ELLIPTIC_BETA:
        return P.sample_elliptic_beta(rng)
    if ident is _I.UNIT_CIRCLE_BETA:
        return P.sample_unit_circle_beta(rng, regime)
    if ident in (_I.MULTI_ELLIPTIC_N1, _I.MULTI_ELLIPTIC_N2):
        return P.sample_multi_elliptic(rng, N)
    if ident in (_I.MULTI_MODIFIED_N1, _I.MULTI_MODIFIED_N2):
        return P.sample_multi_modified(rng, N, regime)
    return P.sample_hyperbolic(rng, N, kind)


@dataclasses.dataclass(frozen=True)
class VerificationReport:
    identity_id: IdentityId
    lhs: complex
    rhs: complex
    rel_error: float
    tolerance: float
    passed: bool
    evaluations: int
    wall_time: float
    params: dict = None
    panels_used: int = 0
    error_estimate: float = 0.0
    error: str = None
    error_type: str = None

    @property
    def domain_error(self):
        return self.error_type is not None and self.error_type in _DOMAIN_ERRORS

    def to_dict(self):
        d = {
            "schema": SCHEMA,
            "identity_id": IdentityId(self.identity_id).value,
            "lhs": _cjson_or_none(self.lhs),
            "rhs": _cjson_or_none(self.rhs),
            "rel_error": _finite_or_none(self.rel_error),
            "tolerance": self.tolerance,
            "passed": bool(self.passed),
            "evaluations": int(self.evaluations),
            "wall_time": self.wall_time,
            "panels_used": int(self.panels_used),
            "error_estimate": _finite_or_none(self.error_estimate),
            "error": self.error,
            "error_type": self.error_type,
            "params": self.params,
        }
        return dict(sorted(d.items()))


_DOMAIN_ERRORS = ("DomainError", "TruncationError")


def _cjson_or_none(z):
    z = complex(z)
    return cjson(z) if math.isfinite(z.real) and math.isfinite(z.imag) else None


def _finite_or_none(x):
    x = float(x)
    return x if math.isfinite(x) else None


def rel_error(lhs, rhs):
    scale = max(abs(lhs), abs(rhs))
    if scale == 0:
        return 0.0
    return abs(lhs - rhs) / scale


def verify(identity_id, params=None, policy=None, tolerance=None):
    """Run one identity and return a :class:`VerificationReport`.

    Library errors never escape: they produce a failed report whose
    ``error_type`` names the exception class.
    """
    ident = IdentityId(identity_id)
    cls, sides, N, kind = _TABLE[ident]
    if params is None:
        params = default_params(ident)
    tol = tolerance_for(ident, params) if tolerance is None else float(tolerance)
    if policy is None:
        policy = _policy_for(ident, tol)
    stats = {}
    t0 = time.perf_counter()
    lhs = rhs = complex("nan")
    err = err_type = None
    try:
        if not isinstance(params, cls):
            raise DomainError(f"{ident.value} expects {cls.__name__}")
        if getattr(params, "N", N) != N or getattr(params, "kind", kind) != kind:
            raise DomainError(f"{ident.value} expects N={N}" + (f", kind={kind}" if kind else ""))
        lhs, rhs = sides(params, policy, stats=stats)
        re = rel_error(lhs, rhs)
    except EllbetaError as exc:
        err, err_type = str(exc), type(exc).__name__
        re = math.inf
    wall = time.perf_counter() - t0
    try:
        echo = params.to_dict()
    except Exception:  # pragma: no cover - defensive, params of the wrong type
        echo = None
    return VerificationReport(
        identity_id=ident, lhs=lhs, rhs=rhs, rel_error=re, tolerance=tol,
        passed=bool(re <= tol), evaluations=stats.get("evaluations", 0), wall_time=wall,
        params=echo, panels_used=stats.get("panels_used", 0),
        error_estimate=stats.get("error_estimate", 0.0), error=err, error_type=err_type,
    )
