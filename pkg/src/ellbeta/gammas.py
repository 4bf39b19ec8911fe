"""Elliptic gamma, modified elliptic gamma and double sine functions.

The modified elliptic gamma function ``G(u;ω)`` is always evaluated through

    G(u;ω) = exp(-πi P(u)) Γ(exp(-2πi u/ω₃); r̃, p̃),

which converges whenever Im(ω₃/ω₁), Im(ω₃/ω₂) > 0, including the boundary
case ω₁/ω₂ > 0 where |q| = 1.  The four-product form is kept as an
independent cross-check for |q| < 1.
"""

import cmath
import dataclasses
import enum
import math
import warnings
from fractions import Fraction

import numpy as np

from . import _kernels
from .errors import CommensurateWarning, DomainError, NonConvergence, PoleError, ZeroError
from .qseries import DEFAULT_POLICY, _as_array, _ret, check_base, log_qpochhammer, log_theta

__all__ = [
    "Regime",
    "SineRegime",
    "QuasiPeriods",
    "SinePair",
    "derive_bases",
    "sine_pair",
    "elliptic_gamma",
    "log_elliptic_gamma",
    "b22",
    "p_cubic",
    "modified_gamma_product",
    "modified_gamma",
    "log_modified_gamma",
    "log_modified_gamma_reflection_inv",
    "double_sine",
    "log_double_sine",
    "double_sine_limit_check",
]

_PI = math.pi
_E = _kernels.expi2pi


class Regime(enum.Enum):
    STRICTLY_ELLIPTIC = "strictly-elliptic"
    UNIT_CIRCLE = "unit-circle"


class SineRegime(enum.Enum):
    PRODUCT = "product"
    REAL_RATIO = "real-ratio"


def _ratio_is_real(ratio):
    return abs(ratio.imag) <= 1e-14 * abs(ratio)


def _commensurate(ratio):
    if not _ratio_is_real(ratio):
        return False
    x = ratio.real
    frac = Fraction(x).limit_denominator(64)
    return abs(x - float(frac)) <= 1e-12 * max(1.0, abs(x))


@dataclasses.dataclass(frozen=True)
class QuasiPeriods:
    """Three quasiperiods with the six bases they generate."""

    omega1: complex
    omega2: complex
    omega3: complex
    q: complex
    p: complex
    r: complex
    q_tilde: complex
    p_tilde: complex
    r_tilde: complex
    regime: Regime
    flags: tuple = ()

    @property
    def omegas(self):
        return (self.omega1, self.omega2, self.omega3)

    @property
    def tau(self):
        return self.omega3 / self.omega2

    def scaled(self, lam):
        return derive_bases(lam * self.omega1, lam * self.omega2, lam * self.omega3)


def derive_bases(omega1, omega2, omega3):
    """Build :class:`QuasiPeriods`, classifying the regime by Im(ω₁/ω₂)."""
    w1, w2, w3 = complex(omega1), complex(omega2), complex(omega3)
    if 0 in (w1, w2, w3):
        raise DomainError("quasiperiods must be nonzero")
    if not (w3 / w1).imag > 0:
        raise DomainError("Im(omega3/omega1) must be > 0")
    if not (w3 / w2).imag > 0:
        raise DomainError("Im(omega3/omega2) must be > 0")
    ratio = w1 / w2
    flags = []
    if _ratio_is_real(ratio):
        if not ratio.real > 0:
            raise DomainError("omega1/omega2 must be positive when real")
        regime = Regime.UNIT_CIRCLE
        if _commensurate(ratio):
            flags.append("commensurate")
            warnings.warn(
                f"omega1/omega2 = {ratio.real:.12g} is rational; quasiperiods are commensurate",
                CommensurateWarning,
                stacklevel=2,
            )
    elif ratio.imag > 0:
        regime = Regime.STRICTLY_ELLIPTIC
    else:
        raise DomainError("Im(omega1/omega2) must be >= 0")
    e = lambda x: complex(_E(x))  # noqa: E731
    return QuasiPeriods(
        w1, w2, w3,
        q=e(w1 / w2), p=e(w3 / w2), r=e(w3 / w1),
        q_tilde=e(-w2 / w1), p_tilde=e(-w2 / w3), r_tilde=e(-w1 / w3),
        regime=regime, flags=tuple(flags),
    )


@dataclasses.dataclass(frozen=True)
class SinePair:
    """The pair (ω₁, ω₂) of the double sine function."""

    omega1: complex
    omega2: complex
    regime: SineRegime

    @property
    def tau(self):
        return self.omega1 / self.omega2

    @property
    def q(self):
        return complex(_E(self.omega1 / self.omega2))

    @property
    def q_tilde(self):
        return complex(_E(-self.omega2 / self.omega1))

    def swapped(self):
        return sine_pair(self.omega2, self.omega1)


def sine_pair(omega1, omega2):
    w1, w2 = complex(omega1), complex(omega2)
    if 0 in (w1, w2):
        raise DomainError("quasiperiods must be nonzero")
    ratio = w1 / w2
    if _ratio_is_real(ratio):
        if not ratio.real > 0:
            raise DomainError("Re(omega1/omega2) must be > 0 for a real ratio")
        return SinePair(w1, w2, SineRegime.REAL_RATIO)
    if ratio.imag > 0:
        return SinePair(w1, w2, SineRegime.PRODUCT)
    # the swapped pair is in the product regime; S is symmetric in (ω₁, ω₂)
    if (1 / ratio).imag > 0:
        return SinePair(w1, w2, SineRegime.PRODUCT)
    raise DomainError("unsupported quasiperiod pair")  # pragma: no cover


# ---------------------------------------------------------------------------
# elliptic gamma
# ---------------------------------------------------------------------------

def log_elliptic_gamma(z, q, p, policy=DEFAULT_POLICY):
    """``(log Γ(z;q,p), min pole factor, min zero factor)`` as arrays."""
    q = check_base(q, "q")
    p = check_base(p, "p")
    z = np.asarray(z, dtype=np.complex128)
    if np.any(z == 0):
        raise DomainError("z=0 outside domain")
    logv, min_den, min_num, ok = _kernels.log_egamma(z, q, p, policy.product_tol, policy.max_terms)
    if not np.all(ok):
        raise NonConvergence("elliptic gamma: tail bound not met within max_terms")
    return logv, min_den, min_num


def elliptic_gamma(z, q, p, policy=DEFAULT_POLICY):
    """Γ(z;q,p) = prod_{j,k>=0} (1 - z^{-1} q^{j+1} p^{k+1}) / (1 - z q^j p^k)."""
    arr, scalar = _as_array(z)
    logv, min_den, _ = log_elliptic_gamma(arr, q, p, policy)
    if np.any(min_den < policy.pole_tol):
        raise PoleError("elliptic gamma evaluated at a pole z = q^-j p^-k")
    return _ret(np.exp(logv), scalar)


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def _pair(omegas):
    if isinstance(omegas, (QuasiPeriods, SinePair)):
        return omegas.omega1, omegas.omega2
    w = tuple(omegas)
    return complex(w[0]), complex(w[1])


def b22(u, omegas):
    """B₂,₂(u;ω) = u²/(ω₁ω₂) - u/ω₁ - u/ω₂ + ω₁/(6ω₂) + ω₂/(6ω₁) + 1/2."""
    w1, w2 = _pair(omegas)
    u = np.asarray(u, dtype=np.complex128) if not np.isscalar(u) else complex(u)
    return u * u / (w1 * w2) - u / w1 - u / w2 + w1 / (6 * w2) + w2 / (6 * w1) + 0.5


def p_cubic(u, omegas):
    """The cubic P(u) relating G to Γ(·; r̃, p̃)."""
    if isinstance(omegas, QuasiPeriods):
        w1, w2, w3 = omegas.omegas
    else:
        w1, w2, w3 = (complex(x) for x in omegas)
    u = np.asarray(u, dtype=np.complex128) if not np.isscalar(u) else complex(u)
    s = w1 + w2 + w3
    e = (w1 * w2 + w2 * w3 + w1 * w3) / 2
    return (u - s / 2) * (u * u - u * s + e) / (3 * w1 * w2 * w3)


# ---------------------------------------------------------------------------
# modified elliptic gamma
# ---------------------------------------------------------------------------

def log_modified_gamma(u, omegas, policy=DEFAULT_POLICY):
    """``(log G(u;ω), min pole factor, min zero factor)`` via the r̃, p̃ route."""
    u = np.asarray(u, dtype=np.complex128)
    z = _E(-u / omegas.omega3)
    lg, min_den, min_num = log_elliptic_gamma(z, omegas.r_tilde, omegas.p_tilde, policy)
    return lg - 1j * _PI * p_cubic(u, omegas), min_den, min_num


def log_modified_gamma_reflection_inv(x, omegas, policy=DEFAULT_POLICY):
    """``log 1/(G(x)G(-x))`` and its minimum factor (zeros at the lattice).

    1/(G(x)G(-x)) = exp(πi(P(x)+P(-x))) θ(z;p̃) θ(1/z;r̃) with z = exp(-2πix/ω₃),
    which stays finite where G(±x) have poles.
    """
    x = np.asarray(x, dtype=np.complex128)
    z = _E(-x / omegas.omega3)
    l1, m1 = log_theta(z, omegas.p_tilde, policy)
    l2, m2 = log_theta(1.0 / z, omegas.r_tilde, policy)
    pp = p_cubic(x, omegas) + p_cubic(-x, omegas)
    return l1 + l2 + 1j * _PI * pp, np.minimum(m1, m2)


def modified_gamma(u, omegas, policy=DEFAULT_POLICY):
    """G(u;ω) in either regime."""
    arr, scalar = _as_array(u)
    logv, min_den, _ = log_modified_gamma(arr, omegas, policy)
    if np.any(min_den < policy.pole_tol):
        raise PoleError("modified gamma evaluated at a pole")
    return _ret(np.exp(logv), scalar)


def modified_gamma_product(u, omegas, policy=DEFAULT_POLICY):
    """G(u;ω) from its defining product; requires |q| < 1.

    Regrouped as Γ(e^{2πiu/ω₂}; q, p) / Γ(q̃ e^{2πiu/ω₁}; q̃, r).
    """
    if omegas.regime is not Regime.STRICTLY_ELLIPTIC:
        raise DomainError("product form of G diverges for |q| = 1")
    arr, scalar = _as_array(u)
    l1, d1, _ = log_elliptic_gamma(_E(arr / omegas.omega2), omegas.q, omegas.p, policy)
    l2, _, n2 = log_elliptic_gamma(
        omegas.q_tilde * _E(arr / omegas.omega1), omegas.q_tilde, omegas.r, policy
    )
    if np.any(d1 < policy.pole_tol) or np.any(n2 < policy.pole_tol):
        raise PoleError("modified gamma evaluated at a pole")
    return _ret(np.exp(l1 - l2), scalar)


# ---------------------------------------------------------------------------
# double sine
# ---------------------------------------------------------------------------

_Q_ROUTE_MAX = 0.97


def _log_sine_product(u, pair, policy):
    w1, w2 = pair.omega1, pair.omega2
    q, qt = pair.q, pair.q_tilde
    ln, mn = log_qpochhammer(_E(u / w2), q, policy)
    ld, md = log_qpochhammer(_E(u / w1) * qt, qt, policy)
    return ln - ld, mn < policy.pole_tol, md < policy.pole_tol


def _log_sine_inverse(u, pair, policy):
    w1, w2 = pair.omega1, pair.omega2
    q, qt = pair.q, pair.q_tilde
    ln, mn = log_qpochhammer(_E(-u / w1), qt, policy)
    ld, md = log_qpochhammer(_E(-u / w2) * q, q, policy)
    return -1j * _PI * b22(u, pair) + ln - ld, mn < policy.pole_tol, md < policy.pole_tol


# Gauss-Legendre on [0, 1] for the log-integral; fixed-order panels keep this
# route free of the quadrature module's bookkeeping.
_GL_X, _GL_W = np.polynomial.legendre.leggauss(30)
_GL_X = 0.5 * (_GL_X + 1.0)
_GL_W = 0.5 * _GL_W

_SERIES_ORDER = 14
_INV_ODD_FACT = np.array([1.0 / math.factorial(2 * k + 1) for k in range(_SERIES_ORDER + 1)])


def _small_t_coeffs(a, tau):
    """Coefficients c_k with integrand = sum c_k t^{2k} near t = 0.

    Power-series division of sinh(at)/(at) by sinh(τt)sinh(t)/(τt²), in x = t².
    """
    K = _SERIES_ORDER
    ks = np.arange(K + 1)
    num = a ** (2 * ks) * _INV_ODD_FACT
    den = np.convolve(tau ** (2 * ks) * _INV_ODD_FACT, _INV_ODD_FACT)[: K + 1]
    ratio = np.zeros(K + 1, dtype=np.complex128)
    for k in range(K + 1):
        ratio[k] = (num[k] - np.dot(ratio[:k], den[k:0:-1])) / den[0]
    return a / (2 * tau) * ratio[1:]


def _barnes_log_integral(w, tau, tol):
    """I(w) = ∫₀^∞ [sinh(a t)/(2 sinh(τt) sinh t) - a/(2τt)] dt/t, a = τ+1-2w.

    Requires 0 < Re w < Re(τ+1).  A power series covers [0, t_s]; beyond it
    graded panels of 30-point Gauss-Legendre run to a cutoff where the
    integrand is below ``tol``, and the subtracted term's tail is added exactly.
    """
    a = tau + 1 - 2 * w
    m = min(w.real, (tau + 1 - w).real)
    if not m > 0:
        raise DomainError("point outside the strip of the integral representation")
    t_small = 0.5 / max(abs(tau), abs(a), 1.0)
    coeffs = _small_t_coeffs(a, tau)
    t_end = max((math.log(1.0 / tol) + math.log(10.0)) / (2 * m), 2 * t_small)
    # exact integral of the series over [0, t_s]
    ks = np.arange(coeffs.size)
    head = complex(np.sum(coeffs * t_small ** (2 * ks + 1) / (2 * ks + 1)))
    osc = max(abs(w.imag), abs(a.imag), abs(tau.imag), 1e-300)
    edges = [t_small]
    while edges[-1] < t_end:
        width = min(edges[-1], 0.5 / osc)
        edges.append(min(edges[-1] + width, t_end))
    edges = np.asarray(edges)
    lo, hi = edges[:-1], edges[1:]
    t = (lo[:, None] + (hi - lo)[:, None] * _GL_X[None, :]).ravel()
    wt = ((hi - lo)[:, None] * _GL_W[None, :]).ravel()
    # numerator e^{-2wt} - e^{-2(τ+1-w)t}, written so no exponential grows
    if a.real >= 0:
        numer = -np.exp(-2 * w * t) * np.expm1(-2 * a * t)
    else:
        numer = np.exp(-2 * (tau + 1 - w) * t) * np.expm1(2 * a * t)
    ratio = numer / (np.expm1(-2 * tau * t) * np.expm1(-2 * t))
    vals = (ratio - a / (2 * tau * t)) / t
    return head + complex(np.sum(vals * wt)) - a / (2 * tau * t_end)


def _log_sine_integral_scalar(u, pair, policy):
    """log S at one point through the integral representation and ω₂-shifts."""
    tau = pair.tau
    w = u / pair.omega2
    centre = (tau + 1).real / 2
    k = int(math.floor(centre - w.real + 0.5))
    shift_log = 0j
    zero = pole = False
    # S(u) = S(u + kω₂) prod_{m=0}^{k-1} (1 - e^{2πi(w+m)/τ})        (k > 0)
    # S(u) = S(u - |k|ω₂) / prod_{m=1}^{|k|} (1 - e^{2πi(w-m)/τ})    (k < 0)
    if k > 0:
        for m in range(k):
            f = 1 - complex(_E((w + m) / tau))
            if abs(f) < policy.pole_tol:
                zero = True
            else:
                shift_log += cmath.log(f)
    elif k < 0:
        for m in range(1, -k + 1):
            f = 1 - complex(_E((w - m) / tau))
            if abs(f) < policy.pole_tol:
                pole = True
            else:
                shift_log -= cmath.log(f)
    ws = w + k
    tol = max(policy.product_tol, 1e-15)
    logv = -1j * _PI * complex(b22(ws, (tau, 1.0))) / 2 - _barnes_log_integral(ws, tau, tol)
    return logv + shift_log, zero, pole


def _use_integral(pair):
    if pair.regime is SineRegime.REAL_RATIO:
        return True
    return max(abs(pair.q), abs(pair.q_tilde)) > _Q_ROUTE_MAX


def log_double_sine(u, pair, policy=DEFAULT_POLICY, form="auto"):
    """``(log S(u;ω), zero mask, pole mask)``.

    ``form`` is ``"auto"``, ``"product"``, ``"inverse"`` or ``"integral"``.
    """
    u = np.asarray(u, dtype=np.complex128)
    if pair.regime is SineRegime.PRODUCT and pair.tau.imag < 0:
        pair = pair.swapped()
    if form == "auto" and _use_integral(pair):
        form = "integral"
    if form == "integral":
        if not pair.tau.real > 0:
            raise DomainError("integral representation needs Re(omega1/omega2) > 0")
        flat = u.ravel()
        out = np.empty(flat.shape, dtype=np.complex128)
        zero = np.zeros(flat.shape, dtype=bool)
        pole = np.zeros(flat.shape, dtype=bool)
        for i, x in enumerate(flat):
            out[i], zero[i], pole[i] = _log_sine_integral_scalar(complex(x), pair, policy)
        return out.reshape(u.shape), zero.reshape(u.shape), pole.reshape(u.shape)
    if pair.regime is not SineRegime.PRODUCT:
        raise DomainError(f"form {form!r} needs Im(omega1/omega2) > 0")
    if form == "product":
        return _log_sine_product(u, pair, policy)
    if form == "inverse":
        return _log_sine_inverse(u, pair, policy)
    if form != "auto":
        raise ValueError(f"unknown form {form!r}")
    upper = (u / pair.omega1).imag + (u / pair.omega2).imag >= 0
    logv = np.empty(u.shape, dtype=np.complex128)
    zero = np.empty(u.shape, dtype=bool)
    pole = np.empty(u.shape, dtype=bool)
    for mask, fn, other in ((upper, _log_sine_product, _log_sine_inverse),
                            (~upper, _log_sine_inverse, _log_sine_product)):
        if not mask.any():
            continue
        lv, zm, pm = fn(u[mask], pair, policy)
        both = zm & pm
        if both.any():
            # 0/0 in this form at a regular point; the other form resolves it
            lv2, zm2, pm2 = other(u[mask][both], pair, policy)
            lv[both], zm[both], pm[both] = lv2, zm2, pm2
        logv[mask], zero[mask], pole[mask] = lv, zm, pm
    return logv, zero, pole


def double_sine(u, pair, policy=DEFAULT_POLICY, form="auto"):
    """S(u;ω₁,ω₂) = (e^{2πiu/ω₂};q)_inf / (e^{2πiu/ω₁}q̃;q̃)_inf and its continuation."""
    if not isinstance(pair, SinePair):
        pair = sine_pair(*pair)
    arr, scalar = _as_array(u)
    logv, zero, pole = log_double_sine(arr, pair, policy, form)
    if np.any(pole):
        raise PoleError("double sine evaluated at a pole u in ω₁(1+N)+ω₂(1+N)")
    if np.any(zero):
        raise ZeroError("double sine evaluated at a zero u in -ω₁N-ω₂N")
    return _ret(np.exp(logv), scalar)


def double_sine_limit_check(u, pair, t_scale, policy=DEFAULT_POLICY, prefactor="cubic"):
    """Relative residual of the p, r -> 0 degeneration of G at ω₃ = i·t·ω₂.

    ``prefactor="cubic"`` compares exp(-πiP(u)) Γ(e^{-2πiu/ω₃}; r̃, p̃) with
    S(u)^{-1}; the residual decays like |p| + |r|.  ``prefactor="display"``
    keeps only the part of P linear in ω₃ and moves the ω₃-independent part
    to the right, leaving an O(1/t) remainder.
    """
    if not isinstance(pair, SinePair):
        pair = sine_pair(*pair)
    if pair.regime is not SineRegime.PRODUCT or not pair.tau.imag > 0:
        raise DomainError("limit check needs Im(omega1/omega2) > 0")
    if not t_scale > 0:
        raise DomainError("t_scale must be > 0")
    w1, w2 = pair.omega1, pair.omega2
    w3 = 1j * t_scale * w2
    om = derive_bases(w1, w2, w3)
    u = complex(u)
    lg, min_den, _ = log_elliptic_gamma(_E(-u / w3), om.r_tilde, om.p_tilde, policy)
    if min_den < policy.pole_tol:
        raise PoleError("limit check evaluated at a pole")
    ls, zero, pole = log_double_sine(u, pair, policy)
    if zero or pole:
        raise PoleError("limit check evaluated on the double sine lattice")
    if prefactor == "cubic":
        lhs = -1j * _PI * p_cubic(u, om) + complex(lg)
        rhs = -complex(ls)
    elif prefactor == "display":
        d = 2 * u - w1 - w2
        lhs = -1j * _PI * w3 * d / (12 * w1 * w2) + complex(lg)
        rhs = -1j * _PI * (3 * d * d - w1 * w1 - w2 * w2) / (24 * w1 * w2) - complex(ls)
    else:
        raise ValueError(f"unknown prefactor {prefactor!r}")
    return abs(cmath.exp(lhs - rhs) - 1)
