"""Integrands and closed-form right-hand sides of the beta integrals.

Integrands are vectorised and built in log space: all gamma-type factors of
one evaluation pass go through a single batched kernel call, and the result
is exponentiated once.  Paired denominators of the form F(x)F(-x) use their
reflection formulas, which are entire where the individual factors have
poles:

    1/(Γ(w)Γ(1/w))    = θ(w;p) θ(1/w;q)
    1/(G(x)G(-x))     = exp(πi(P(x)+P(-x))) θ(z;p̃) θ(1/z;r̃),  z = e^{-2πix/ω₃}
    S(x)S(-x)         = exp(-πi B₂,₂(-x)) (1 - e^{2πix/ω₁}) (1 - e^{2πix/ω₂})
"""

import cmath
import itertools
import math

import numpy as np

from .. import _kernels
from ..errors import DomainError, PoleError, TruncationError
from ..gammas import (
    Regime,
    SineRegime,
    b22,
    log_double_sine,
    log_elliptic_gamma,
    log_modified_gamma_reflection_inv,
    p_cubic,
)
from ..qseries import DEFAULT_POLICY, log_qpochhammer, log_theta
from ..quadrature import Line, Segment, UnitCircle, integrate, integrate2, line_truncation
from .params import (
    EllipticBetaParams,
    HyperbolicParams,
    MultiEllipticParams,
    MultiModifiedParams,
    UnitCircleBetaParams,
)

__all__ = [
    "elliptic_beta_integrand",
    "elliptic_beta_rhs",
    "elliptic_beta_sides",
    "unit_circle_beta_integrand",
    "unit_circle_beta_rhs",
    "unit_circle_beta_sides",
    "kappa_constant",
    "multiple_elliptic_integrand",
    "multiple_elliptic_rhs",
    "multiple_elliptic_sides",
    "multiple_modified_integrand",
    "multiple_modified_rhs",
    "multiple_modified_sides",
    "hyperbolic_integrand",
    "hyperbolic_prefactor",
    "hyperbolic_nr_rhs",
    "hyperbolic_aw_rhs",
    "hyperbolic_nr_sides",
    "hyperbolic_aw_sides",
    "line_halfwidth",
]

_PI = math.pi
_E = _kernels.expi2pi
_TWO_PI_I = 2j * math.pi


# ---------------------------------------------------------------------------
# batched log helpers
# ---------------------------------------------------------------------------

def _stack(args):
    arrs = np.broadcast_arrays(*[np.asarray(a, dtype=np.complex128) for a in args])
    return np.stack(arrs)


def _lgamma_ratio(num, den, q, p, policy):
    """Σ log Γ(num) - Σ log Γ(den) in one kernel call."""
    k = len(num)
    logv, min_den, min_num = log_elliptic_gamma(_stack(num + den), q, p, policy)
    if np.any(min_den[:k] < policy.pole_tol) or np.any(min_num[k:] < policy.pole_tol):
        raise PoleError("elliptic gamma factor at a pole")
    return logv[:k].sum(axis=0) - logv[k:].sum(axis=0)


def _ltheta_sum(args, base, policy):
    logv, _ = log_theta(_stack(args), base, policy)
    return logv.sum(axis=0)


def _lG_ratio(num, den, om, policy):
    """Σ log G(num) - Σ log G(den) via Γ(e^{-2πiu/ω₃}; r̃, p̃)."""
    k = len(num)
    u = _stack(num + den)
    logv, min_den, min_num = log_elliptic_gamma(_E(-u / om.omega3), om.r_tilde, om.p_tilde, policy)
    logv = logv - 1j * _PI * p_cubic(u, om)
    if np.any(min_den[:k] < policy.pole_tol) or np.any(min_num[k:] < policy.pole_tol):
        raise PoleError("modified gamma factor at a pole")
    return logv[:k].sum(axis=0) - logv[k:].sum(axis=0)


def _lG_reflinv_sum(args, om, policy):
    logv, _ = log_modified_gamma_reflection_inv(_stack(args), om, policy)
    return logv.sum(axis=0)


def _lS_ratio(num, den, pair, policy):
    """Σ log S(num) - Σ log S(den) in one batched call."""
    k = len(num)
    logv, zero, pole = log_double_sine(_stack(num + den), pair, policy)
    if np.any(pole[:k]) or np.any(zero[k:]):
        raise PoleError("double sine factor makes the integrand singular")
    # exact lattice hits: zeros above, poles below both give a vanishing factor
    logv = logv.copy()
    logv[:k][zero[:k]] = -np.inf
    logv[k:][pole[k:]] = np.inf
    return logv[:k].sum(axis=0) - logv[k:].sum(axis=0)


def _log1m_e(y):
    """log(1 - e^{2πiy}) without overflow when Im(y) < 0."""
    y = np.asarray(y, dtype=np.complex128)
    y = y - np.rint(y.real)
    out = np.empty(y.shape, dtype=np.complex128)
    small = y.imag >= 0
    with np.errstate(divide="ignore"):
        out[small] = np.log(1 - np.exp(_TWO_PI_I * y[small]))
        yb = y[~small]
        out[~small] = _TWO_PI_I * yb + 1j * _PI + np.log(1 - np.exp(-_TWO_PI_I * yb))
    return out


def _lS_pm_sum(args, pair):
    """Σ log S(x)S(-x) over ``args``, via the elementary closed form."""
    x = _stack(args)
    w1, w2 = pair.omega1, pair.omega2
    logv = -1j * _PI * b22(-x, pair) + _log1m_e(x / w1) + _log1m_e(x / w2)
    return logv.sum(axis=0)


# ---------------------------------------------------------------------------
# elliptic beta integral and its multiple version
# ---------------------------------------------------------------------------

def _per_variable(fn, us):
    """Σ_j fn(u_j), evaluating ``fn`` once per distinct coordinate value.

    Tensor-product rules repeat each coordinate many times, so this removes
    most of the per-variable work in N = 2 without changing any value.
    """
    if len(us) == 1:
        return fn(us[0])
    flat = np.concatenate([u.ravel() for u in us])
    uniq, inv = np.unique(flat, return_inverse=True)
    vals = fn(uniq)[inv]
    n = us[0].size
    return sum(vals[i * n:(i + 1) * n].reshape(us[0].shape) for i in range(len(us)))


def multiple_elliptic_integrand(params: MultiEllipticParams, policy=DEFAULT_POLICY):
    """Integrand of the N-fold 𝕋^N integral including 1/(2πi)^N ∏ 1/z_j.

    Returns ``f(z_1, ..., z_N)`` acting on arrays of equal shape.
    """
    q, p, N = params.q, params.p, params.N
    t, t_n, B = params.t, params.t_n, params.B

    def single(z):
        zi = 1.0 / z
        num = [tn * z for tn in t_n] + [tn * zi for tn in t_n]
        logv = _lgamma_ratio(num, [B * z, B * zi], q, p, policy)
        return logv + _ltheta_sum([z * z], p, policy) + _ltheta_sum([zi * zi], q, policy)

    def f(*zs):
        if len(zs) != N:
            raise DomainError(f"expected {N} variables")
        zs = [np.asarray(z, dtype=np.complex128) for z in zs]
        logv = _per_variable(single, zs)
        if N > 1:
            num, th_p, th_q = [], [], []
            for j, k in itertools.combinations(range(N), 2):
                a, b = zs[j], zs[k]
                num += [t * a * b, t * a / b, t * b / a, t / (a * b)]
                th_p += [a * b, a / b]
                th_q += [1.0 / (a * b), b / a]
            logv = logv + _lgamma_ratio(num, [], q, p, policy)
            logv = logv + _ltheta_sum(th_p, p, policy) + _ltheta_sum(th_q, q, policy)
        jac = np.prod(np.stack(zs), axis=0) * _TWO_PI_I ** N
        return np.exp(logv) / jac

    return f


def multiple_elliptic_rhs(params: MultiEllipticParams, policy=DEFAULT_POLICY):
    q, p, N = params.q, params.p, params.N
    t, t_n, B = params.t, params.t_n, params.B
    num, den = [], []
    for j in range(1, N + 1):
        if j > 1:
            num.append(t ** j)
            den.append(t)
        num += [t ** (j - 1) * t_n[a] * t_n[b] for a, b in itertools.combinations(range(5), 2)]
        den += [t ** (1 - j) * B / tn for tn in t_n]
    logv = complex(_lgamma_ratio([np.array(x) for x in num], [np.array(x) for x in den], q, p, policy))
    lq, _ = log_qpochhammer(q, q, policy)
    lp, _ = log_qpochhammer(p, p, policy)
    logv += N * math.log(2) + math.lgamma(N + 1) - N * (complex(lq) + complex(lp))
    return cmath.exp(logv)


def _as_multi(params: EllipticBetaParams):
    return MultiEllipticParams(0.5, params.t, params.q, params.p, 1)


def elliptic_beta_integrand(params: EllipticBetaParams, policy=DEFAULT_POLICY):
    return multiple_elliptic_integrand(_as_multi(params), policy)


def elliptic_beta_rhs(params: EllipticBetaParams, policy=DEFAULT_POLICY):
    """2 ∏_{n<m} Γ(t_n t_m) / ((q;q)(p;p) ∏ Γ(A/t_n))."""
    return multiple_elliptic_rhs(_as_multi(params), policy)


# ---------------------------------------------------------------------------
# modified elliptic beta integral and its multiple version
# ---------------------------------------------------------------------------

def kappa_constant(omegas, policy=DEFAULT_POLICY, form="auto"):
    """The constant κ in three equivalent forms.

    ``"direct"``: -2(q̃;q̃)/((q;q)(p;p)(r;r)), needs |q| < 1.
    ``"proof"``: 2ω₃ e^{(πi/12)(Σω)(Σ1/ω)} / (ω₂ (r̃;r̃)(p̃;p̃)), any regime.
    ``"mid"``: -2 sqrt(ω₁/(iω₂)) e^{(πi/12)(ω₁/ω₂+ω₂/ω₁)} / ((r;r)(p;p)), any regime.
    ``"auto"`` picks ``direct`` for |q| < 1 and ``proof`` on |q| = 1.
    """
    om = omegas
    if form == "auto":
        form = "direct" if om.regime is Regime.STRICTLY_ELLIPTIC else "proof"

    def lpoch(b):
        v, _ = log_qpochhammer(b, b, policy)
        return complex(v)

    w1, w2, w3 = om.omegas
    if form == "direct":
        if om.regime is not Regime.STRICTLY_ELLIPTIC:
            raise DomainError("direct form of kappa needs |q| < 1")
        logv = lpoch(om.q_tilde) - lpoch(om.q) - lpoch(om.p) - lpoch(om.r)
        return -2 * cmath.exp(logv)
    if form == "proof":
        s = w1 + w2 + w3
        si = 1 / w1 + 1 / w2 + 1 / w3
        logv = 1j * _PI / 12 * s * si - lpoch(om.r_tilde) - lpoch(om.p_tilde)
        return 2 * w3 / w2 * cmath.exp(logv)
    if form == "mid":
        logv = 1j * _PI / 12 * (w1 / w2 + w2 / w1) - lpoch(om.r) - lpoch(om.p)
        return -2 * cmath.sqrt(w1 / (1j * w2)) * cmath.exp(logv)
    raise ValueError(f"unknown kappa form {form!r}")


def multiple_modified_integrand(params: MultiModifiedParams, policy=DEFAULT_POLICY):
    """Integrand of the N-fold segment integral including 1/ω₂^N."""
    om, N, g, g_n, B = params.omegas, params.N, params.g, params.g_n, params.B

    def single(u):
        num = [gn + u for gn in g_n] + [gn - u for gn in g_n]
        return _lG_ratio(num, [B + u, B - u], om, policy) + _lG_reflinv_sum([2 * u], om, policy)

    def f(*us):
        if len(us) != N:
            raise DomainError(f"expected {N} variables")
        us = [np.asarray(u, dtype=np.complex128) for u in us]
        logv = _per_variable(single, us)
        if N > 1:
            num, refl = [], []
            for j, k in itertools.combinations(range(N), 2):
                a, b = us[j], us[k]
                num += [g + a + b, g + a - b, g - a + b, g - a - b]
                refl += [a + b, a - b]
            logv = logv + _lG_ratio(num, [], om, policy) + _lG_reflinv_sum(refl, om, policy)
        return np.exp(logv) / om.omega2 ** N

    return f


def multiple_modified_rhs(params: MultiModifiedParams, policy=DEFAULT_POLICY, kappa_form="auto"):
    om, N, g, g_n, B = params.omegas, params.N, params.g, params.g_n, params.B
    num, den = [], []
    for j in range(1, N + 1):
        if j > 1:
            num.append(j * g)
            den.append(g)
        num += [(j - 1) * g + g_n[a] + g_n[b] for a, b in itertools.combinations(range(5), 2)]
        den += [(1 - j) * g + B - gn for gn in g_n]
    logv = complex(_lG_ratio([np.array(x) for x in num], [np.array(x) for x in den], om, policy))
    kap = kappa_constant(om, policy, kappa_form)
    return kap ** N * math.factorial(N) * cmath.exp(logv)


def _as_multi_mod(params: UnitCircleBetaParams):
    return MultiModifiedParams(0.0, params.g, params.omegas, 1)


def unit_circle_beta_integrand(params: UnitCircleBetaParams, policy=DEFAULT_POLICY):
    return multiple_modified_integrand(_as_multi_mod(params), policy)


def unit_circle_beta_rhs(params: UnitCircleBetaParams, policy=DEFAULT_POLICY, kappa_form="auto"):
    """κ ∏_{n<m} G(g_n+g_m) / ∏ G(𝒜-g_n)."""
    return multiple_modified_rhs(_as_multi_mod(params), policy, kappa_form)


# ---------------------------------------------------------------------------
# hyperbolic integrals
# ---------------------------------------------------------------------------

def hyperbolic_integrand(params: HyperbolicParams, policy=DEFAULT_POLICY):
    """Δ(u; g)/ω₂^N for the Nassrallah-Rahman (``nr``) or Askey-Wilson (``aw``) case."""
    pair, N, g, g_n, B = params.pair, params.N, params.g, params.g_n, params.B
    nr = params.kind == "nr"

    def single(u):
        num = [B + u, B - u] if nr else []
        den = [gn + u for gn in g_n] + [gn - u for gn in g_n]
        return _lS_ratio(num, den, pair, policy) + _lS_pm_sum([2 * u], pair)

    def f(*us):
        if len(us) != N:
            raise DomainError(f"expected {N} variables")
        us = [np.asarray(u, dtype=np.complex128) for u in us]
        logv = _per_variable(single, us)
        if N > 1:
            den, pm = [], []
            for j, k in itertools.combinations(range(N), 2):
                a, b = us[j], us[k]
                den += [g + a + b, g + a - b, g - a + b, g - a - b]
                pm += [a + b, a - b]
            logv = logv + _lS_ratio([], den, pair, policy) + _lS_pm_sum(pm, pair)
        return np.exp(logv) / pair.omega2 ** N

    return f


def hyperbolic_prefactor(pair, policy=DEFAULT_POLICY, form="auto"):
    """(q̃;q̃)/(q;q); on a real ratio through the η-modular closed form.

    With τ = ω₁/ω₂: (q̃;q̃)/(q;q) = sqrt(-iτ) exp(πi(τ + 1/τ)/12).
    """
    tau = pair.omega1 / pair.omega2
    if form == "auto":
        product_ok = pair.regime is SineRegime.PRODUCT and tau.imag > 0
        form = "product" if product_ok and max(abs(pair.q), abs(pair.q_tilde)) <= 0.97 else "eta"
    if form == "product":
        if not (pair.regime is SineRegime.PRODUCT and tau.imag > 0):
            raise DomainError("product prefactor needs Im(omega1/omega2) > 0")
        lt, _ = log_qpochhammer(pair.q_tilde, pair.q_tilde, policy)
        lq, _ = log_qpochhammer(pair.q, pair.q, policy)
        return cmath.exp(complex(lt) - complex(lq))
    if form == "eta":
        return cmath.sqrt(-1j * tau) * cmath.exp(1j * _PI * (tau + 1 / tau) / 12)
    raise ValueError(f"unknown prefactor form {form!r}")


def _hyperbolic_rhs(params: HyperbolicParams, policy):
    pair, N, g, g_n, B = params.pair, params.N, params.g, params.g_n, params.B
    count = len(g_n)
    num, den = [], []
    for j in range(1, N + 1):
        if j > 1:
            num.append(g)
            den.append(j * g)
        if params.kind == "nr":
            num += [(1 - j) * g + B - gn for gn in g_n]
        else:
            num.append((1 - j) * g + B)
        den += [(j - 1) * g + g_n[a] + g_n[b] for a, b in itertools.combinations(range(count), 2)]
    logv = complex(_lS_ratio([np.array(x) for x in num], [np.array(x) for x in den], pair, policy))
    pre = hyperbolic_prefactor(pair, policy)
    return (-2 * pre) ** N * math.factorial(N) * cmath.exp(logv)


def hyperbolic_nr_rhs(params: HyperbolicParams, policy=DEFAULT_POLICY):
    if params.kind != "nr":
        raise DomainError("expected Nassrallah-Rahman parameters (kind='nr')")
    return _hyperbolic_rhs(params, policy)


def hyperbolic_aw_rhs(params: HyperbolicParams, policy=DEFAULT_POLICY):
    if params.kind != "aw":
        raise DomainError("expected Askey-Wilson parameters (kind='aw')")
    return _hyperbolic_rhs(params, policy)


def line_halfwidth(params: HyperbolicParams, f, policy=DEFAULT_POLICY, tol=None):
    """Truncation X for 𝕃 from the decay rate, enlarged until the edges are small.

    The cross-check compares |f| at ±X (on every axis) with its size near the
    origin, scaled by the tail length 1/rate.
    """
    rate = params.decay_rate()
    if not rate > 0:
        raise TruncationError(f"integrand does not decay along the line (rate {rate:.3g})")
    tol = policy.quad_rel_tol if tol is None else tol
    X = line_truncation(rate, policy, tol)
    d = 1j * params.pair.omega2
    N = params.N
    probe = d * np.linspace(-0.5, 0.5, 9)
    if N == 1:
        ref = np.max(np.abs(f(probe)))
    else:
        ref = np.max(np.abs(f(probe, probe[::-1] * 0.5)))
    for _ in range(8):
        edge = d * np.array([-X, X])
        if N == 1:
            vals = f(edge)
        else:
            mid = d * np.linspace(-X, X, 41)
            e1 = np.concatenate([np.full(41, edge[0]), np.full(41, edge[1]), mid, mid])
            e2 = np.concatenate([mid, mid, np.full(41, edge[0]), np.full(41, edge[1])])
            vals = f(e1, e2)
        if np.max(np.abs(vals)) / rate <= tol * max(ref, 1e-300):
            return X
        X *= 1.3
    raise TruncationError("integrand tails do not fall below tolerance on the line")


# ---------------------------------------------------------------------------
# sides
# ---------------------------------------------------------------------------

def _stats_update(stats, res):
    if stats is not None:
        stats["evaluations"] = stats.get("evaluations", 0) + res.evaluations
        stats["panels_used"] = res.panels_used
        stats["error_estimate"] = res.error_estimate


def _quad(f, contour, N, policy, stats):
    if N == 1:
        res = integrate(f, contour, policy)
    elif N == 2:
        res = integrate2(f, contour, policy)
    else:
        raise DomainError("numerical verification is limited to N <= 2")
    _stats_update(stats, res)
    return res.value


def elliptic_beta_sides(params: EllipticBetaParams, policy=DEFAULT_POLICY, stats=None):
    """``(lhs, rhs)`` of the elliptic beta integral over the unit circle."""
    params.validate()
    lhs = _quad(elliptic_beta_integrand(params, policy), UnitCircle(), 1, policy, stats)
    return lhs, elliptic_beta_rhs(params, policy)


def multiple_elliptic_sides(params: MultiEllipticParams, policy=DEFAULT_POLICY, stats=None):
    params.validate()
    lhs = _quad(multiple_elliptic_integrand(params, policy), UnitCircle(), params.N, policy, stats)
    return lhs, multiple_elliptic_rhs(params, policy)


def unit_circle_beta_sides(params: UnitCircleBetaParams, policy=DEFAULT_POLICY, stats=None,
                           kappa_form="auto"):
    """``(lhs, rhs)`` of the modified elliptic beta integral on [-ω₃/2, ω₃/2]."""
    params.validate()
    w3 = params.omegas.omega3
    f = unit_circle_beta_integrand(params, policy)
    lhs = _quad(f, Segment(-w3 / 2, w3 / 2), 1, policy, stats)
    return lhs, unit_circle_beta_rhs(params, policy, kappa_form)


def multiple_modified_sides(params: MultiModifiedParams, policy=DEFAULT_POLICY, stats=None,
                            kappa_form="auto"):
    params.validate()
    w3 = params.omegas.omega3
    f = multiple_modified_integrand(params, policy)
    lhs = _quad(f, Segment(-w3 / 2, w3 / 2), params.N, policy, stats)
    return lhs, multiple_modified_rhs(params, policy, kappa_form)


def _hyperbolic_sides(params, rhs_fn, policy, stats):
    try:
        params.validate()
    except DomainError as exc:
        if params.decay_rate() <= 0:
            raise TruncationError(str(exc)) from exc
        raise
    f = hyperbolic_integrand(params, policy)
    X = line_halfwidth(params, f, policy, tol=policy.quad_rel_tol * 0.1)
    if stats is not None:
        stats["halfwidth"] = X
    lhs = _quad(f, Line(1j * params.pair.omega2, X), params.N, policy, stats)
    return lhs, rhs_fn(params, policy)


def hyperbolic_nr_sides(params: HyperbolicParams, policy=DEFAULT_POLICY, stats=None):
    """``(lhs, rhs)`` of the hyperbolic Nassrallah-Rahman type integral on 𝕃^N."""
    if params.kind != "nr":
        raise DomainError("expected Nassrallah-Rahman parameters (kind='nr')")
    return _hyperbolic_sides(params, hyperbolic_nr_rhs, policy, stats)


def hyperbolic_aw_sides(params: HyperbolicParams, policy=DEFAULT_POLICY, stats=None):
    """``(lhs, rhs)`` of the hyperbolic Askey-Wilson type integral on 𝕃^N."""
    if params.kind != "aw":
        raise DomainError("expected Askey-Wilson parameters (kind='aw')")
    return _hyperbolic_sides(params, hyperbolic_aw_rhs, policy, stats)
