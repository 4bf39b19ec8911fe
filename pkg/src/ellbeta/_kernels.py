"""Truncated q-product kernels in log space.

Two interchangeable implementations of the same contracts:

* ``*_numba``: scalar loops compiled with ``numba.njit``.
* ``*_numpy``: vectorised loops over the whole argument array.

The active backend is chosen at import time.  Setting the environment
variable ``ELLBETA_DISABLE_NUMBA=1`` (or running without numba installed)
selects the numpy path.  Both return identical outputs up to rounding, which
``tests/test_kernels.py`` checks directly.

Every kernel returns ``log`` values (complex, any branch) together with the
minimum modulus of the factors it multiplied, so callers can detect zeros and
poles without dividing by them.
"""

import math
import os

import numpy as np

__all__ = [
    "BACKEND",
    "log_qpoch",
    "log_egamma",
    "log_qpoch_numpy",
    "log_egamma_numpy",
    "log_qpoch_numba",
    "log_egamma_numba",
    "NUMBA_AVAILABLE",
]

_DISABLE = os.environ.get("ELLBETA_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes", "on")

try:
    import numba

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False


# ---------------------------------------------------------------------------
# numpy path
# ---------------------------------------------------------------------------

_LOG_BLOCK = 8


def _log0(x):
    """log with exact zeros mapped to -inf (no warnings)."""
    zero = x == 0
    if np.any(zero):
        out = np.log(np.where(zero, 1.0, x))
        out[zero] = -np.inf
        return out
    return np.log(x)


def log_qpoch_numpy(a, q, tol, max_terms):
    """log (a;q)_inf elementwise.

    Returns ``(logv, min_factor, nterms)``; ``nterms`` is -1 where the tail
    bound was not met within ``max_terms`` factors.  Factors are multiplied
    into a running product whose log is taken every ``_LOG_BLOCK`` steps.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 1:  # the loops index with flat positions
        shape = a.shape
        out = log_qpoch_numpy(a.ravel(), q, tol, max_terms)
        return tuple(x.reshape(shape) for x in out)
    q = complex(q)
    aq = abs(q)
    logv = np.zeros(a.shape, dtype=np.complex128)
    mn = np.full(a.shape, np.inf)
    nterms = np.full(a.shape, -1, dtype=np.int64)
    if a.size == 0:
        return logv, mn, nterms
    w = a.copy()
    prod = np.ones(a.shape, dtype=np.complex128)
    active = np.ones(a.shape, dtype=bool)
    for n in range(max_terms):
        idx = np.flatnonzero(active)
        f = 1.0 - w[idx]
        mn[idx] = np.minimum(mn[idx], np.abs(f))
        prod[idx] *= f
        w[idx] *= q
        aw = np.abs(w[idx])
        with np.errstate(divide="ignore", invalid="ignore"):
            done = (aw < 0.5) & (aw / ((1.0 - aw) * (1.0 - aq)) < tol)
        ap = np.abs(prod[idx])
        flush = done | (ap > 1e200) | (ap < 1e-200)
        if (n + 1) % _LOG_BLOCK == 0:
            flush[:] = True
        if flush.any():
            fi = idx[flush]
            logv[fi] += _log0(prod[fi])
            prod[fi] = 1.0
        nterms[idx[done]] = n + 1
        active[idx[done]] = False
        if not active.any():
            break
    rest = np.flatnonzero(active)
    logv[rest] += _log0(prod[rest])
    logv[np.isneginf(logv.real)] = complex(-np.inf, 0.0)
    return logv, mn, nterms


_SERIES_RHO = 0.95


def _series_mask(absz, aq, ap, tol):
    """Where the power series in z is valid and cheaper than the double product."""
    apq = aq * ap
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = np.maximum(absz, apq / absz)
        n_series = np.log(tol) / np.log(rho)
        if aq > 0 and ap > 0:
            n_prod = math.log(tol) ** 2 / (2 * math.log(aq) * math.log(ap))
        else:
            n_prod = 0.0
    return (absz < 1) & (apq < absz) & (rho < _SERIES_RHO) & (n_series < n_prod), rho


def _log_egamma_series_numpy(z, q, p, rho, tol, max_terms):
    """Σ_m (z^m - (pq/z)^m) / (m (1-q^m)(1-p^m)) for |pq| < |z| < 1."""
    aq, ap = abs(q), abs(p)
    scale = 1.0 / ((1 - aq) * (1 - ap))
    zm = z.copy()
    wm = (q * p) / z
    w = wm.copy()
    qm, pm = q, p
    out = np.zeros(z.shape, dtype=np.complex128)
    rm = rho.copy()
    ok = np.zeros(z.shape, dtype=bool)
    for m in range(1, max_terms + 1):
        out += (zm - wm) / (m * (1 - qm) * (1 - pm))
        rm *= rho
        if np.all(rm * scale / (1 - rho) < tol):
            ok[:] = True
            break
        zm *= z
        wm *= w
        qm *= q
        pm *= p
    return out, ok


def log_egamma_numpy(z, q, p, tol, max_terms):
    """log Γ(z;q,p) elementwise via rows (z^{-1}qp^{k+1};q)/(zp^k;q).

    Returns ``(logv, min_den, min_num, ok)``; ``min_den`` is the smallest
    |1 - z q^j p^k| (pole proximity), ``min_num`` the smallest numerator factor
    (zero proximity).
    """
    z = np.asarray(z, dtype=np.complex128)
    if z.ndim != 1:
        shape = z.shape
        out = log_egamma_numpy(z.ravel(), q, p, tol, max_terms)
        return tuple(x.reshape(shape) for x in out)
    q = complex(q)
    p = complex(p)
    aq, ap = abs(q), abs(p)
    logv = np.zeros(z.shape, dtype=np.complex128)
    min_den = np.full(z.shape, np.inf)
    min_num = np.full(z.shape, np.inf)
    ok = np.ones(z.shape, dtype=bool)
    if z.size == 0:
        return logv, min_den, min_num, ok
    absz = np.abs(z)
    ser, rho = _series_mask(absz, aq, ap, tol)
    if ser.any():
        lv, sok = _log_egamma_series_numpy(z[ser], q, p, rho[ser], tol, max_terms)
        logv[ser] = lv
        ok[ser] = sok
        min_den[ser] = 1.0 - absz[ser]
        min_num[ser] = 1.0 - aq * ap / absz[ser]
    zinv = 1.0 / z
    scale = np.abs(z) + abs(q * p) * np.abs(zinv)
    row_tol = tol * (1.0 - ap)
    pk = 1.0 + 0.0j
    active = ~ser
    if not active.any():
        return logv, min_den, min_num, ok
    for k in range(max_terms):
        za = z[active]
        ln, mn_n, nt_n = log_qpoch_numpy(q * p * pk / za, q, row_tol, max_terms)
        ld, mn_d, nt_d = log_qpoch_numpy(za * pk, q, row_tol, max_terms)
        logv[active] += ln - ld
        min_num[active] = np.minimum(min_num[active], mn_n)
        min_den[active] = np.minimum(min_den[active], mn_d)
        ok[active] &= (nt_n >= 0) & (nt_d >= 0)
        pk *= p
        bound = scale[active] * abs(pk) / ((1.0 - aq) * (1.0 - ap))
        done = (bound < tol) & (np.abs(za * pk) < 0.5)
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            break
    ok[active] = False
    return logv, min_den, min_num, ok


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

if NUMBA_AVAILABLE:
    import cmath

    @numba.njit(cache=True, nogil=True)
    def _qpoch_scalar(a, q, tol, max_terms):
        aq = abs(q)
        s = 0.0 + 0.0j
        prod = 1.0 + 0.0j
        w = a
        mn = np.inf
        zero = False
        for n in range(max_terms):
            f = 1.0 - w
            af = abs(f)
            if af < mn:
                mn = af
            if af == 0.0:
                zero = True
            else:
                prod *= f
            ap = abs(prod)
            if (n + 1) % 8 == 0 or ap > 1e200 or ap < 1e-200:
                s += cmath.log(prod)
                prod = 1.0 + 0.0j
            w = w * q
            aw = abs(w)
            if aw < 0.5 and aw / ((1.0 - aw) * (1.0 - aq)) < tol:
                s += cmath.log(prod)
                if zero:
                    s = complex(-np.inf, 0.0)
                return s, mn, n + 1
        s += cmath.log(prod)
        if zero:
            s = complex(-np.inf, 0.0)
        return s, mn, -1

    @numba.njit(cache=True, nogil=True)
    def _log_qpoch_numba(a, q, tol, max_terms):
        n = a.shape[0]
        logv = np.empty(n, dtype=np.complex128)
        mn = np.empty(n, dtype=np.float64)
        nt = np.empty(n, dtype=np.int64)
        for i in range(n):
            logv[i], mn[i], nt[i] = _qpoch_scalar(a[i], q, tol, max_terms)
        return logv, mn, nt

    @numba.njit(cache=True, nogil=True)
    def _egamma_series_scalar(z, q, p, rho, tol, max_terms):
        aq = abs(q)
        ap = abs(p)
        scale = 1.0 / ((1.0 - aq) * (1.0 - ap))
        w = q * p / z
        zm = z
        wm = w
        qm = q
        pm = p
        s = 0.0 + 0.0j
        rm = rho
        for m in range(1, max_terms + 1):
            s += (zm - wm) / (m * (1.0 - qm) * (1.0 - pm))
            rm *= rho
            if rm * scale / (1.0 - rho) < tol:
                return s, True
            zm *= z
            wm *= w
            qm *= q
            pm *= p
        return s, False

    @numba.njit(cache=True, nogil=True)
    def _egamma_scalar(z, q, p, tol, max_terms):
        aq = abs(q)
        ap = abs(p)
        absz = abs(z)
        apq = aq * ap
        if absz < 1.0 and apq < absz and aq > 0.0 and ap > 0.0:
            rho = max(absz, apq / absz)
            if rho < 0.95:
                n_series = math.log(tol) / math.log(rho)
                n_prod = math.log(tol) ** 2 / (2.0 * math.log(aq) * math.log(ap))
                if n_series < n_prod:
                    s, ok = _egamma_series_scalar(z, q, p, rho, tol, max_terms)
                    return s, 1.0 - absz, 1.0 - apq / absz, ok
        zinv = 1.0 / z
        scale = abs(z) + abs(q * p) * abs(zinv)
        row_tol = tol * (1.0 - ap)
        s = 0.0 + 0.0j
        min_den = np.inf
        min_num = np.inf
        ok = True
        pk = 1.0 + 0.0j
        for k in range(max_terms):
            ln, mn_n, nt_n = _qpoch_scalar(q * p * pk * zinv, q, row_tol, max_terms)
            ld, mn_d, nt_d = _qpoch_scalar(z * pk, q, row_tol, max_terms)
            s += ln - ld
            if mn_n < min_num:
                min_num = mn_n
            if mn_d < min_den:
                min_den = mn_d
            if nt_n < 0 or nt_d < 0:
                ok = False
            pk = pk * p
            bound = scale * abs(pk) / ((1.0 - aq) * (1.0 - ap))
            if bound < tol and abs(z * pk) < 0.5:
                return s, min_den, min_num, ok
        return s, min_den, min_num, False

    @numba.njit(cache=True, nogil=True)
    def _log_egamma_numba(z, q, p, tol, max_terms):
        n = z.shape[0]
        logv = np.empty(n, dtype=np.complex128)
        min_den = np.empty(n, dtype=np.float64)
        min_num = np.empty(n, dtype=np.float64)
        ok = np.empty(n, dtype=np.bool_)
        for i in range(n):
            logv[i], min_den[i], min_num[i], ok[i] = _egamma_scalar(z[i], q, p, tol, max_terms)
        return logv, min_den, min_num, ok

    def log_qpoch_numba(a, q, tol, max_terms):
        a = np.asarray(a, dtype=np.complex128)
        shape = a.shape
        out = _log_qpoch_numba(np.ascontiguousarray(a.ravel()), complex(q), float(tol), int(max_terms))
        return tuple(x.reshape(shape) for x in out)

    def log_egamma_numba(z, q, p, tol, max_terms):
        z = np.asarray(z, dtype=np.complex128)
        shape = z.shape
        out = _log_egamma_numba(
            np.ascontiguousarray(z.ravel()), complex(q), complex(p), float(tol), int(max_terms)
        )
        return tuple(x.reshape(shape) for x in out)

else:  # pragma: no cover
    log_qpoch_numba = None
    log_egamma_numba = None


if NUMBA_AVAILABLE and not _DISABLE:
    BACKEND = "numba"
    log_qpoch = log_qpoch_numba
    log_egamma = log_egamma_numba
else:
    BACKEND = "numpy"
    log_qpoch = log_qpoch_numpy
    log_egamma = log_egamma_numpy


def expi2pi(x):
    """exp(2πi x) with Re(x) reduced modulo 1 first."""
    x = np.asarray(x, dtype=np.complex128)
    xr = x.real - np.rint(x.real)
    return np.exp(2j * math.pi * (xr + 1j * x.imag))
