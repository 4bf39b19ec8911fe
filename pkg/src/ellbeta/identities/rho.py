"""The finite sign-flip sums ρ and ρ̃ and their product evaluations.

Both sums run over the 2^N sign vectors ν and are constant in z; these are
pure algebraic identities, used as property checks.
"""

import cmath
import itertools

from ..errors import DomainError

__all__ = [
    "rho_brute",
    "rho_closed",
    "rho_tilde_brute",
    "rho_tilde_closed",
    "rho_summand",
    "antisymmetrizer",
]

_DEN_TOL = 1e-12


def _check_z(z, N):
    z = [complex(x) for x in z]
    if len(z) != N:
        raise DomainError(f"expected {N} values of z, got {len(z)}")
    if any(x == 0 for x in z):
        raise DomainError("z_j = 0 outside domain")
    return z


def rho_summand(z, nu, t, a3, c):
    """One term of the sign-flip sum.

    ``a3`` are the three linear parameters and ``c`` the coefficient of the
    extra factor (1 - c z_j^{-ν_j}).
    """
    zs = [x if s > 0 else 1 / x for x, s in zip(z, nu)]
    out = 1.0 + 0j
    for j, k in itertools.combinations(range(len(zs)), 2):
        w = zs[j] * zs[k]
        den = 1 - w
        if abs(den) < _DEN_TOL:
            raise DomainError("vanishing denominator 1 - z_j z_k")
        out *= (1 - t * w) / den
    for x in zs:
        den = 1 - x * x
        if abs(den) < _DEN_TOL:
            raise DomainError("vanishing denominator 1 - z_j^2")
        num = 1 - c / x
        for a in a3:
            num *= 1 - a * x
        out *= num / den
    return out


def _sign_sum(z, t, a3, c):
    return sum(rho_summand(z, nu, t, a3, c) for nu in itertools.product((1, -1), repeat=len(z)))


def rho_brute(z, t, t3, N):
    """ρ as the explicit 2^N-term sum, with t3 = (t_0, t_1, t_2)."""
    z = _check_z(z, N)
    t0, t1, t2 = (complex(x) for x in t3)
    t = complex(t)
    return _sign_sum(z, t, (t0, t1, t2), t ** (N - 1) * t0 * t1 * t2)


def rho_closed(t, t3, N):
    t0, t1, t2 = (complex(x) for x in t3)
    out = 1.0 + 0j
    for j in range(1, N + 1):
        tj = complex(t) ** (j - 1)
        out *= (1 - tj * t0 * t1) * (1 - tj * t0 * t2) * (1 - tj * t1 * t2)
    return out


def _balance(t, t_n, N):
    out = complex(t) ** (2 * N - 2)
    for x in t_n:
        out *= x
    return out


def rho_tilde_brute(z, t, t_n, B=None, q=None, N=1):
    """ρ̃ as the explicit 2^N-term sum with q^{1/2} on the principal branch.

    ``B`` defaults to t^{2N-2} ∏ t_n, the value at which the closed form holds.
    """
    if q is None:
        raise DomainError("q is required")
    z = _check_z(z, N)
    t = complex(t)
    t_n = [complex(x) for x in t_n]
    if len(t_n) != 5:
        raise DomainError("t_n: expected 5 values")
    B = _balance(t, t_n, N) if B is None else complex(B)
    sq = cmath.sqrt(complex(q))
    if sq == 0:
        raise DomainError("q = 0 outside domain")
    a3 = (t_n[3] / sq, t_n[4] / sq, t ** (N - 1) * t_n[0] * t_n[1] * t_n[2] * sq)
    return _sign_sum(z, t, a3, B / sq)


def rho_tilde_closed(t, t_n, B=None, q=None, N=1):
    if q is None:
        raise DomainError("q is required")
    t = complex(t)
    t_n = [complex(x) for x in t_n]
    B = _balance(t, t_n, N) if B is None else complex(B)
    t3, t4 = t_n[3], t_n[4]
    out = 1.0 + 0j
    for j in range(1, N + 1):
        out *= (1 - t ** (j - 1) * t3 * t4 / q) * (1 - t ** (1 - j) * B / t3) * (1 - t ** (1 - j) * B / t4)
    return out


def antisymmetrizer(z):
    """∏_{j<k} (1 - z_j z_k)(1 - z_j/z_k)/z_j · ∏_j (1 - z_j^2)/z_j."""
    z = [complex(x) for x in z]
    out = 1.0 + 0j
    for j, k in itertools.combinations(range(len(z)), 2):
        out *= (1 - z[j] * z[k]) * (1 - z[j] / z[k]) / z[j]
    for x in z:
        out *= (1 - x * x) / x
    return out
