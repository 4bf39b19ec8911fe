import cmath
import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellbeta import (
    CommensurateWarning,
    DomainError,
    PoleError,
    Regime,
    SineRegime,
    ZeroError,
    b22,
    derive_bases,
    double_sine,
    double_sine_limit_check,
    elliptic_gamma,
    modified_gamma,
    modified_gamma_product,
    p_cubic,
    qpochhammer,
    sine_pair,
    theta,
)
from ellbeta.gammas import log_modified_gamma_reflection_inv

SQ2 = math.sqrt(2)
E = lambda x: cmath.exp(2j * math.pi * x)  # noqa: E731


def rel(a, b):
    return abs(a - b) / abs(b)


# -- bases ---------------------------------------------------------------------

def test_derive_bases_unit_circle():
    om = derive_bases(1, SQ2, 1j)
    assert om.regime is Regime.UNIT_CIRCLE
    assert abs(om.r_tilde - math.exp(-2 * math.pi)) < 1e-15
    assert abs(om.r_tilde - 1.8674e-3) < 1e-7
    assert abs(abs(om.q) - 1) < 1e-15


def test_derive_bases_strict():
    om = derive_bases(1 + 0.3j, 1, 2j)
    assert om.regime is Regime.STRICTLY_ELLIPTIC
    assert abs(abs(om.q) - math.exp(-0.6 * math.pi)) < 1e-15
    for name, val in [("q", (1 + 0.3j) / 1), ("p", 2j), ("r", 2j / (1 + 0.3j)),
                      ("q_tilde", -1 / (1 + 0.3j)), ("p_tilde", -1 / 2j), ("r_tilde", -(1 + 0.3j) / 2j)]:
        assert abs(getattr(om, name) - E(val)) < 1e-14


def test_derive_bases_commensurate_warning():
    with pytest.warns(CommensurateWarning):
        om = derive_bases(1, 1, 1j)
    assert "commensurate" in om.flags


@pytest.mark.parametrize("w", [(1, 1, -1j), (1, 1j, 2j), (1 - 0.3j, 1, 2j), (-1, 1, 1j), (0, 1, 1j)])
def test_derive_bases_domain(w):
    with pytest.raises(DomainError):
        derive_bases(*w)


def test_scaled_preserves_bases():
    om = derive_bases(1 + 0.4j, 1, 2j)
    om2 = om.scaled(2.0)
    for name in ("q", "p", "r", "q_tilde", "p_tilde", "r_tilde"):
        assert abs(getattr(om, name) - getattr(om2, name)) < 1e-14


# -- elliptic gamma ------------------------------------------------------------

def test_egamma_p_zero():
    assert rel(elliptic_gamma(0.5, 0.4, 0), 1 / complex(mpmath.qp(0.5, 0.4))) < 1e-13


def test_egamma_difference_example():
    z, q, p = 0.3 + 0.2j, 0.35, 0.25
    assert rel(elliptic_gamma(q * z, q, p) / elliptic_gamma(z, q, p), theta(z, p)) < 1e-11


def test_egamma_reflection_example():
    z, q, p = 0.6 * cmath.exp(0.7j), 0.3, 0.2
    v = elliptic_gamma(z, q, p) * elliptic_gamma(1 / z, q, p) * theta(z, p) * theta(1 / z, q)
    assert abs(v - 1) < 1e-11


def test_egamma_against_double_product():
    z, q, p = 0.7 - 0.4j, 0.3 + 0.2j, -0.25
    num = den = mpmath.mpc(1)
    for j in range(60):
        for k in range(60):
            num *= 1 - q ** (j + 1) * p ** (k + 1) / z
            den *= 1 - z * q ** j * p ** k
    assert rel(elliptic_gamma(z, q, p), complex(num / den)) < 1e-12


def test_egamma_pole_and_domain():
    with pytest.raises(PoleError):
        elliptic_gamma(1.0, 0.3, 0.2)
    with pytest.raises(DomainError, match="z=0 outside domain"):
        elliptic_gamma(0, 0.3, 0.2)
    with pytest.raises(DomainError):
        elliptic_gamma(0.5, 1.2, 0.2)


_z = st.tuples(st.floats(0.2, 4.0), st.floats(-math.pi, math.pi))
_b = st.tuples(st.floats(0.05, 0.6), st.floats(-math.pi, math.pi))


def _polar(t):
    return t[0] * cmath.exp(1j * t[1])


@given(_z, _b, _b)
def test_egamma_difference_both_bases(zc, qc, pc):
    z, q, p = _polar(zc), _polar(qc), _polar(pc)
    try:
        g = elliptic_gamma(z, q, p)
        gq = elliptic_gamma(q * z, q, p)
        gp = elliptic_gamma(p * z, q, p)
    except PoleError:
        return
    assert abs(gq - theta(z, p) * g) <= 1e-10 * max(abs(gq), abs(g) * 1e-3)
    assert abs(gp - theta(z, q) * g) <= 1e-10 * max(abs(gp), abs(g) * 1e-3)


@given(_z, _b, _b)
def test_egamma_reflection_property(zc, qc, pc):
    z, q, p = _polar(zc), _polar(qc), _polar(pc)
    try:
        v = elliptic_gamma(z, q, p) * elliptic_gamma(q * p / z, q, p)
    except PoleError:
        return
    assert abs(v - 1) < 1e-10 * max(1.0, abs(v))


# -- polynomials ---------------------------------------------------------------

def test_b22_examples():
    assert abs(b22(1.0, (1, 1)) + 1 / 6) < 1e-15
    assert abs(b22(0, (1, 2)) - 11 / 12) < 1e-15
    u, w1, w2 = 0.4 + 0.1j, 1.0, SQ2
    ref = (u * u - u * (w1 + w2)) / (w1 * w2) + (w1 * w1 + w2 * w2) / (6 * w1 * w2) + 0.5
    assert abs(b22(u, (w1, w2)) - ref) < 1e-15


def test_p_cubic_examples():
    om = derive_bases(1 + 0.3j, 1, 2j)
    assert abs(p_cubic(sum(om.omegas) / 2, om)) < 1e-15
    w1, w2, w3 = 1, 2, 3j
    s, e = w1 + w2 + w3, (w1 * w2 + w2 * w3 + w1 * w3) / 2
    ref = (-s / 2) * e / (3 * w1 * w2 * w3)
    assert abs(p_cubic(0, (w1, w2, w3)) - ref) < 1e-15


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_p_cubic_step_matches_b22(ur, ui):
    om = derive_bases(1 + 0.3j, 1, 2j)
    u = complex(ur, ui)
    d = p_cubic(u + om.omega3, om) - p_cubic(u, om)
    assert abs(cmath.exp(-1j * math.pi * d) - cmath.exp(-1j * math.pi * b22(u, om))) < 1e-12 * abs(
        cmath.exp(-1j * math.pi * d))


# -- modified gamma ------------------------------------------------------------

OM_S = derive_bases(1 + 0.3j, 1, 2j)
OM_U = derive_bases(1, SQ2, 1j)


def test_G_half_sum_is_one_both_forms():
    u = sum(OM_S.omegas) / 2
    assert abs(modified_gamma_product(u, OM_S) - 1) < 1e-12
    assert abs(modified_gamma(u, OM_S) - 1) < 1e-12
    assert abs(modified_gamma(sum(OM_U.omegas) / 2, OM_U) - 1) < 1e-12


def test_G_continuation_matches_product():
    om = derive_bases(1 + 0.4j, 1, 2j)
    u = 0.3 + 0.05j
    assert rel(modified_gamma(u, om), modified_gamma_product(u, om)) < 1e-9


def test_G_product_examples():
    u = 0.2 + 0.1j
    g = modified_gamma_product
    assert rel(g(u + OM_S.omega1, OM_S) / g(u, OM_S), theta(E(u / OM_S.omega2), OM_S.p)) < 1e-10
    refl = (g(u, OM_S) * g(-u, OM_S) * theta(E(-u / OM_S.omega1), OM_S.r)
            * theta(E(-u / OM_S.omega2), OM_S.p) * cmath.exp(-1j * math.pi * b22(u, OM_S)))
    assert abs(refl - 1) < 1e-10


def test_G_product_rejects_unit_circle():
    with pytest.raises(DomainError):
        modified_gamma_product(0.1, OM_U)


def test_G_unit_circle_omega3_step():
    u = 0.2 - 0.3j
    ratio = modified_gamma(u + OM_U.omega3, OM_U) / modified_gamma(u, OM_U)
    assert rel(ratio, cmath.exp(-1j * math.pi * b22(u, OM_U))) < 1e-10


def test_G_pole_and_zero():
    with pytest.raises(PoleError):
        modified_gamma(0.0, OM_U)
    with pytest.raises(PoleError):
        modified_gamma(-OM_U.omega3, OM_U)
    assert abs(modified_gamma(sum(OM_U.omegas), OM_U)) < 1e-12


def _G_checks(om, u):
    G = lambda x: modified_gamma(x, om)  # noqa: E731
    g0 = G(u)
    errs = [
        rel(G(u + om.omega1), g0 * theta(E(u / om.omega2), om.p)),
        rel(G(u + om.omega2), g0 * theta(E(u / om.omega1), om.r)),
        rel(G(u + om.omega3), g0 * cmath.exp(-1j * math.pi * b22(u, om))),
    ]
    refl = (g0 * G(-u) * theta(E(-u / om.omega1), om.r) * theta(E(-u / om.omega2), om.p)
            * cmath.exp(-1j * math.pi * b22(u, om)))
    errs.append(abs(refl - 1))
    return max(errs)


@pytest.mark.parametrize("om", [OM_S, OM_U, derive_bases(1, math.pi / 2, 0.3 + 1.1j)],
                         ids=["strict", "unit-circle", "unit-circle-b"])
@given(st.floats(0.1, 0.5), st.floats(-math.pi, math.pi))
def test_G_difference_and_reflection(om, ur, ui):
    u = ur * cmath.exp(1j * ui)
    assert _G_checks(om, u) < 1e-10


def test_G_reflection_inverse_is_finite_at_pole():
    logv, minf = log_modified_gamma_reflection_inv(np.array([0.0 + 0j]), OM_U)
    assert minf[0] < 1e-12


@given(st.floats(0.8, 1.2), st.floats(0.06, 0.6), st.floats(0.1, 0.5), st.floats(-math.pi, math.pi))
def test_G_continuation_draws(w1r, w1i, ur, ui):
    om = derive_bases(complex(w1r, w1i), 1, 2j)
    u = ur * cmath.exp(1j * ui)
    assert rel(modified_gamma(u, om), modified_gamma_product(u, om)) < 1e-9


# -- double sine ---------------------------------------------------------------

P_PROD = sine_pair(1 + 0.5j, 1)


def test_sine_pair_regimes():
    assert sine_pair(1, SQ2).regime is SineRegime.REAL_RATIO
    assert P_PROD.regime is SineRegime.PRODUCT
    with pytest.raises(DomainError):
        sine_pair(-1, 1)


def test_S_functional_equation_example():
    u = 0.3 + 0.2j
    ratio = double_sine(u + P_PROD.omega1, P_PROD) / double_sine(u, P_PROD)
    assert rel(ratio, 1 / (1 - E(u / P_PROD.omega2))) < 1e-10


def test_S_product_vs_inverse():
    u = 0.4 + 0.3j
    a = double_sine(u, P_PROD, form="product")
    b = double_sine(u, P_PROD, form="inverse")
    assert rel(a, b) < 1e-10


@pytest.mark.parametrize("pair", [P_PROD, sine_pair(1, SQ2), sine_pair(1, 1)], ids=["product", "real", "equal"])
def test_S_asymptotics(pair):
    w1, w2 = pair.omega1, pair.omega2
    up = 10j * (w1 + w2)
    assert abs(double_sine(up, pair) - 1) < 1e-8
    um = -10j * (w1 + w2)
    assert abs(cmath.exp(1j * math.pi * b22(um, (w1, w2))) * double_sine(um, pair) - 1) < 1e-8


def test_S_lattice_errors():
    with pytest.raises(ZeroError):
        double_sine(0, P_PROD)
    with pytest.raises(PoleError):
        double_sine(P_PROD.omega1 + P_PROD.omega2, P_PROD)


def test_S_routes_agree():
    u = 0.35 + 0.15j
    a = double_sine(u, P_PROD, form="product")
    c = double_sine(u, P_PROD, form="integral")
    assert rel(a, c) < 1e-10


def test_S_real_ratio_continuity():
    # approach the real ratio from the product regime; the gap closes linearly
    u = 0.45 + 0.1j
    real = double_sine(u, sine_pair(1, SQ2))
    gaps = [rel(double_sine(u, sine_pair(cmath.exp(1j * eps), SQ2), form="product"), real)
            for eps in (1e-2, 1e-3, 1e-4)]
    assert gaps[2] < 1e-4
    assert 8 < gaps[0] / gaps[1] < 12 and 8 < gaps[1] / gaps[2] < 12


def _S_checks(pair, u):
    S = lambda x: double_sine(x, pair)  # noqa: E731
    w1, w2 = pair.omega1, pair.omega2
    s0 = S(u)
    errs = [
        rel(S(u + w1), s0 / (1 - E(u / w2))),
        rel(S(u + w2), s0 / (1 - E(u / w1))),
        rel(double_sine(u, sine_pair(w2, w1)), s0),
        abs(s0 * S(w1 + w2 - u) * cmath.exp(1j * math.pi * b22(u, (w1, w2))) - 1),
    ]
    return max(errs)


@pytest.mark.parametrize("pair", [P_PROD, sine_pair(1, SQ2)], ids=["product", "real"])
@given(st.floats(-0.4, 0.4), st.floats(-0.4, 0.4))
def test_S_functional_equations(pair, ur, ui):
    u = complex(0.5 + ur, ui)
    assert _S_checks(pair, u) < 1e-10


# -- limit ---------------------------------------------------------------------

def test_limit_check_examples():
    pair = sine_pair(1 + 0.4j, 1)
    assert double_sine_limit_check(0.3 + 0.1j, pair, 40) < 1e-6
    # the exact cubic prefactor is at the rounding floor by t=40, so the
    # ordering is asserted on the literal linear-in-ω₃ prefactor
    r40 = double_sine_limit_check(0.3 + 0.1j, pair, 40, prefactor="display")
    r80 = double_sine_limit_check(0.3 + 0.1j, pair, 80, prefactor="display")
    assert r80 < r40
    half = (pair.omega1 + pair.omega2) / 2
    assert double_sine_limit_check(half, pair, 40) < 1e-9


def test_limit_check_display_form_decays_like_one_over_t():
    pair = sine_pair(1 + 0.4j, 1)
    u = 0.3 + 0.1j
    r = [double_sine_limit_check(u, pair, t, prefactor="display") for t in (20, 40, 80)]
    assert r[2] < r[1] < r[0]
    assert 1.5 < r[0] / r[1] < 2.5


def test_limit_check_domain():
    with pytest.raises(DomainError):
        double_sine_limit_check(0.3, sine_pair(1, SQ2), 40)
    with pytest.raises(DomainError):
        double_sine_limit_check(0.3, P_PROD, -1)


def test_vector_evaluation_matches_scalar():
    us = np.array([0.1 + 0.1j, 0.3 - 0.2j, -0.25 + 0.05j])
    vec = modified_gamma(us, OM_U)
    for u, v in zip(us, vec):
        assert rel(v, modified_gamma(complex(u), OM_U)) < 1e-14


def test_qpoch_inside_G_unaffected_by_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert abs(qpochhammer(0.1, 0.2) - complex(mpmath.qp(0.1, 0.2))) < 1e-14
