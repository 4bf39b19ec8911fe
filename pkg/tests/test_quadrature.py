import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ellbeta import DEFAULT_POLICY, DomainError, PoleError, PoleOnContour, ToleranceNotMet
from ellbeta.quadrature import Line, Segment, UnitCircle, gk15_rule, integrate, integrate2, line_truncation


def test_cauchy_on_circle():
    res = integrate(lambda z: 1 / z, UnitCircle())
    assert abs(res.value - 2j * math.pi) < 1e-12
    assert res.error_estimate >= 0
    assert res.evaluations >= res.panels_used


def test_negative_orientation():
    res = integrate(lambda z: 1 / z, UnitCircle(-1))
    assert abs(res.value + 2j * math.pi) < 1e-12


@pytest.mark.parametrize("k", [-5, -3, -2, -1, 0, 1, 2, 7])
def test_monomials_on_circle(k):
    res = integrate(lambda z: z ** k, UnitCircle())
    ref = 2j * math.pi if k == -1 else 0
    assert abs(res.value - ref) < 1e-12


def test_gaussian_segment():
    res = integrate(lambda u: np.exp(-u * u), Segment(-5, 5), rel_tol=1e-13)
    # the truncated tails carry √π·erfc(5) ~ 2.7e-12, so compare with erf(5)
    assert abs(res.value - math.sqrt(math.pi) * math.erf(5)) < 1e-12


def test_near_pole_is_refined_honestly():
    c = 0.5 + 0.01j
    exact = cmath.log((1 - c) / (-c))
    base = integrate(lambda u: np.exp(u), Segment(0, 1))
    res = integrate(lambda u: 1 / (u - c), Segment(0, 1))
    assert res.panels_used > base.panels_used
    err = abs(res.value - exact)
    assert err <= max(res.error_estimate, 1e-15)
    assert err < 1e-8
    # oversampled reference with a tenfold tighter tolerance
    ref = integrate(lambda u: 1 / (u - c), Segment(0, 1), rel_tol=DEFAULT_POLICY.quad_rel_tol / 10,
                    initial_panels=80)
    assert abs(res.value - ref.value) < 1e-8


def test_reversal_antisymmetry():
    f = lambda z: np.exp(1j * z) / (2 + z * z)  # noqa: E731
    a, b = -0.3 + 0.2j, 1.7 - 0.4j
    assert abs(integrate(f, Segment(a, b)).value + integrate(f, Segment(b, a)).value) < 1e-13


@pytest.mark.parametrize("deg", range(23))
def test_rule_polynomial_exactness(deg):
    nodes, wk, wg = gk15_rule()
    # K15 is exact through degree 22, the embedded G7 through 13
    exact = 2 / (deg + 1) if deg % 2 == 0 else 0.0
    assert abs(wk @ nodes ** deg - exact) < 1e-14
    if deg <= 13:
        assert abs(wg @ nodes ** deg - exact) < 1e-14


@pytest.mark.parametrize("deg", [0, 1, 5, 13])
def test_single_panel_polynomials(deg):
    res = integrate(lambda x: x ** deg, Segment(0, 1), initial_panels=1)
    assert abs(res.value - 1 / (deg + 1)) < 1e-14
    assert res.panels_used == 1


def test_rule_weights():
    nodes, wk, wg = gk15_rule()
    assert abs(wk.sum() - 2) < 1e-15
    assert abs(wg.sum() - 2) < 1e-15
    assert np.all(np.diff(nodes) > 0)


_INTEGRANDS = [
    (lambda x: np.exp(x), Segment(0, 1), math.e - 1),
    (lambda x: np.cos(x), Segment(0, math.pi / 2), 1.0),
    (lambda x: 1 / (1 + x * x), Segment(0, 1), math.pi / 4),
    (lambda x: np.sqrt(x + 1), Segment(0, 3), 14 / 3),
    (lambda x: np.log(1 + x), Segment(0, 1), 2 * math.log(2) - 1),
    (lambda x: x ** 8, Segment(-1, 1), 2 / 9),
    (lambda x: np.exp(-x * x), Segment(0, 3), math.sqrt(math.pi) / 2 * math.erf(3)),
    (lambda x: 1 / (1 + 25 * x * x), Segment(-1, 1), 2 * math.atan(5) / 5),
    (lambda x: np.sin(30 * x), Segment(0, 1), (1 - math.cos(30)) / 30),
    (lambda x: np.exp(1j * 10 * x), Segment(0, 1), (cmath.exp(10j) - 1) / 10j),
    (lambda x: 1 / (x - 0.5 - 0.05j), Segment(0, 1), cmath.log(0.5 - 0.05j) - cmath.log(-0.5 - 0.05j)),
    (lambda x: 1 / np.cosh(x) ** 2, Segment(-4, 4), 2 * math.tanh(4)),
    (lambda x: x * np.exp(-x), Segment(0, 10), 1 - 11 * math.exp(-10)),
    (lambda z: np.exp(z) / z, UnitCircle(), 2j * math.pi),
    (lambda z: 1 / (z - 0.9), UnitCircle(), 2j * math.pi),
    (lambda z: 1 / (z - 1.05), UnitCircle(), 0),
    (lambda z: np.cos(z) / z ** 3, UnitCircle(), -1j * math.pi),
    (lambda x: np.exp(-x * x), Line(1, 8), math.sqrt(math.pi) * math.erf(8)),
    (lambda x: 1 / (1 + x ** 4), Segment(0, 1),
     (math.log((2 + math.sqrt(2)) / (2 - math.sqrt(2))) + 2 * math.atan(1 / (math.sqrt(2) - 1))
      + 2 * math.atan(1 / (math.sqrt(2) + 1)) - math.pi) / (4 * math.sqrt(2)) + math.pi / (4 * math.sqrt(2))),
    (lambda z: np.exp(z * z / 2) * np.cosh(3 * z), Line(1j, 10),
     1j * math.sqrt(2 * math.pi) * math.exp(-4.5) * math.erf(10 / math.sqrt(2))),
]


def test_error_estimates_are_conservative():
    honest = 0
    for f, contour, exact in _INTEGRANDS:
        res = integrate(f, contour, rel_tol=1e-8)
        assert abs(res.value - exact) < 1e-7 * max(1, abs(exact))
        if abs(res.value - exact) <= res.error_estimate + 1e-15:
            honest += 1
    assert honest >= 19


def test_line_contour_direction():
    d = cmath.exp(0.3j)
    res = integrate(lambda z: np.exp(-((z / d) ** 2)), Line(d, 8))
    assert abs(res.value - d * math.sqrt(math.pi)) < 1e-12


def test_tolerance_not_met_carries_estimate():
    with pytest.raises(ToleranceNotMet) as info:
        integrate(lambda x: np.sin(200 * x), Segment(0, 10), max_panels=10, rel_tol=1e-12)
    assert info.value.result.panels_used <= 10


def test_pole_on_contour():
    def f(z):
        if np.any(np.abs(z - 0.5) < 0.05):
            raise PoleError("pole")
        return z

    with pytest.raises(PoleOnContour):
        integrate(f, Segment(0, 1))
    with pytest.raises(PoleOnContour):
        integrate(lambda z: np.where(np.abs(z - 1) < 0.05, np.inf, z), UnitCircle())


def test_contour_validation():
    with pytest.raises(DomainError):
        Segment(1, 1)
    with pytest.raises(DomainError):
        Line(1j, 0)
    with pytest.raises(DomainError):
        UnitCircle(2)


# -- 2-D -------------------------------------------------------------------------

def test_unit_square():
    res = integrate2(lambda u, v: np.ones_like(u), Segment(0, 1))
    assert abs(res.value - 1) < 1e-13


def test_separable():
    g = lambda z: np.exp(-z * z) * np.cos(2 * z) + 0.1j * z  # noqa: E731
    one = integrate(g, Segment(-3, 3), rel_tol=1e-13).value
    res = integrate2(lambda u, v: g(u) * g(v), Segment(-3, 3), rel_tol=1e-12)
    assert abs(res.value - one * one) < 1e-10 * abs(one * one)


def test_separable_on_circle():
    res = integrate2(lambda z, w: 1 / (z * w), UnitCircle())
    assert abs(res.value - (2j * math.pi) ** 2) < 1e-10


def _tensor_gl(f, n):
    x, w = np.polynomial.legendre.leggauss(n)
    x, w = 0.5 * (x + 1), 0.5 * w
    U, V = np.meshgrid(x, x, indexing="ij")
    return np.sum(np.outer(w, w) * f(U, V))


def test_oscillatory_against_refined_grid():
    f = lambda u, v: np.cos(12 * u * v) * np.exp(1j * (3 * u - 2 * v))  # noqa: E731
    coarse, fine = _tensor_gl(f, 40), _tensor_gl(f, 160)
    assert abs(coarse - fine) < 1e-12  # the reference grid is converged
    res = integrate2(f, Segment(0, 1))
    assert abs(res.value - fine) < 1e-8


def test_2d_tolerance_not_met():
    with pytest.raises(ToleranceNotMet):
        integrate2(lambda u, v: np.sin(80 * u * v), Segment(0, 3), max_panels=20, rel_tol=1e-12)


# -- line truncation ---------------------------------------------------------------

def test_line_truncation_example():
    rate = 2 * math.pi * 0.3
    X = line_truncation(rate, tol=1e-8)
    core = math.log(1e8) / rate
    assert abs(core - 9.77) < 0.01
    assert X > core
    assert abs(X - core - math.log(10) / rate) < 1e-12
    # the modelled tail at X is one decade below tol
    assert math.exp(-rate * X) < 1e-8 * 0.11


def test_line_truncation_guards():
    for bad in (0.0, -1.0, float("nan")):
        with pytest.raises(DomainError):
            line_truncation(bad)


@given(st.floats(1e-3, 1e3), st.floats(1e-14, 1e-2))
def test_line_truncation_scaling(rate, tol):
    X1 = line_truncation(rate, tol=tol)
    X2 = line_truncation(2 * rate, tol=tol)
    assert abs(X1 - 2 * X2) < 1e-9 * X1
