"""numba and numpy kernel paths agree, and the env switch selects numpy."""

import os
import subprocess
import sys

import numpy as np
import pytest

from ellbeta import _kernels

numba_only = pytest.mark.skipif(not _kernels.NUMBA_AVAILABLE, reason="numba not importable")


def _points(rng, n=300, rmin=0.05, rmax=1.6):
    r = rng.uniform(rmin, rmax, n)
    return r * np.exp(1j * rng.uniform(-np.pi, np.pi, n))


@numba_only
@pytest.mark.parametrize("q", [0.3, 0.6 + 0.2j, -0.9, 0.0])
def test_qpoch_backends_agree(rng, q):
    a = _points(rng)
    lv1, m1, n1 = _kernels.log_qpoch_numpy(a, q, 1e-15, 10**6)
    lv2, m2, n2 = _kernels.log_qpoch_numba(a, q, 1e-15, 10**6)
    assert (n1 > 0).all() and np.array_equal(n1, n2)
    assert np.max(np.abs(np.exp(lv1 - lv2) - 1)) < 1e-13
    assert np.allclose(m1, m2, rtol=1e-12)


@pytest.mark.parametrize("shape", [(), (7,), (5, 6), (2, 3, 4)])
def test_numpy_kernels_keep_shape(rng, shape):
    z = _points(rng, n=int(np.prod(shape))).reshape(shape)
    flat = _kernels.log_egamma_numpy(z.ravel(), 0.4, 0.3, 1e-15, 10**6)
    nd = _kernels.log_egamma_numpy(z, 0.4, 0.3, 1e-15, 10**6)
    for x, y in zip(flat, nd):
        assert y.shape == shape and np.array_equal(x, y.ravel())
    flat = _kernels.log_qpoch_numpy(z.ravel(), 0.7, 1e-15, 10**6)
    nd = _kernels.log_qpoch_numpy(z, 0.7, 1e-15, 10**6)
    for x, y in zip(flat, nd):
        assert y.shape == shape and np.array_equal(x, y.ravel())


@numba_only
@pytest.mark.parametrize("q,p", [(0.3, 0.2), (0.5 + 0.3j, 0.2 - 0.1j), (0.9, 0.05), (0.3, 0.0)])
def test_egamma_backends_agree(rng, q, p):
    z = _points(rng)
    a = _kernels.log_egamma_numpy(z, q, p, 1e-15, 10**6)
    b = _kernels.log_egamma_numba(z, q, p, 1e-15, 10**6)
    assert a[3].all() and b[3].all()
    assert np.max(np.abs(np.exp(a[0] - b[0]) - 1)) < 1e-13


def test_egamma_series_matches_double_product(rng, monkeypatch):
    z = _points(rng, rmin=0.2, rmax=0.95)
    q, p = 0.4 + 0.1j, 0.3
    with_series = _kernels.log_egamma_numpy(z, q, p, 1e-15, 10**6)[0]
    monkeypatch.setattr(_kernels, "_SERIES_RHO", -1.0)
    product_only = _kernels.log_egamma_numpy(z, q, p, 1e-15, 10**6)[0]
    assert np.max(np.abs(np.exp(with_series - product_only) - 1)) < 1e-13


def test_exact_zero_factor_gives_minus_inf():
    lv, mn, _ = _kernels.log_qpoch_numpy(np.array([1.0 + 0j, 0.25 + 0j]), 0.5, 1e-15, 10**6)
    assert lv[0].real == -np.inf and mn[0] == 0
    assert np.isfinite(lv[1])


def test_max_terms_exhaustion_is_reported():
    for kernel in (_kernels.log_qpoch_numpy, _kernels.log_qpoch):
        _, _, nterms = kernel(np.array([0.5 + 0j]), 0.999, 1e-15, 10)
        assert nterms[0] == -1


def test_expi2pi_reduces_real_part():
    x = np.array([1e8 + 0.25 + 0.1j])
    assert abs(_kernels.expi2pi(x)[0] - np.exp(2j * np.pi * (0.25 + 0.1j))) < 1e-9


def test_env_switch_selects_numpy():
    env = dict(os.environ, ELLBETA_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "import ellbeta; print(ellbeta.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"
