import os

import numpy as np
import pytest

from pegolab import _kernels_py, kernels

try:
    from pegolab import _kernels
except ImportError:
    _kernels = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
BACKENDS.append(pytest.param(_kernels, id="cython", marks=pytest.mark.skipif(_kernels is None, reason="not built")))


def test_backend_selected():
    assert kernels.BACKEND in ("cython", "python")
    if os.environ.get("PEGO_LAB_PURE"):
        assert kernels.BACKEND == "python"
    elif _kernels is not None:
        assert kernels.BACKEND == "cython"


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.mark.parametrize("impl", BACKENDS)
def test_direct_laplace_matches_naive_sum(impl, rng):
    n, dt = 3000, 2e-3
    h = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = np.array([-700.0, -3.1, 0.0, 2.5, 1500.0])
    t = (np.arange(n) + 0.5) * dt
    naive = dt * np.exp(-1j * np.outer(y, t)) @ h
    np.testing.assert_allclose(impl.direct_laplace(h, dt, y), naive, rtol=1e-9, atol=1e-9)


def _naive_shift(h, dt, k, q, start):
    ext = np.concatenate([h, np.zeros(k, complex)])
    prev = np.concatenate([np.zeros(k, complex), h])
    j0 = k if start else 0
    return dt * np.sum(np.abs(ext[j0:] - q * prev[j0:]) ** 2)


@pytest.mark.parametrize("impl", BACKENDS)
@pytest.mark.parametrize("start", [False, True])
def test_shift_moduli_match_naive(impl, rng, start):
    n, dt = 500, 1e-2
    h = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    ks = np.array([1, 3, 17, 499, 600], dtype=np.int64)
    q = np.exp(-0.3 * ks * dt).astype(complex)
    got = impl.shift_moduli_sq(h, dt, ks, q, start)
    want = [_naive_shift(h, dt, int(k), qq, start) for k, qq in zip(ks, q)]
    np.testing.assert_allclose(got, want, rtol=1e-10)


@pytest.mark.parametrize("impl", BACKENDS)
def test_pairwise_distances(impl, rng):
    rows = rng.standard_normal((5, 200)) + 1j * rng.standard_normal((5, 200))
    got = impl.pairwise_sq_dist(rows, 0.1)
    want = 0.1 * np.sum(np.abs(rows[:, None, :] - rows[None, :, :]) ** 2, axis=2)
    np.testing.assert_allclose(got, want, rtol=1e-10, atol=1e-12)
    np.testing.assert_array_equal(got, got.T)


@pytest.mark.skipif(_kernels is None, reason="extension not built")
def test_backends_agree_on_long_input(rng):
    n, dt = 40000, 1e-3
    h = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = np.linspace(-3000, 3000, 64)
    np.testing.assert_allclose(_kernels.direct_laplace(h, dt, y), _kernels_py.direct_laplace(h, dt, y),
                               rtol=1e-8, atol=1e-8)
