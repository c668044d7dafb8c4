import math

import mpmath
import pytest

from pegolab.halfline import PegoFamily, TimeGrid

# coarse grid for tests that only need qualitative behaviour
SMALL_GRID = TimeGrid(dt=4e-3, t_max=20.0)


def family(members, x=0.0, grid=None):
    return PegoFamily(tuple(members), x, grid or TimeGrid())


def quad_weighted_sq(fn, x, a=0.0, b=mpmath.inf, points=()):
    """``int_a^b exp(-2xt) |fn(t)|^2 dt`` by mpmath quadrature (oracle)."""
    nodes = [a, *points, b]
    return float(mpmath.quad(lambda t: mpmath.e ** (-2 * x * t) * abs(fn(t)) ** 2, nodes))


def quad_laplace(fn, z, a, b, points=()):
    """``int_a^b exp(-zt) fn(t) dt`` by mpmath quadrature (oracle)."""
    nodes = [a, *points, b]
    return complex(mpmath.quad(lambda t: mpmath.e ** (-z * t) * fn(t), nodes))


@pytest.fixture
def small_grid():
    return SMALL_GRID


def close(a, b, tol):
    return math.isclose(a, b, rel_tol=0, abs_tol=tol)
