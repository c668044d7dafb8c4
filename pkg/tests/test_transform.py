import math

import numpy as np
import pytest
from scipy import integrate

from pegolab.errors import ConfigurationError, PreconditionError
from pegolab.halfline import DEFAULT_GRID, TimeGrid, exponential, indicator, modulate, sampled, zero
from pegolab.transform import (
    FrequencyGrid,
    convolution_theorem_check,
    convolve,
    default_ygrid,
    fourier,
    l1_bound_of_convolution,
    laplace_at,
    laplace_line,
    plancherel_check,
    riemann_lebesgue_profile,
)


def test_default_frequency_grid_is_fft_native():
    yg = default_ygrid(DEFAULT_GRID)
    assert yg.dy == pytest.approx(2 * math.pi / 40.0)
    assert yg.top == pytest.approx(math.pi / 1e-3)
    y = yg.nodes
    np.testing.assert_array_equal(y, -y[::-1])
    assert yg.weights[0] == pytest.approx(yg.dy / 2)


def test_frequency_grid_needs_ten_steps():
    with pytest.raises(ConfigurationError):
        FrequencyGrid(1.0, 5.0)


@pytest.mark.parametrize("a", [1.0, 2.0])
@pytest.mark.parametrize("x", [0.0, 0.5, 1.0])
def test_plancherel_exponential(a, x):
    r = plancherel_check(exponential(a), x)
    exact = 1 / (2 * (a + x))
    assert r.lhs == pytest.approx(exact, rel=1e-3)
    assert r.rhs == pytest.approx(exact, rel=1e-3)
    # the error model covers the observed gap to the analytic value
    assert abs(r.lhs - exact) <= 10 * r.predicted_error


def test_plancherel_indicator_with_truncated_spectrum():
    r = plancherel_check(indicator(0.5, 2.0), 0.5)
    exact = math.exp(-0.5) - math.exp(-2.0)
    assert r.rhs == pytest.approx(exact, rel=1e-6)
    assert abs(r.lhs - exact) / exact <= 1e-3


def test_laplace_line_matches_closed_form_off_grid_points():
    f = indicator(1.0, 2.0)
    spec = laplace_line(f, 1.0)
    k = spec.nodes.half_count
    assert spec.values[k].real == pytest.approx(math.exp(-1) - math.exp(-2), abs=1e-6)
    sel = slice(k - 50, k + 51)
    np.testing.assert_allclose(spec.values[sel], f.laplace(1.0 + 1j * spec.y[sel]), atol=2e-6)


def test_spectrum_tail_bound_reported():
    spec = laplace_line(exponential(1.0), 0.0)
    # C = 1, W = 0: 2 C^2 / y_max
    assert spec.tail_bound == pytest.approx(2 / spec.nodes.top, rel=1e-9)
    assert spec.energy() > 0


def test_sampled_spectrum_uses_heuristic_tail():
    g = DEFAULT_GRID
    s = sampled(g.nodes, np.exp(-g.nodes))
    spec = laplace_line(s, 0.0)
    assert 0 < spec.tail_bound < 1e-2


def test_direct_kernel_matches_fft_path():
    f = modulate(exponential(2.0), 3.0)
    spec = laplace_line(f, 0.5)
    idx = np.array([0, 100, spec.nodes.half_count, spec.nodes.count - 7])
    direct = laplace_at(f, 0.5 + 1j * spec.y[idx])
    np.testing.assert_allclose(direct, spec.values[idx], rtol=1e-9, atol=1e-12)


def test_fourier_normalization():
    assert fourier(exponential(1.0), 1 / (2 * math.pi)) == pytest.approx(0.5 - 0.5j, abs=1e-6)


def test_transform_refuses_non_pego():
    with pytest.raises(PreconditionError):
        laplace_line(sampled([0.0, 1.0], [1e200, 1e200]), 0.0)


def test_convolution_of_boxes_is_a_triangle():
    c = convolve(indicator(0, 1), indicator(0, 1))
    t = np.array([0.5, 1.0, 1.5, 2.5])
    np.testing.assert_allclose(c(t).real, [0.5, 1.0, 0.5, 0.0], atol=2e-3)


def test_convolution_of_exponentials_against_quadrature():
    c = convolve(exponential(1.0), exponential(2.0))
    for t in (0.3, 1.7, 4.0):
        oracle = integrate.quad(lambda s: math.exp(-s) * math.exp(-2 * (t - s)), 0, t)[0]
        assert c(np.array([t]))[0].real == pytest.approx(oracle, abs=1e-5)


@pytest.mark.parametrize("f,g", [(indicator(0, 1), indicator(0, 1)), (exponential(1), exponential(2))])
def test_convolution_theorem(f, g):
    assert convolution_theorem_check(f, g, 1.0) <= 1e-4


def test_convolution_requires_common_grid():
    s = sampled([0.0, 0.5, 1.0], [1.0, 1.0, 1.0])
    with pytest.raises(ConfigurationError):
        convolve(s, exponential(1.0))


def test_convolution_with_zero():
    c = convolve(zero(), exponential(1.0))
    assert not np.any(c.values)


def test_l1_bound_of_convolution():
    value = l1_bound_of_convolution(exponential(1), exponential(2), 0.5)
    exact = 1 / 1.5 / 2.5  # L{e^-t} L{e^-2t} at z = 0.5
    assert value == pytest.approx(exact, rel=1e-4)


def _dense_band_sup(f, x, Y, count=2000001):
    y = np.linspace(Y, 2 * Y, count)
    return float(max(np.abs(f.laplace(x + 1j * y)).max(), np.abs(f.laplace(x - 1j * y)).max()))


def test_riemann_lebesgue_profile_indicator():
    f = indicator(1.0, 2.0)
    Ys = [1e2, 1e3, 1e4]
    prof = riemann_lebesgue_profile(f, 0.0, Ys)
    for Y, s in zip(Ys, prof):
        assert s <= 2 / Y
        dense = _dense_band_sup(f, 0.0, Y)
        assert dense * (1 - 1e-12) <= s <= dense * (1 + 1e-5)
    assert prof[0] > prof[1] > prof[2]


def test_riemann_lebesgue_profile_refuses_above_nyquist_for_samples():
    g = TimeGrid(1e-2, 5.0)
    s = sampled(g.nodes, np.exp(-g.nodes))
    with pytest.raises(Exception):
        riemann_lebesgue_profile(s, 0.0, [1e4], tgrid=g)
