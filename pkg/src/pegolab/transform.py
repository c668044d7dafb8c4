"""Laplace transform along vertical lines, half-line convolution, and the
numerical identity checks built on them (Plancherel, Riemann-Lebesgue,
convolution theorem).

All spectra are midpoint sums over the time grid,

    L{f}(x + iy) ~= dt * sum_j f(t_j) exp(-(x + iy) t_j),

evaluated by FFT when the frequency grid is the natural one for the time grid
(``dy = 2 pi / (n dt)``) and by direct summation otherwise. The two are the
same sum, so switching paths never changes semantics.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.signal import fftconvolve

from . import kernels
from .errors import ConfigurationError, InvariantViolation, PegoRejected, PreconditionError
from .halfline import (
    DEFAULT_GRID,
    HalfLineFunction,
    Sampled,
    TimeGrid,
    check_order,
    verify_pego,
    weighted_l2_error,
    weighted_l2_norm_sq,
    weighted_samples,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class FrequencyGrid:
    """Symmetric nodes ``k dy`` for ``k = -K..K``, ``K = floor(y_max / dy)``."""

    dy: float
    y_max: float

    def __post_init__(self):
        if not (self.dy > 0 and math.isfinite(self.dy)):
            raise ConfigurationError(f"dy must be positive, got {self.dy!r}")
        if not (self.y_max >= 10 * self.dy * (1 - 1e-12)):
            raise ConfigurationError(f"y_max must be at least 10*dy, got y_max={self.y_max!r}, dy={self.dy!r}")

    @property
    def half_count(self) -> int:
        return int(math.floor(self.y_max / self.dy + 1e-9))

    @property
    def count(self) -> int:
        return 2 * self.half_count + 1

    @property
    def top(self) -> float:
        """Largest node."""
        return self.half_count * self.dy

    @cached_property
    def nodes(self) -> np.ndarray:
        nodes = np.arange(-self.half_count, self.half_count + 1) * self.dy
        nodes.setflags(write=False)
        return nodes

    @cached_property
    def weights(self) -> np.ndarray:
        """Trapezoid weights on the nodes."""
        w = np.full(self.count, self.dy)
        w[0] = w[-1] = 0.5 * self.dy
        w.setflags(write=False)
        return w

    def to_dict(self):
        return {"dy": self.dy, "y_max": self.y_max}


def default_ygrid(tgrid: TimeGrid = DEFAULT_GRID) -> FrequencyGrid:
    """The FFT-native grid: ``dy = 2 pi / (n dt)`` up to the Nyquist frequency ``pi / dt``."""
    dy = TWO_PI / (tgrid.n * tgrid.dt)
    return FrequencyGrid(dy, (tgrid.n // 2) * dy)


def _fft_compatible(tgrid: TimeGrid, ygrid: FrequencyGrid) -> bool:
    native = TWO_PI / (tgrid.n * tgrid.dt)
    return abs(ygrid.dy - native) <= 1e-12 * native and ygrid.half_count <= tgrid.n // 2


def spectrum_of_samples(h: np.ndarray, tgrid: TimeGrid, ygrid: FrequencyGrid) -> np.ndarray:
    """Midpoint transform of already-weighted samples ``h`` at the nodes of ``ygrid``."""
    h = np.asarray(h, dtype=complex)
    if h.shape[-1] != tgrid.n:
        raise ConfigurationError(f"sample count {h.shape[-1]} does not match the time grid ({tgrid.n} nodes)")
    if _fft_compatible(tgrid, ygrid):
        n = tgrid.n
        k = np.arange(-ygrid.half_count, ygrid.half_count + 1)
        spectrum = np.fft.fft(h, axis=-1)
        # the midpoint offset t_j = (j + 1/2) dt contributes exp(-i pi k / n)
        return tgrid.dt * np.exp(-1j * math.pi * k / n) * spectrum[..., k % n]
    if h.ndim == 1:
        return kernels.direct_laplace(h, tgrid.dt, ygrid.nodes)
    return np.array([kernels.direct_laplace(row, tgrid.dt, ygrid.nodes) for row in h])


def spectral_tail_bound(f: HalfLineFunction, x: float, ygrid: FrequencyGrid, values: np.ndarray | None = None) -> float:
    """Bound on ``int_{|y| > y_max} |L{f}(x+iy)|^2 dy``.

    Uses the closed-form ``C / (|y| - W)`` decay when the kind has one.
    Otherwise falls back to ``2 * s**2 * y_max`` with ``s`` the largest
    modulus over the outer half band, which is a heuristic, not a bound.
    """
    top = ygrid.top
    decay = f.decay_bound(x)
    if decay is not None:
        C, W = decay
        if C == 0:
            return 0.0
        if top <= W:
            return math.inf
        return 2.0 * C * C / (top - W)
    if values is None:
        return math.nan
    band = np.abs(ygrid.nodes) >= 0.5 * top
    s = float(np.max(np.abs(values[band]))) if np.any(band) else 0.0
    return 2.0 * s * s * top


@dataclass(frozen=True, eq=False)
class SpectrumSlice:
    order: float
    nodes: FrequencyGrid
    values: np.ndarray
    tail_bound: float

    def __post_init__(self):
        if len(self.values) != self.nodes.count:
            raise ConfigurationError("spectrum length does not match its frequency grid")
        if not self.tail_bound >= 0:
            raise ConfigurationError(f"tail bound must be >= 0, got {self.tail_bound!r}")

    @property
    def y(self) -> np.ndarray:
        return self.nodes.nodes

    def energy(self) -> float:
        """``int |L|^2 dy`` over the grid (no tail, no 1/2pi)."""
        return float(np.sum(self.nodes.weights * np.abs(self.values) ** 2))

    def csv_rows(self):
        for y, v in zip(self.y, self.values):
            yield (float(y), float(v.real), float(v.imag), float(abs(v)))

    def to_dict(self):
        return {
            "order": self.order,
            "grid": self.nodes.to_dict(),
            "tail_bound": self.tail_bound,
            "y": self.y.tolist(),
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
        }


def _require_pego(f, x, tgrid):
    try:
        return verify_pego(f, x, tgrid)
    except PegoRejected as exc:
        raise PreconditionError(str(exc)) from exc


def laplace_line(
    f: HalfLineFunction,
    x: float,
    tgrid: TimeGrid = DEFAULT_GRID,
    ygrid: FrequencyGrid | None = None,
) -> SpectrumSlice:
    """Transform of ``f`` on the vertical line ``Re z = x``."""
    x = check_order(x)
    _require_pego(f, x, tgrid)
    ygrid = default_ygrid(tgrid) if ygrid is None else ygrid
    values = spectrum_of_samples(weighted_samples(f, x, tgrid), tgrid, ygrid)
    return SpectrumSlice(x, ygrid, values, spectral_tail_bound(f, x, ygrid, values))


def laplace_at(f: HalfLineFunction, z, tgrid: TimeGrid = DEFAULT_GRID) -> np.ndarray:
    """Midpoint transform at arbitrary points ``z`` sharing one real part."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    xs = np.unique(z.real)
    if xs.size != 1:
        raise ConfigurationError("laplace_at expects points on a single vertical line")
    h = weighted_samples(f, check_order(xs[0]), tgrid)
    return kernels.direct_laplace(h, tgrid.dt, z.imag)


def fourier(f: HalfLineFunction, y: float, tgrid: TimeGrid = DEFAULT_GRID) -> complex:
    """``f^(y) = L{f}(2 pi i y)``."""
    _require_pego(f, 0.0, tgrid)
    return complex(laplace_at(f, [TWO_PI * y * 1j], tgrid)[0])


@dataclass(frozen=True)
class PlancherelResult:
    lhs: float
    rhs: float
    rel_err: float
    tail: float
    predicted_error: float

    def to_dict(self):
        return dict(self.__dict__)


def plancherel_check(
    f: HalfLineFunction,
    x: float,
    tgrid: TimeGrid = DEFAULT_GRID,
    ygrid: FrequencyGrid | None = None,
) -> PlancherelResult:
    """Compare ``(1/2pi) int |L{f}(x+iy)|^2 dy`` with ``int exp(-2xt)|f|^2 dt``.

    ``lhs`` is the grid quadrature; ``tail`` is the reported mass beyond
    ``y_max`` divided by ``2 pi``. ``predicted_error`` is the error model for
    ``|lhs - exact|``: ``tail`` plus the time-domain error of the right side.
    """
    spec = laplace_line(f, x, tgrid, ygrid)
    lhs = spec.energy() / TWO_PI
    rhs = weighted_l2_norm_sq(f, x, tgrid)
    tail = spec.tail_bound / TWO_PI
    predicted = tail + weighted_l2_error(f, x, tgrid)
    return PlancherelResult(lhs, rhs, abs(lhs - rhs) / max(rhs, 1e-300), tail, predicted)


def _band_points(Y: float, count: int) -> np.ndarray:
    return np.linspace(Y, 2 * Y, count)


def _peak_candidates(mags: np.ndarray, count: int) -> np.ndarray:
    """Indices of the ``count`` largest local maxima (endpoints included)."""
    padded = np.concatenate([[-np.inf], mags, [-np.inf]])
    peaks = np.nonzero((padded[1:-1] >= padded[:-2]) & (padded[1:-1] >= padded[2:]))[0]
    return peaks[np.argsort(-mags[peaks], kind="stable")[:count]]


def riemann_lebesgue_profile(
    f: HalfLineFunction,
    x: float,
    y_checkpoints,
    tgrid: TimeGrid = DEFAULT_GRID,
    samples: int = 16384,
    polish: int = 16,
) -> list[float]:
    """Suprema of ``|L{f}(x +- iy)|`` over the bands ``Y <= |y| <= 2Y``.

    Closed-form kinds use their exact transform, sampled on the band and then
    polished around the ``polish`` highest local maxima (an oscillating
    transform can put its best sample in a neighbouring period). Sampled kinds use the midpoint sum, which
    is periodic in ``y``; bands past the grid's Nyquist frequency are refused.
    """
    x = check_order(x)
    _require_pego(f, x, tgrid)
    checkpoints = [float(Y) for Y in y_checkpoints]
    if any(Y <= 0 for Y in checkpoints) or any(b <= a for a, b in zip(checkpoints, checkpoints[1:])):
        raise PreconditionError("checkpoints must be positive and strictly increasing")
    closed = f.has_closed_form
    if not closed and 2 * checkpoints[-1] > math.pi / tgrid.dt:
        raise PreconditionError(
            f"band up to {2 * checkpoints[-1]} exceeds the Nyquist frequency {math.pi / tgrid.dt} of the sample grid"
        )

    def modulus(y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if closed:
            return np.maximum(np.abs(f.laplace(x + 1j * y)), np.abs(f.laplace(x - 1j * y)))
        h = weighted_samples(f, x, tgrid)
        yy = np.concatenate([y, -y])
        v = np.abs(kernels.direct_laplace(h, tgrid.dt, yy))
        return np.maximum(v[: y.size], v[y.size:])

    profile = []
    for Y in checkpoints:
        ys = _band_points(Y, samples)
        mags = modulus(ys)
        best = float(mags.max())
        if closed:
            step = ys[1] - ys[0]
            for i in _peak_candidates(mags, polish):
                lo, hi = max(Y, ys[i] - step), min(2 * Y, ys[i] + step)
                res = minimize_scalar(lambda y: -float(modulus(y)[0]), bounds=(lo, hi), method="bounded",
                                      options={"xatol": 1e-10 * Y})
                best = max(best, -float(res.fun))
        profile.append(best)
    return profile


def _grid_samples(f: HalfLineFunction, tgrid: TimeGrid) -> np.ndarray:
    if isinstance(f, Sampled) and not f.on_grid(tgrid):
        raise ConfigurationError("sampled function is not defined on the convolution grid")
    return weighted_samples(f, 0.0, tgrid)


def convolve(f: HalfLineFunction, g: HalfLineFunction, tgrid: TimeGrid = DEFAULT_GRID) -> Sampled:
    """``(f * g)(t) = int_0^t f(s) g(t - s) ds`` sampled at the grid midpoints.

    The discrete convolution of midpoint samples lands on the cell boundaries
    ``(m + 1) dt``; averaging neighbours moves it back to the midpoints.
    Output is truncated at the grid end.
    """
    a = _grid_samples(f, tgrid)
    b = _grid_samples(g, tgrid)
    n = tgrid.n
    if not np.any(a) or not np.any(b):
        return Sampled(tgrid.nodes, np.zeros(n, dtype=complex))
    c = fftconvolve(a, b)[:n] * tgrid.dt
    mid = 0.5 * (c + np.concatenate([[0.0], c[:-1]]))
    return Sampled(tgrid.nodes, mid)


def convolution_theorem_check(
    f: HalfLineFunction,
    g: HalfLineFunction,
    x: float,
    tgrid: TimeGrid = DEFAULT_GRID,
    ygrid: FrequencyGrid | None = None,
) -> float:
    """``max_k |L{f*g} - L{f} L{g}|`` over the frequency nodes."""
    x = check_order(x)
    ygrid = default_ygrid(tgrid) if ygrid is None else ygrid
    lf = laplace_line(f, x, tgrid, ygrid).values
    lg = laplace_line(g, x, tgrid, ygrid).values
    lfg = laplace_line(convolve(f, g, tgrid), x, tgrid, ygrid).values
    return float(np.max(np.abs(lfg - lf * lg)))


def l1_bound_of_convolution(
    f: HalfLineFunction,
    g: HalfLineFunction,
    x: float,
    tgrid: TimeGrid = DEFAULT_GRID,
) -> float:
    """Truncated ``int exp(-xt) |f*g(t)| dt``, checked against ``||f_x||_1 ||g_x||_1``."""
    x = check_order(x)
    bound = _require_pego(f, x, tgrid).l1 * _require_pego(g, x, tgrid).l1
    conv = weighted_samples(convolve(f, g, tgrid), x, tgrid)
    value = tgrid.dt * float(np.sum(np.abs(conv)))
    # half-cell shift of the averaged convolution costs at most exp(x dt / 2)
    tol = bound * math.expm1(0.5 * x * tgrid.dt) + 1e-12 * max(bound, 1.0)
    if value > bound + tol:
        raise InvariantViolation(f"||(f*g)_x||_1 = {value!r} exceeds ||f_x||_1 ||g_x||_1 = {bound!r}")
    return value
