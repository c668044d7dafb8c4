"""Functions on the half-line, time grids, weighted norms and the order weighting.

Every function is zero-extended to negative arguments. Closed-form kinds know
their exact Laplace transform, a ``C / (|y| - W)`` decay bound for it, and an
upper bound on their weighted tail mass; the numerical routines use those for
truncation accounting only, never as a replacement for the quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, EvaluationError, PegoRejected

LABELS = ("compact", "non-compact", "unknown")


def check_order(x) -> float:
    x = float(x)
    if not math.isfinite(x) or x < 0:
        raise ConfigurationError(f"order x must be a finite real >= 0, got {x!r}")
    return x


@dataclass(frozen=True)
class TimeGrid:
    """Uniform midpoint grid on ``[0, n*dt]`` with nodes ``(j + 1/2) dt``."""

    dt: float = 1e-3
    t_max: float = 40.0

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigurationError(f"dt must be positive, got {self.dt!r}")
        if not (self.t_max > self.dt and math.isfinite(self.t_max)):
            raise ConfigurationError(f"t_max must exceed dt, got t_max={self.t_max!r}, dt={self.dt!r}")

    @property
    def n(self) -> int:
        # guard against t_max/dt landing a hair above an integer
        return int(math.ceil(self.t_max / self.dt - 1e-9))

    @property
    def end(self) -> float:
        return self.n * self.dt

    @cached_property
    def nodes(self) -> np.ndarray:
        nodes = (np.arange(self.n) + 0.5) * self.dt
        nodes.setflags(write=False)
        return nodes

    def coarsened(self) -> "TimeGrid":
        return TimeGrid(2 * self.dt, self.t_max)

    def index_of(self, T: float) -> int:
        """Number of whole cells below ``T`` (``T`` rounded to the nearest boundary when within 1e-9 cells)."""
        u = T / self.dt
        r = round(u)
        if abs(u - r) < 1e-9:
            return int(r)
        return int(math.floor(u))

    def to_dict(self):
        return {"dt": self.dt, "t_max": self.t_max}


DEFAULT_GRID = TimeGrid()


def _asarray_t(t):
    return np.asarray(t, dtype=float)


class HalfLineFunction:
    """Base class. Subclasses implement ``_eval`` on ``t >= 0``."""

    kind = "abstract"

    def __call__(self, t):
        t = _asarray_t(t)
        out = np.zeros(t.shape, dtype=complex)
        mask = t >= 0
        if np.any(mask):
            out[mask] = self._eval(t[mask])
        if out.ndim == 0:
            return complex(out)
        return out

    def _eval(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    @property
    def has_closed_form(self) -> bool:
        return True

    def laplace(self, z):
        """Exact transform at complex ``z`` (array or scalar)."""
        raise NotImplementedError(f"{self.kind} has no closed-form transform")

    def decay_bound(self, x: float):
        """``(C, W)`` with ``|L{f}(x+iy)| <= C / (|y| - W)`` for ``|y| > W``, or None."""
        return None

    def tail_mass_bound(self, x: float, T: float) -> float:
        """Upper bound on ``int_T^inf exp(-2xt) |f(t)|^2 dt``."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError


def _z(z):
    return np.asarray(z, dtype=complex)


def _ret(v):
    return complex(v) if np.ndim(v) == 0 else v


@dataclass(frozen=True, eq=True)
class Exponential(HalfLineFunction):
    a: float
    kind = "exponential"

    def __post_init__(self):
        if not (self.a > 0):
            raise ConfigurationError(f"exponential decay rate must be > 0, got {self.a!r}")

    def _eval(self, t):
        return np.exp(-self.a * t).astype(complex)

    def laplace(self, z):
        return _ret(1.0 / (_z(z) + self.a))

    def decay_bound(self, x):
        return (1.0, 0.0)

    def tail_mass_bound(self, x, T):
        r = 2.0 * (self.a + x)
        return math.exp(-r * max(T, 0.0)) / r

    def to_dict(self):
        return {"kind": "exponential", "a": self.a}


@dataclass(frozen=True, eq=True)
class Indicator(HalfLineFunction):
    a: float
    b: float
    kind = "indicator"

    def __post_init__(self):
        if not (0 <= self.a < self.b):
            raise ConfigurationError(f"indicator needs 0 <= a < b, got a={self.a!r}, b={self.b!r}")

    def _eval(self, t):
        return ((t > self.a) & (t < self.b)).astype(complex)

    def laplace(self, z):
        z = _z(z)
        length = self.b - self.a
        with np.errstate(invalid="ignore", divide="ignore"):
            v = np.exp(-z * self.a) * (-np.expm1(-z * length)) / z
        v = np.where(z == 0, length, v)
        return _ret(v)

    def decay_bound(self, x):
        return (math.exp(-x * self.a) + math.exp(-x * self.b), 0.0)

    def tail_mass_bound(self, x, T):
        lo = max(T, self.a)
        if lo >= self.b:
            return 0.0
        if x == 0:
            return self.b - lo
        return (math.exp(-2 * x * lo) - math.exp(-2 * x * self.b)) / (2 * x)

    def to_dict(self):
        return {"kind": "indicator", "a": self.a, "b": self.b}


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(48)


@dataclass(frozen=True, eq=True)
class PolynomialBump(HalfLineFunction):
    """``c * (s (delta - s))**2`` on ``(0, delta)``; ``c = 30 / delta**5`` gives unit mass."""

    delta: float
    c: float = float("nan")
    kind = "polynomial-bump"

    def __post_init__(self):
        if not (self.delta > 0):
            raise ConfigurationError(f"bump width must be > 0, got {self.delta!r}")
        if math.isnan(self.c):
            object.__setattr__(self, "c", 30.0 / self.delta ** 5)

    @property
    def peak(self) -> float:
        return self.c * self.delta ** 4 / 16.0

    def _eval(self, t):
        d = self.delta
        inside = (t > 0) & (t < d)
        return np.where(inside, self.c * (t * (d - t)) ** 2, 0.0).astype(complex)

    def laplace(self, z):
        z = _z(z)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        d, c = self.delta, self.c
        out = np.empty(z.shape, dtype=complex)
        small = np.abs(z) * d < 2.0
        if np.any(small):
            s = 0.5 * d * (_GL_NODES + 1.0)
            w = 0.5 * d * _GL_WEIGHTS
            p = c * (s * (d - s)) ** 2
            out[small] = np.exp(-np.outer(z[small], s)) @ (w * p)
        big = ~small
        if np.any(big):
            zb = z[big]
            e = np.exp(-zb * d)
            # repeated integration by parts; p, p' vanish at both ends
            d0 = (2 * c * d ** 2, -12 * c * d, 24 * c)
            dd = (2 * c * d ** 2, 12 * c * d, 24 * c)
            acc = np.zeros(zb.shape, dtype=complex)
            for k in range(3):
                acc += (d0[k] - dd[k] * e) / zb ** (k + 3)
            out[big] = acc
        return complex(out[0]) if scalar else out

    def decay_bound(self, x):
        mass = self.c * self.delta ** 5 / 30.0
        return (2.0 * self.peak + x * mass, 0.0)

    def tail_mass_bound(self, x, T):
        if T >= self.delta:
            return 0.0
        return self.peak ** 2 * (self.delta - max(T, 0.0))

    def to_dict(self):
        return {"kind": "polynomial-bump", "delta": self.delta, "c": self.c}


@dataclass(frozen=True, eq=False)
class Sampled(HalfLineFunction):
    """Piecewise-linear interpolant of samples; zero beyond the last node."""

    t: np.ndarray
    values: np.ndarray
    kind = "sampled"

    def __post_init__(self):
        t = np.array(self.t, dtype=float)
        v = np.array(self.values, dtype=complex)
        if t.ndim != 1 or t.shape != v.shape or t.size == 0:
            raise ConfigurationError("sampled function needs matching non-empty 1-d node and value arrays")
        if np.any(np.diff(t) <= 0) or t[0] < 0:
            raise ConfigurationError("sample nodes must be increasing and non-negative")
        t.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", v)

    @property
    def has_closed_form(self):
        return False

    def _eval(self, t):
        re = np.interp(t, self.t, self.values.real, left=self.values[0].real, right=0.0)
        im = np.interp(t, self.t, self.values.imag, left=self.values[0].imag, right=0.0)
        out = re + 1j * im
        out[t > self.t[-1]] = 0.0
        return out

    def tail_mass_bound(self, x, T):
        if T >= self.t[-1]:
            return 0.0
        keep = self.t >= T
        tt = self.t[keep]
        vals = np.exp(-2 * x * tt) * np.abs(self.values[keep]) ** 2
        if tt.size == 1:
            return float(vals[0] * (self.t[-1] - T))
        step = np.diff(tt).max()
        return float(vals.sum() * step)

    def on_grid(self, grid: TimeGrid) -> bool:
        return self.t.size == grid.n and np.allclose(self.t, grid.nodes, rtol=0, atol=1e-9 * grid.dt)

    def to_dict(self):
        return {
            "kind": "sampled",
            "t": self.t.tolist(),
            "re": self.values.real.tolist(),
            "im": self.values.imag.tolist(),
        }


@dataclass(frozen=True, eq=False)
class Translate(HalfLineFunction):
    base: HalfLineFunction
    s: float
    kind = "translate"

    def __post_init__(self):
        if not (self.s >= 0):
            raise ConfigurationError(f"translation must be >= 0, got {self.s!r}")

    def _eval(self, t):
        return self.base(t - self.s)

    @property
    def has_closed_form(self):
        return self.base.has_closed_form

    def laplace(self, z):
        z = _z(z)
        return _ret(np.exp(-z * self.s) * self.base.laplace(z))

    def decay_bound(self, x):
        b = self.base.decay_bound(x)
        return None if b is None else (b[0] * math.exp(-x * self.s), b[1])

    def tail_mass_bound(self, x, T):
        return math.exp(-2 * x * self.s) * self.base.tail_mass_bound(x, max(T - self.s, 0.0))

    def to_dict(self):
        return {"kind": "translate", "s": self.s, "base": self.base.to_dict()}


@dataclass(frozen=True, eq=False)
class Modulate(HalfLineFunction):
    base: HalfLineFunction
    omega: float
    kind = "modulate"

    def _eval(self, t):
        return np.exp(1j * self.omega * t) * self.base(t)

    @property
    def has_closed_form(self):
        return self.base.has_closed_form

    def laplace(self, z):
        return _ret(self.base.laplace(_z(z) - 1j * self.omega))

    def decay_bound(self, x):
        b = self.base.decay_bound(x)
        return None if b is None else (b[0], b[1] + abs(self.omega))

    def tail_mass_bound(self, x, T):
        return self.base.tail_mass_bound(x, T)

    def to_dict(self):
        return {"kind": "modulate", "omega": self.omega, "base": self.base.to_dict()}


@dataclass(frozen=True, eq=False)
class Damp(HalfLineFunction):
    """``exp(-rate t) * base(t)``; the result of :func:`weight`."""

    base: HalfLineFunction
    rate: float
    kind = "damp"

    def _eval(self, t):
        return np.exp(-self.rate * t) * self.base(t)

    @property
    def has_closed_form(self):
        return self.base.has_closed_form

    def laplace(self, z):
        return _ret(self.base.laplace(_z(z) + self.rate))

    def decay_bound(self, x):
        return self.base.decay_bound(x + self.rate)

    def tail_mass_bound(self, x, T):
        return self.base.tail_mass_bound(x + self.rate, T)

    def to_dict(self):
        return {"kind": "damp", "rate": self.rate, "base": self.base.to_dict()}


@dataclass(frozen=True, eq=False)
class Scale(HalfLineFunction):
    base: HalfLineFunction
    c: complex
    kind = "scale"

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))

    def _eval(self, t):
        return self.c * self.base(t)

    @property
    def has_closed_form(self):
        return self.base.has_closed_form

    def laplace(self, z):
        return _ret(self.c * self.base.laplace(_z(z)))

    def decay_bound(self, x):
        b = self.base.decay_bound(x)
        return None if b is None else (abs(self.c) * b[0], b[1])

    def tail_mass_bound(self, x, T):
        return abs(self.c) ** 2 * self.base.tail_mass_bound(x, T)

    def to_dict(self):
        c = self.c.real if self.c.imag == 0 else [self.c.real, self.c.imag]
        return {"kind": "scale", "c": c, "base": self.base.to_dict()}


@dataclass(frozen=True, eq=False)
class Sum(HalfLineFunction):
    terms: tuple = field(default_factory=tuple)
    kind = "sum"

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))

    def _eval(self, t):
        out = np.zeros(t.shape, dtype=complex)
        for term in self.terms:
            out += term(t)
        return out

    @property
    def has_closed_form(self):
        return all(term.has_closed_form for term in self.terms)

    def laplace(self, z):
        z = _z(z)
        out = np.zeros(z.shape, dtype=complex)
        for term in self.terms:
            out = out + term.laplace(z)
        return _ret(out)

    def decay_bound(self, x):
        bounds = [term.decay_bound(x) for term in self.terms]
        if any(b is None for b in bounds):
            return None
        return (sum(b[0] for b in bounds), max((b[1] for b in bounds), default=0.0))

    def tail_mass_bound(self, x, T):
        # Minkowski: ||sum f_i|| <= sum ||f_i||
        return sum(math.sqrt(term.tail_mass_bound(x, T)) for term in self.terms) ** 2

    def to_dict(self):
        return {"kind": "sum", "terms": [term.to_dict() for term in self.terms]}


def zero() -> Sum:
    return Sum(())


def exponential(a: float) -> Exponential:
    return Exponential(float(a))


def indicator(a: float, b: float) -> Indicator:
    return Indicator(float(a), float(b))


def bump(delta: float, c: float | None = None) -> PolynomialBump:
    return PolynomialBump(float(delta)) if c is None else PolynomialBump(float(delta), float(c))


def translate(base: HalfLineFunction, s: float) -> Translate:
    return Translate(base, float(s))


def modulate(base: HalfLineFunction, omega: float) -> Modulate:
    return Modulate(base, float(omega))


def scale(base: HalfLineFunction, c) -> Scale:
    return Scale(base, c)


def fsum(terms: Sequence[HalfLineFunction]) -> Sum:
    return Sum(tuple(terms))


def sampled(t, values) -> Sampled:
    return Sampled(t, values)


def _parse_complex(v):
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, dict):
        return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    return complex(float(v))


def from_dict(d) -> HalfLineFunction:
    """Build a function from the JSON DSL, e.g. ``{"kind": "indicator", "a": 1, "b": 2}``."""
    if not isinstance(d, dict) or "kind" not in d:
        raise ConfigurationError(f"malformed function spec: {d!r}")
    kind = d["kind"]
    try:
        if kind == "exponential":
            return exponential(d["a"])
        if kind == "indicator":
            return indicator(d["a"], d["b"])
        if kind == "polynomial-bump":
            return bump(d["delta"], d.get("c"))
        if kind == "sampled":
            values = np.asarray(d["re"], dtype=float) + 1j * np.asarray(d.get("im", [0.0] * len(d["re"])), dtype=float)
            return sampled(d["t"], values)
        if kind == "translate":
            return translate(from_dict(d["base"]), d["s"])
        if kind == "modulate":
            return modulate(from_dict(d["base"]), d["omega"])
        if kind == "damp":
            return Damp(from_dict(d["base"]), float(d["rate"]))
        if kind == "scale":
            return scale(from_dict(d["base"]), _parse_complex(d["c"]))
        if kind == "sum":
            if not isinstance(d["terms"], list):
                raise ConfigurationError(f"sum terms must be a list, got {type(d['terms']).__name__}")
            return fsum([from_dict(term) for term in d["terms"]])
    except KeyError as exc:
        raise ConfigurationError(f"function spec of kind {kind!r} is missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"bad field in {kind!r} spec: {exc}") from None
    raise ConfigurationError(f"unknown function kind {kind!r}")


def weight(f: HalfLineFunction, x: float) -> HalfLineFunction:
    """Return ``f_x(t) = f(t) exp(-x t)`` (zero for ``t < 0``)."""
    x = check_order(x)
    if x == 0:
        return f
    return Damp(f, x)


def sample(f: HalfLineFunction, grid: TimeGrid) -> np.ndarray:
    values = np.asarray(f(grid.nodes), dtype=complex)
    bad = ~np.isfinite(values)
    if np.any(bad):
        j = int(np.argmax(bad))
        raise EvaluationError(f"non-finite value {values[j]!r} at node {j} (t = {grid.nodes[j]!r})")
    return values


def weighted_samples(f: HalfLineFunction, x: float, grid: TimeGrid) -> np.ndarray:
    """Samples of ``f_x`` at the grid midpoints."""
    x = check_order(x)
    values = sample(f, grid)
    if x == 0:
        return values
    return values * np.exp(-x * grid.nodes)


def _energy(h: np.ndarray, dt: float) -> float:
    with np.errstate(over="ignore"):
        return dt * float(np.sum(h.real ** 2 + h.imag ** 2))


def weighted_l2_norm_sq(f: HalfLineFunction, x: float, grid: TimeGrid = DEFAULT_GRID) -> float:
    """Midpoint approximation of ``int_0^t_max exp(-2xt) |f(t)|^2 dt``."""
    return _energy(weighted_samples(f, x, grid), grid.dt)


def weighted_l2_error(f: HalfLineFunction, x: float, grid: TimeGrid = DEFAULT_GRID) -> float:
    """Error model for :func:`weighted_l2_norm_sq`.

    Richardson estimate ``|I(dt) - I(2 dt)| / 3`` of the midpoint error plus
    the weighted tail mass beyond the grid (an upper bound for closed-form
    kinds, zero for sampled ones).
    """
    fine = weighted_l2_norm_sq(f, x, grid)
    coarse = weighted_l2_norm_sq(f, x, grid.coarsened())
    return abs(fine - coarse) / 3.0 + f.tail_mass_bound(x, grid.end)


@dataclass(frozen=True)
class PegoNorms:
    l1: float
    l2: float
    marginal: bool = False


def verify_pego(f: HalfLineFunction, x: float, grid: TimeGrid = DEFAULT_GRID) -> PegoNorms:
    """Truncated ``||f_x||_1`` and ``||f_x||_2``.

    Raises :class:`PegoRejected` if either norm is not finite. ``marginal`` is
    set when more than 1% of the L1 mass sits in the last quarter of the grid,
    i.e. acceptance depends on where the grid was truncated.
    """
    x = check_order(x)
    with np.errstate(over="ignore", invalid="ignore"):
        values = np.asarray(f(grid.nodes), dtype=complex) * np.exp(-x * grid.nodes)
        mags = np.abs(values)
        l1 = grid.dt * float(np.sum(mags))
        l2 = math.sqrt(grid.dt * float(np.sum(mags ** 2)))
    diverged = [name for name, v in (("l1", l1), ("l2", l2)) if not math.isfinite(v)]
    if diverged:
        raise PegoRejected(
            f"not Laplace-Pego of order {x}: {' and '.join(diverged)} norm of f_x diverged numerically"
        )
    quarter = mags[3 * grid.n // 4:]
    marginal = l1 > 0 and grid.dt * float(np.sum(quarter)) > 0.01 * l1
    return PegoNorms(l1, l2, bool(marginal))


@dataclass(frozen=True, eq=False)
class PegoFamily:
    """A finite list of functions sharing an order and a time grid."""

    members: tuple
    order: float
    grid: TimeGrid = DEFAULT_GRID
    label: str = "unknown"
    name: str = ""
    parameters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        object.__setattr__(self, "order", check_order(self.order))
        if not self.members:
            raise ConfigurationError("a family needs at least one member")
        if self.label not in LABELS:
            raise ConfigurationError(f"label must be one of {LABELS}, got {self.label!r}")

    def __len__(self):
        return len(self.members)

    @cached_property
    def weighted(self) -> np.ndarray:
        """``(members, n)`` array of weighted samples."""
        rows = np.array([weighted_samples(f, self.order, self.grid) for f in self.members])
        rows.setflags(write=False)
        return rows

    def with_members(self, members) -> "PegoFamily":
        return PegoFamily(tuple(members), self.order, self.grid, self.label, self.name)

    def to_dict(self):
        return {
            "name": self.name,
            "order": self.order,
            "label": self.label,
            "grid": self.grid.to_dict(),
            "parameters": list(self.parameters),
            "members": [f.to_dict() for f in self.members],
        }
