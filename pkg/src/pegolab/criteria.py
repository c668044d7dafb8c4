"""Compactness functionals evaluated over finite families.

Each functional returns a :class:`CriterionReport` holding one value per
member, the supremum over the family (the finite stand-in for "for all f"),
and an error estimate propagated from the weighted-norm quadrature error.

Normalizations follow the definitions literally: the Laplace equicontinuity
modulus carries ``1/2pi``, the Laplace equivanishing tail does not, and the
exponential equicontinuity modulus is a root (not squared) quantity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConfigurationError, ScaleError
from .halfline import PegoFamily, PolynomialBump, TimeGrid, weighted_l2_error
from .parallel import pmap
from .transform import (
    TWO_PI,
    FrequencyGrid,
    default_ygrid,
    spectral_tail_bound,
    spectrum_of_samples,
)

DEFAULT_EPS = 0.05
DEFAULT_SHIFTS = 8

EXP_EQUIVANISH = "ExpEquivanish"
LAPLACE_EQUICONT = "LaplaceEquicont"
EXP_EQUICONT = "ExpEquicont"
LAPLACE_EQUIVANISH = "LaplaceEquivanish"
L2_BOUND = "L2Bound"
# Riesz-Kolmogorov equicontinuity of the weighted family; used by the lemma check
L2_EQUICONT = "L2Equicont"

CRITERIA = (EXP_EQUIVANISH, LAPLACE_EQUICONT, EXP_EQUICONT, LAPLACE_EQUIVANISH, L2_BOUND, L2_EQUICONT)
# scale that each criterion sweeps over, and the direction in which it tightens
SCALE_KIND = {
    EXP_EQUIVANISH: ("T", "increasing"),
    LAPLACE_EQUIVANISH: ("T", "increasing"),
    LAPLACE_EQUICONT: ("delta", "decreasing"),
    EXP_EQUICONT: ("delta", "decreasing"),
    L2_EQUICONT: ("delta", "decreasing"),
}


@dataclass(frozen=True)
class CriterionScales:
    eps: float
    delta: float | None = None
    T: float | None = None

    def __post_init__(self):
        for name in ("eps", "delta", "T"):
            v = getattr(self, name)
            if v is not None and not v > 0:
                raise ScaleError(f"scale {name} must be positive, got {v!r}")

    def to_dict(self):
        return {
            "eps": None if math.isinf(self.eps) else self.eps,
            "delta": self.delta,
            "T": self.T,
        }


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    scales: CriterionScales
    per_member: tuple
    supremum: float
    passed: bool
    error: float = 0.0
    details: dict = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, criterion, scales, values, errors=(), details=None):
        values = tuple(float(v) for v in values)
        sup = max(values)
        err = max((float(e) for e in errors), default=0.0)
        return cls(criterion, scales, values, sup, bool(sup < scales.eps), err, details or {})

    @property
    def scale(self) -> float | None:
        return self.scales.T if self.scales.T is not None else self.scales.delta

    def to_dict(self):
        return {
            "criterion": self.criterion,
            "scales": self.scales.to_dict(),
            "per_member": list(self.per_member),
            "supremum": self.supremum,
            "pass": self.passed,
            "error": self.error,
            "details": self.details,
        }


def member_l2_errors(F: PegoFamily) -> list[float]:
    """Per-member error model of the weighted L2 norm (see ``weighted_l2_error``)."""
    return pmap(lambda f: weighted_l2_error(f, F.order, F.grid), F.members)


def _energy_rows(h: np.ndarray) -> np.ndarray:
    # overflow to inf is how an unbounded family shows up
    with np.errstate(over="ignore"):
        return h.real ** 2 + h.imag ** 2


def _tail_energy(h: np.ndarray, grid: TimeGrid, T: float) -> np.ndarray:
    e = _energy_rows(h)
    j0 = grid.index_of(T)
    frac = (j0 + 1) - T / grid.dt
    frac = 1.0 if abs(frac - 1.0) < 1e-9 else frac
    out = grid.dt * e[:, j0 + 1:].sum(axis=1)
    if j0 < grid.n:
        out = out + grid.dt * frac * e[:, j0]
    return out


def exp_equivanish_tail(F: PegoFamily, T: float, eps: float = DEFAULT_EPS) -> CriterionReport:
    """``int_T^inf exp(-2xt) |f(t)|^2 dt`` per member (partial cell at ``T`` pro rata)."""
    if not T > 0:
        raise ScaleError(f"T must be positive, got {T!r}")
    if T >= F.grid.t_max:
        raise ScaleError(f"T = {T} is not below t_max = {F.grid.t_max}; the tail is indistinguishable from truncation")
    values = _tail_energy(F.weighted, F.grid, T)
    coarse = PegoFamily(F.members, F.order, F.grid.coarsened())
    coarse_values = _tail_energy(coarse.weighted, coarse.grid, T)
    errors = [
        abs(a - b) / 3.0 + f.tail_mass_bound(F.order, F.grid.end)
        for a, b, f in zip(values, coarse_values, F.members)
    ]
    return CriterionReport.build(EXP_EQUIVANISH, CriterionScales(eps, T=T), values, errors)


def _spectral_weights(F, ygrid):
    ygrid = default_ygrid(F.grid) if ygrid is None else ygrid
    return ygrid, ygrid.weights


def laplace_equicont_modulus(
    F: PegoFamily,
    delta: float,
    ygrid: FrequencyGrid | None = None,
    eps: float = DEFAULT_EPS,
) -> CriterionReport:
    """``(1/2pi) int |L{f}(x + delta + iy) - L{f}(x + iy)|^2 dy`` per member.

    The shift ``delta`` moves the real part: two spectra, at orders ``x``
    and ``x + delta``, on the same frequency grid.
    """
    if not delta > 0:
        raise ScaleError(f"delta must be positive, got {delta!r}")
    ygrid, w = _spectral_weights(F, ygrid)
    h = F.weighted
    damped = h * np.exp(-delta * F.grid.nodes)
    gap = spectrum_of_samples(damped, F.grid, ygrid) - spectrum_of_samples(h, F.grid, ygrid)
    values = (np.abs(gap) ** 2 @ w) / TWO_PI
    return CriterionReport.build(
        LAPLACE_EQUICONT, CriterionScales(eps, delta=delta), values, member_l2_errors(F)
    )


def shift_indices(grid: TimeGrid, delta: float, n_shifts: int = DEFAULT_SHIFTS, shifts=None) -> np.ndarray:
    """Grid-aligned shift counts in ``(0, delta]``: geometric by default, or the explicit ``shifts``."""
    if shifts is not None:
        ks = []
        for s in shifts:
            k = round(s / grid.dt)
            if k < 1 or abs(k * grid.dt - s) > 1e-9 * grid.dt * max(k, 1):
                raise ScaleError(f"shift {s!r} is not a positive multiple of dt = {grid.dt}")
            ks.append(k)
        return np.unique(np.array(ks, dtype=np.int64))
    if delta < grid.dt:
        raise ScaleError(f"delta = {delta} is below the grid step dt = {grid.dt}")
    kmax = int(math.floor(delta / grid.dt + 1e-9))
    ks = np.rint(np.geomspace(1, kmax, max(int(n_shifts), 1))).astype(np.int64)
    return np.unique(np.append(ks, kmax))


def _shift_energies(h, grid, ks, x, start_at_shift):
    if start_at_shift:
        q = np.ones(ks.size, dtype=complex)
    else:
        q = np.exp(-x * ks * grid.dt).astype(complex)
    return pmap(lambda row: kernels.shift_moduli_sq(row, grid.dt, ks, q, start_at_shift), list(h))


def exp_equicont_modulus(
    F: PegoFamily,
    delta: float,
    n_shifts: int = DEFAULT_SHIFTS,
    eps: float = DEFAULT_EPS,
    shifts=None,
) -> CriterionReport:
    """``max_s (int exp(-2xt) |f(t) - f(t - s)|^2 dt)^(1/2)`` per member.

    Shifts are whole grid steps, so ``f(t - s)`` is an exact index shift of the
    samples (zero-extended on the left, zero beyond the grid on the right).
    """
    ks = shift_indices(F.grid, delta, n_shifts, shifts)
    energies = _shift_energies(F.weighted, F.grid, ks, F.order, False)
    values = [math.sqrt(float(np.max(e))) for e in energies]
    errors = [math.sqrt(4.0 * e) for e in member_l2_errors(F)]
    scale_delta = delta if shifts is None else float(ks.max() * F.grid.dt)
    details = {"shifts": (ks * F.grid.dt).tolist()}
    return CriterionReport.build(EXP_EQUICONT, CriterionScales(eps, delta=scale_delta), values, errors, details)


def l2_equicont_modulus(
    F: PegoFamily,
    delta: float,
    n_shifts: int = DEFAULT_SHIFTS,
    eps: float = DEFAULT_EPS,
    shifts=None,
) -> CriterionReport:
    """``max_s int |f_x(t + s) - f_x(t)|^2 dt`` per member (squared, unlike the exponential modulus)."""
    ks = shift_indices(F.grid, delta, n_shifts, shifts)
    energies = _shift_energies(F.weighted, F.grid, ks, F.order, True)
    values = [float(np.max(e)) for e in energies]
    errors = [4.0 * e for e in member_l2_errors(F)]
    scale_delta = delta if shifts is None else float(ks.max() * F.grid.dt)
    details = {"shifts": (ks * F.grid.dt).tolist()}
    return CriterionReport.build(L2_EQUICONT, CriterionScales(eps, delta=scale_delta), values, errors, details)


def _outer_band_energy(E: np.ndarray, ygrid: FrequencyGrid, T: float) -> np.ndarray:
    """Integral of the piecewise-linear interpolant of ``E`` over ``T < |y| <= top``.

    For ``T`` between nodes the partial cell is integrated exactly, so the
    result is continuous and non-increasing in ``T``.
    """
    K, dy = ygrid.half_count, ygrid.dy
    k = int(math.floor(T / dy + 1e-12))
    u = T / dy - k
    total = np.zeros(E.shape[0])
    for side in (1, -1):
        idx = K + side * np.arange(k, K + 1)
        vals = E[:, idx]
        # trapezoid over whole cells [k+1, K]
        if K > k + 1:
            inner = vals[:, 1:]
            total = total + dy * (inner.sum(axis=1) - 0.5 * inner[:, 0] - 0.5 * inner[:, -1])
        if k < K:
            a, b = vals[:, 0], vals[:, 1]
            at_T = a + u * (b - a)
            total = total + 0.5 * (1.0 - u) * dy * (at_T + b)
    return total


def laplace_equivanish_tail(
    F: PegoFamily,
    T: float,
    ygrid: FrequencyGrid | None = None,
    eps: float = DEFAULT_EPS,
) -> CriterionReport:
    """``int_{|y| > T} |L{f}(x+iy)|^2 dy`` per member, grid part plus the tail bound beyond ``y_max``."""
    ygrid, w = _spectral_weights(F, ygrid)
    if not T > 0:
        raise ScaleError(f"T must be positive, got {T!r}")
    if T >= ygrid.top:
        raise ScaleError(f"T = {T} is not below the frequency cutoff y_max = {ygrid.top}")
    spectra = spectrum_of_samples(F.weighted, F.grid, ygrid)
    grid_part = _outer_band_energy(np.abs(spectra) ** 2, ygrid, T)
    tails = [spectral_tail_bound(f, F.order, ygrid, row) for f, row in zip(F.members, spectra)]
    values = grid_part + np.array(tails)
    errors = [t + TWO_PI * e for t, e in zip(tails, member_l2_errors(F))]
    return CriterionReport.build(
        LAPLACE_EQUIVANISH, CriterionScales(eps, T=T), values, errors, {"tail_bounds": tails}
    )


def l2_bound(F: PegoFamily, M: float | None = None) -> CriterionReport:
    """Weighted squared norms; the supremum estimates the family bound ``M``.

    Passes when the supremum is finite, or below ``M`` if one is given.
    """
    values = _energy_rows(F.weighted).sum(axis=1) * F.grid.dt
    eps = math.inf if M is None else M
    return CriterionReport.build(L2_BOUND, CriterionScales(eps), values, member_l2_errors(F))


@dataclass(frozen=True)
class MollifierSpec:
    delta: float
    profile: PolynomialBump
    grid: TimeGrid

    def __call__(self, s):
        return self.profile(s).real

    def integral(self) -> float:
        return self.grid.dt * float(np.sum(self(self.grid.nodes)))


def make_mollifier(delta: float, grid: TimeGrid) -> MollifierSpec:
    """Polynomial bump ``c (s (delta - s))^2`` on ``(0, delta)`` with unit mass on ``grid``."""
    if not delta >= 4 * grid.dt * (1 - 1e-12):
        raise ScaleError(f"mollifier width {delta} needs at least 4 grid steps (dt = {grid.dt})")
    t = grid.nodes[grid.nodes < delta]
    raw = grid.dt * float(np.sum((t * (delta - t)) ** 2))
    spec = MollifierSpec(delta, PolynomialBump(delta, 1.0 / raw), grid)
    if abs(spec.integral() - 1.0) > 1e-9:
        raise ConfigurationError(f"mollifier normalization failed: integral {spec.integral()!r}")
    return spec


def minkowski_spot_check(f, x: float, mollifier: MollifierSpec) -> tuple[float, float]:
    """Both sides of the Minkowski integral inequality for ``F(t, s) = exp(-xt)(f(t) - f(t-s)) g(s)``.

    The ``s`` integral is a sum over whole grid shifts ``k dt`` with weights
    ``g(k dt) dt``, so the discrete inequality holds exactly.
    """
    from .halfline import weighted_samples

    grid = mollifier.grid
    h = weighted_samples(f, x, grid)
    kmax = int(math.ceil(mollifier.delta / grid.dt))
    ks = np.arange(1, kmax + 1, dtype=np.int64)
    w = mollifier(ks * grid.dt) * grid.dt
    q = np.exp(-x * ks * grid.dt)
    norms = np.sqrt(kernels.shift_moduli_sq(h, grid.dt, ks, q.astype(complex), False))
    rhs = float(np.sum(w * norms))
    n = h.size
    kernel = np.concatenate([[0.0], w * q])
    combined = np.concatenate([w.sum() * h, np.zeros(kmax, dtype=complex)]) - np.convolve(h, kernel)[: n + kmax]
    lhs = math.sqrt(grid.dt * float(np.sum(np.abs(combined) ** 2)))
    return lhs, rhs


_DISPATCH = {
    EXP_EQUIVANISH: lambda F, s, eps, kw: exp_equivanish_tail(F, s, eps=eps),
    LAPLACE_EQUIVANISH: lambda F, s, eps, kw: laplace_equivanish_tail(F, s, kw.get("ygrid"), eps=eps),
    LAPLACE_EQUICONT: lambda F, s, eps, kw: laplace_equicont_modulus(F, s, kw.get("ygrid"), eps=eps),
    EXP_EQUICONT: lambda F, s, eps, kw: exp_equicont_modulus(F, s, kw.get("n_shifts", DEFAULT_SHIFTS), eps=eps),
    L2_EQUICONT: lambda F, s, eps, kw: l2_equicont_modulus(F, s, kw.get("n_shifts", DEFAULT_SHIFTS), eps=eps),
}


def check_ladder(criterion: str, scales) -> list[float]:
    if criterion not in SCALE_KIND:
        raise ConfigurationError(f"criterion {criterion!r} has no scale to sweep")
    scales = [float(s) for s in scales]
    if not scales:
        raise ConfigurationError("empty scale list")
    if any(not s > 0 for s in scales):
        raise ConfigurationError(f"scales must be positive: {scales}")
    _, direction = SCALE_KIND[criterion]
    ok = all(b > a for a, b in zip(scales, scales[1:])) if direction == "increasing" else all(
        b < a for a, b in zip(scales, scales[1:])
    )
    if not ok:
        raise ConfigurationError(f"{criterion} scales must be strictly {direction}: {scales}")
    return scales


def scale_sweep(F: PegoFamily, criterion: str, scales, eps: float = DEFAULT_EPS, **kw) -> list[CriterionReport]:
    """One report per scale, in order; ``T`` ladders increase and ``delta`` ladders decrease."""
    scales = check_ladder(criterion, scales)
    return [_DISPATCH[criterion](F, s, eps, kw) for s in scales]
