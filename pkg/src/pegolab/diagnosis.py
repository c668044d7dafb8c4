"""Compactness verdicts and numerical checks of the implication chains.

A finite sample of a family is always compact, so a verdict is a statement
about what the sampled diagnostics show across a ladder of scales:

* a criterion is ``pass`` when some scale on its ladder meets ``eps``;
* ``fail`` when no scale does and the value at the finest scale still sits at
  a positive fraction of its reference level (a plateau);
* ``inconclusive`` otherwise (values still falling when the ladder ran out).

The Laplace route uses {L2Bound, LaplaceEquicont, LaplaceEquivanish}, the
Riesz-Kolmogorov route {L2Bound, ExpEquicont, ExpEquivanish}. A third route,
the epsilon-net oracle, checks total boundedness directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .criteria import (
    DEFAULT_EPS,
    DEFAULT_SHIFTS,
    EXP_EQUICONT,
    EXP_EQUIVANISH,
    L2_BOUND,
    LAPLACE_EQUICONT,
    LAPLACE_EQUIVANISH,
    CriterionReport,
    check_ladder,
    exp_equicont_modulus,
    exp_equivanish_tail,
    l2_bound,
    l2_equicont_modulus,
    laplace_equicont_modulus,
    laplace_equivanish_tail,
    make_mollifier,
    scale_sweep,
)
from .errors import ConfigurationError, DiagnosisRefused, ScaleError
from .halfline import PegoFamily
from .parallel import pmap
from .transform import TWO_PI, FrequencyGrid, default_ygrid

COMPACT = "compact"
NON_COMPACT = "non-compact"
INCONCLUSIVE = "inconclusive"

PASS, FAIL = "pass", "fail"

DEFAULT_TIME_T = (0.5, 1.0, 2.0, 4.0, 8.0)
DEFAULT_LAPLACE_DELTA = (1.6, 0.8, 0.4, 0.2, 0.1)
DEFAULT_SHIFT_DELTA = (0.4, 0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125)
DEFAULT_NET_EPS = 0.5
DEFAULT_PREFIXES = (0.25, 0.5, 1.0)
PLATEAU_FRACTION = 0.1
# a unit-norm function with a jump has spectral tail ~ 2/T; the frequency
# ladder runs until that reference tail is well below eps
_FREQ_REACH = 4.0

# sweep key -> criterion
SWEEP_KEYS = {
    "time": EXP_EQUIVANISH,
    "freq": LAPLACE_EQUIVANISH,
    "laplace": LAPLACE_EQUICONT,
    "shift": EXP_EQUICONT,
}


def default_freq_ladder(eps: float, ygrid: FrequencyGrid) -> tuple:
    """Powers of two from 2 up to the first one >= 4/eps, capped at ``y_max / 2``."""
    out, T = [], 2.0
    while T <= ygrid.top / 2:
        out.append(T)
        if T >= _FREQ_REACH / eps:
            break
        T *= 2
    if not out:
        raise ScaleError(f"frequency cutoff {ygrid.top} is too small for a spectral sweep")
    return tuple(out)


def default_sweep(eps: float, tgrid, ygrid: FrequencyGrid) -> dict:
    time = tuple(T for T in DEFAULT_TIME_T if T < tgrid.t_max)
    shift = tuple(d for d in DEFAULT_SHIFT_DELTA if d >= tgrid.dt * (1 - 1e-9))
    if not time or not shift:
        raise ScaleError(f"grid (dt = {tgrid.dt}, t_max = {tgrid.t_max}) leaves an empty default ladder")
    return {
        "time": time,
        "freq": default_freq_ladder(eps, ygrid),
        "laplace": DEFAULT_LAPLACE_DELTA,
        "shift": shift,
    }


def resolve_sweep(sweep, eps, tgrid, ygrid) -> dict:
    """Defaults overlaid with user ladders, each validated for direction."""
    out = default_sweep(eps, tgrid, ygrid)
    for key, scales in (sweep or {}).items():
        if key not in SWEEP_KEYS:
            raise ConfigurationError(f"unknown sweep key {key!r}; expected one of {sorted(SWEEP_KEYS)}")
        out[key] = tuple(check_ladder(SWEEP_KEYS[key], scales))
    return out


@dataclass(frozen=True)
class OracleResult:
    net_sizes: tuple
    prefix_sizes: tuple
    saturated: bool
    eps: float

    @property
    def verdict(self) -> str:
        return COMPACT if self.saturated else NON_COMPACT

    def to_dict(self):
        return {
            "net_sizes": list(self.net_sizes),
            "prefix_sizes": list(self.prefix_sizes),
            "saturated": self.saturated,
            "eps": self.eps,
            "verdict": self.verdict,
        }


def distance_matrix(F: PegoFamily) -> np.ndarray:
    """Pairwise weighted-L2 distances between members."""
    d2 = kernels.pairwise_sq_dist(np.ascontiguousarray(F.weighted), F.grid.dt)
    return np.sqrt(np.maximum(d2, 0.0))


def greedy_net_size(D: np.ndarray, eps: float) -> int:
    """Farthest-point eps-net size, seeded at member 0, ties to the lowest index."""
    mind = D[0].copy()
    size = 1
    while True:
        i = int(np.argmax(mind))
        if not mind[i] > eps:
            return size
        size += 1
        mind = np.minimum(mind, D[i])


def epsilon_net_oracle(F: PegoFamily, eps: float = DEFAULT_NET_EPS, prefixes=DEFAULT_PREFIXES) -> OracleResult:
    """Greedy eps-net sizes on nested member prefixes; saturated when the last two agree."""
    if not eps > 0:
        raise ConfigurationError(f"net eps must be positive, got {eps!r}")
    D = distance_matrix(F)
    m = len(F)
    counts = sorted({max(1, math.ceil(p * m)) for p in prefixes})
    sizes = tuple(greedy_net_size(D[:k, :k], eps) for k in counts)
    saturated = len(sizes) < 2 or sizes[-1] == sizes[-2]
    return OracleResult(sizes, tuple(counts), saturated, eps)


def criterion_status(reports: list, M: float, plateau: float = PLATEAU_FRACTION) -> tuple:
    """``(status, scale)`` for one swept criterion; ``scale`` is the first passing scale or None."""
    for r in reports:
        if r.passed:
            return PASS, r.scale
    crit = reports[-1].criterion
    level = plateau * M
    final = reports[-1].supremum
    if crit == EXP_EQUICONT:
        final = final ** 2
    elif crit == LAPLACE_EQUIVANISH:
        level *= TWO_PI
    return (FAIL if final >= level and final > 0 else INCONCLUSIVE), None


def route_verdict(statuses) -> str:
    statuses = list(statuses)
    if all(s == PASS for s in statuses):
        return COMPACT
    if any(s == FAIL for s in statuses):
        return NON_COMPACT
    return INCONCLUSIVE


@dataclass(frozen=True)
class CompactnessVerdict:
    laplace_route: dict
    rk_route: dict
    oracle: OracleResult
    verdict: str
    agreement: bool
    route_verdicts: dict = field(default_factory=dict)
    first_passing: dict = field(default_factory=dict)
    sweeps: dict = field(default_factory=dict, compare=False)
    l2: CriterionReport | None = field(default=None, compare=False)
    config: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "laplace_route": dict(self.laplace_route),
            "rk_route": dict(self.rk_route),
            "oracle": self.oracle.to_dict(),
            "verdict": self.verdict,
            "agreement": self.agreement,
            "route_verdicts": dict(self.route_verdicts),
            "first_passing": dict(self.first_passing),
            "l2_bound": None if self.l2 is None else self.l2.to_dict(),
            "sweeps": {k: [r.to_dict() for r in v] for k, v in self.sweeps.items()},
            "config": self.config,
        }


def diagnose(
    F: PegoFamily,
    eps: float = DEFAULT_EPS,
    sweep: dict | None = None,
    ygrid: FrequencyGrid | None = None,
    net_eps: float = DEFAULT_NET_EPS,
    plateau: float = PLATEAU_FRACTION,
    n_shifts: int = DEFAULT_SHIFTS,
) -> CompactnessVerdict:
    """Verdicts from the Laplace route, the Riesz-Kolmogorov route and the eps-net oracle.

    ``sweep`` maps ``time``, ``freq``, ``laplace`` and ``shift`` to scale
    ladders overriding the defaults. ExpEquicont is a root modulus and is
    compared against ``sqrt(eps)`` so that both routes work at the same
    squared-norm tolerance.

    Raises
    ------
    DiagnosisRefused
        If the family is not L2-bounded on the grid.
    """
    if not eps > 0:
        raise ConfigurationError(f"eps must be positive, got {eps!r}")
    ygrid = default_ygrid(F.grid) if ygrid is None else ygrid
    l2 = l2_bound(F)
    M = l2.supremum
    if not math.isfinite(M):
        raise DiagnosisRefused(
            f"family is not L2-bounded at order {F.order}: weighted norm supremum is {M!r}"
        )
    ladders = resolve_sweep(sweep, eps, F.grid, ygrid)
    eps_root = math.sqrt(eps)
    jobs = {
        EXP_EQUIVANISH: lambda: scale_sweep(F, EXP_EQUIVANISH, ladders["time"], eps),
        LAPLACE_EQUIVANISH: lambda: scale_sweep(F, LAPLACE_EQUIVANISH, ladders["freq"], eps, ygrid=ygrid),
        LAPLACE_EQUICONT: lambda: scale_sweep(F, LAPLACE_EQUICONT, ladders["laplace"], eps, ygrid=ygrid),
        EXP_EQUICONT: lambda: scale_sweep(F, EXP_EQUICONT, ladders["shift"], eps_root, n_shifts=n_shifts),
    }
    names = list(jobs)
    sweeps = dict(zip(names, pmap(lambda k: jobs[k](), names)))
    status, first = {L2_BOUND: PASS}, {}
    for name in names:
        status[name], first[name] = criterion_status(sweeps[name], M, plateau)
    laplace_route = {k: status[k] for k in (L2_BOUND, LAPLACE_EQUICONT, LAPLACE_EQUIVANISH)}
    rk_route = {k: status[k] for k in (L2_BOUND, EXP_EQUICONT, EXP_EQUIVANISH)}
    oracle = epsilon_net_oracle(F, net_eps)
    routes = {
        "laplace": route_verdict(laplace_route.values()),
        "rk": route_verdict(rk_route.values()),
        "oracle": oracle.verdict,
    }
    verdict = routes["laplace"] if routes["laplace"] == routes["rk"] else INCONCLUSIVE
    agreement = len(set(routes.values())) == 1
    config = {
        "eps": eps,
        "eps_root": eps_root,
        "net_eps": net_eps,
        "plateau_fraction": plateau,
        "n_shifts": n_shifts,
        "ladders": {k: list(v) for k, v in ladders.items()},
        "tgrid": F.grid.to_dict(),
        "ygrid": ygrid.to_dict(),
    }
    return CompactnessVerdict(
        laplace_route, rk_route, oracle, verdict, agreement, routes, first, sweeps, l2, config
    )


# ---------------------------------------------------------------------------
# implication chains


@dataclass(frozen=True)
class ChainCheck:
    """One numerically checked implication: ``conclusion <= constant * premise + slack``.

    A check whose premise cannot be met on the grid is ``vacuous`` and holds.
    """

    theorem_id: str
    premise_value: float
    conclusion_value: float
    constant: float
    slack: float = 0.0
    premise_met: bool = True
    vacuous: bool = False
    details: dict = field(default_factory=dict, compare=False)

    @property
    def bound(self) -> float:
        return self.constant * self.premise_value

    @property
    def holds(self) -> bool:
        if self.vacuous:
            return True
        return self.conclusion_value <= self.bound + self.slack

    def to_dict(self):
        return {
            "theorem_id": self.theorem_id,
            "premise_value": self.premise_value,
            "conclusion_value": self.conclusion_value,
            "constant": self.constant,
            "bound": self.bound,
            "slack": self.slack,
            "holds": self.holds,
            "premise_met": self.premise_met,
            "vacuous": self.vacuous,
            "details": self.details,
        }


EQUICONT_TO_EQUIVANISH = "laplace-equicont=>exp-equivanish"
BOUNDED_REVERSE = "exp-equivanish=>laplace-equicont"
LEMMA_EXP_EQUICONT = "exp-equicont<=>l2-equicont"
EQUICONT_TO_LAPLACE_VANISH = "exp-equicont=>laplace-equivanish"
LAPLACE_VANISH_REVERSE = "laplace-equivanish=>exp-equicont"
THEOREM_IDS = (
    EQUICONT_TO_EQUIVANISH,
    BOUNDED_REVERSE,
    LEMMA_EXP_EQUICONT,
    EQUICONT_TO_LAPLACE_VANISH,
    LAPLACE_VANISH_REVERSE,
)


def _slack(err_conclusion: float, constant: float, err_premise: float) -> float:
    return 3.0 * (err_conclusion + constant * err_premise)


def _vacuous(theorem_id, eps, constant, reason, **details):
    details["reason"] = reason
    return ChainCheck(theorem_id, eps, 0.0, constant, 0.0, False, True, details)


def _grid_ceil(T: float, dt: float) -> float:
    return math.ceil(T / dt - 1e-9) * dt


def check_thm_equicont_to_equivanish(F: PegoFamily, eps: float, delta: float, ygrid=None) -> ChainCheck:
    """Laplace equicontinuity at ``delta`` bounds the time tail beyond ``T``.

    ``T`` is the smallest grid time with ``|exp(-delta T) - 1|^2 >= 1/2``,
    and then ``int_T^inf |f_x|^2 <= 2 * modulus``. The check asserts
    ``tail <= 2 eps + slack``.
    """
    premise = laplace_equicont_modulus(F, delta, ygrid, eps)
    T = _grid_ceil(math.log(2.0 + math.sqrt(2.0)) / delta, F.grid.dt)
    while (1.0 - math.exp(-delta * T)) ** 2 < 0.5:
        T += F.grid.dt
    details = {"delta": delta, "T": T, "premise_measured": premise.supremum}
    if T >= F.grid.t_max:
        return _vacuous(EQUICONT_TO_EQUIVANISH, eps, 2.0, "T beyond the time grid", **details)
    concl = exp_equivanish_tail(F, T, eps)
    details["sharp_bound"] = 2.0 * premise.supremum
    return ChainCheck(
        EQUICONT_TO_EQUIVANISH, eps, concl.supremum, 2.0,
        _slack(concl.error, 2.0, premise.error), premise.passed, not premise.passed, details,
    )


def _largest_dyadic(pred, start: float = 1.0, floor: float = 0.0):
    """Largest ``start * 2**-k`` (``k >= 0``) above ``floor`` satisfying ``pred``, or None."""
    d = start
    while d >= floor * (1 - 1e-9) and d > 1e-12:
        if pred(d):
            return d
        d /= 2.0
    return None


def check_thm_bounded_reverse(F: PegoFamily, eps: float, T: float, ygrid=None) -> ChainCheck:
    """For an L2-bounded family, a small time tail beyond ``T`` gives Laplace equicontinuity.

    ``delta`` is the largest dyadic value with ``|exp(-delta T) - 1|^2 M < eps``.
    The check asserts ``modulus(delta) <= 2 eps + slack``.
    """
    premise = exp_equivanish_tail(F, T, eps)
    M = l2_bound(F).supremum
    details = {"T": T, "M": M, "premise_measured": premise.supremum}
    if not premise.passed:
        return _vacuous(BOUNDED_REVERSE, eps, 2.0, "time tail not below eps", **details)
    delta = _largest_dyadic(lambda d: (1.0 - math.exp(-d * T)) ** 2 * M < eps)
    concl = laplace_equicont_modulus(F, delta, ygrid, eps)
    details["delta"] = delta
    details["sharp_bound"] = (1.0 - math.exp(-delta * T)) ** 2 * M + premise.supremum
    return ChainCheck(
        BOUNDED_REVERSE, eps, concl.supremum, 2.0, _slack(concl.error, 2.0, premise.error), True, False, details
    )


def _dyadic_shift_deltas(grid, min_steps: int = 1) -> list:
    """Grid-aligned widths ``2**j dt`` from about 1 down to ``min_steps * dt``."""
    jmax = max(int(math.floor(math.log2(1.0 / grid.dt))), 0)
    return [grid.dt * 2 ** j for j in range(jmax, -1, -1) if 2 ** j >= min_steps]


def _head_mass(F: PegoFamily, k: int) -> np.ndarray:
    """``int_0^{k dt} |f_x|^2`` per member (whole cells)."""
    h = F.weighted[:, :k]
    return F.grid.dt * (h.real ** 2 + h.imag ** 2).sum(axis=1)


def check_lemma_exp_equicont(F: PegoFamily, eps: float, n_shifts: int = DEFAULT_SHIFTS) -> ChainCheck:
    """Both directions between the exponential modulus and L2 equicontinuity of ``F_x``.

    Forward: with ``delta`` such that the squared L2-equicontinuity modulus,
    the head mass ``int_0^delta |f_x|^2`` and ``|exp(-x delta) - 1| M^(1/2)``
    are all below ``eps``, the exponential modulus is at most
    ``(2 eps)^(1/2) + eps``. Reverse: with the exponential modulus and
    ``|1 - exp(x delta)| M^(1/2)`` below ``eps`` and ``exp(x delta) <= 2``,
    the root L2-equicontinuity modulus is below ``3 eps``. Both moduli are
    evaluated on the same grid-aligned shifts.
    """
    grid, x = F.grid, F.order
    M = l2_bound(F).supremum
    root_M = math.sqrt(M)
    widths = _dyadic_shift_deltas(grid)

    fwd = None
    for d in widths:
        l2m = l2_equicont_modulus(F, d, n_shifts, eps)
        k = int(round(d / grid.dt))
        mass = float(np.max(_head_mass(F, k)))
        if l2m.supremum < eps and mass < eps and (1.0 - math.exp(-x * d)) * root_M < eps:
            fwd = (d, l2m, mass)
            break
    rev = None
    for d in widths:
        if math.exp(x * d) > 2.0 or (math.exp(x * d) - 1.0) * root_M >= eps:
            continue
        expm = exp_equicont_modulus(F, d, n_shifts, eps)
        if expm.supremum < eps:
            rev = (d, expm)
            break

    const_fwd = (math.sqrt(2.0 * eps) + eps) / eps
    details = {"M": M}
    holds_rev, rev_margin = True, None
    if rev is not None:
        d, expm = rev
        l2_rev = l2_equicont_modulus(F, d, n_shifts, eps)
        l2_root = math.sqrt(l2_rev.supremum)
        rev_slack = _slack(math.sqrt(l2_rev.error), 3.0, expm.error)
        holds_rev = l2_root <= 3.0 * eps + rev_slack
        rev_margin = 3.0 * eps + rev_slack - l2_root
        details["reverse"] = {
            "delta": d, "premise_measured": expm.supremum, "conclusion": l2_root,
            "bound": 3.0 * eps, "slack": rev_slack, "holds": bool(holds_rev),
        }
    else:
        details["reverse"] = {"vacuous": True}
    details["reverse_margin"] = rev_margin

    if fwd is None:
        check = _vacuous(LEMMA_EXP_EQUICONT, eps, const_fwd, "no grid delta meets the forward premise", **details)
    else:
        d, l2m, mass = fwd
        exp_fwd = exp_equicont_modulus(F, d, n_shifts, eps)
        details["forward"] = {"delta": d, "l2_equicont": l2m.supremum, "head_mass": mass}
        check = ChainCheck(
            LEMMA_EXP_EQUICONT, eps, exp_fwd.supremum, const_fwd,
            _slack(exp_fwd.error, 1.0, math.sqrt(l2m.error)), True, False, details,
        )
    if not holds_rev:
        # surface a failed reverse direction through the conclusion value
        return ChainCheck(
            LEMMA_EXP_EQUICONT, eps, math.inf, const_fwd, check.slack, True, False, details
        )
    return check


def mollifier_cutoff(mollifier, x: float, samples_per_width: int = 8) -> float:
    """Smallest ``T`` with ``|L{g}(x + iy)| <= 1/2`` for every ``|y| >= T``.

    The exact transform is scanned up to the decay-bound crossing
    ``|y| = 2C``, beyond which ``C/|y| <= 1/2`` holds analytically.
    """
    profile = mollifier.profile
    C, W = profile.decay_bound(x)
    y_end = 2.0 * C + W
    dy = 2.0 * math.pi / (samples_per_width * mollifier.delta)
    dy = min(dy, y_end / 64)
    y = np.arange(0.0, y_end + dy, dy)
    mag = np.abs(profile.laplace(x + 1j * y))
    above = np.nonzero(mag > 0.5)[0]
    if above.size == 0:
        return float(dy)
    return float(y[min(above[-1] + 1, y.size - 1)])


def check_thm_equicont_to_laplace_vanish(
    F: PegoFamily, eps: float, ygrid=None, n_shifts: int = DEFAULT_SHIFTS
) -> ChainCheck:
    """Exponential equicontinuity gives a small spectral tail beyond the mollifier cutoff.

    ``delta`` is the largest dyadic grid width (at least 4 steps) with
    exponential modulus below ``eps``. The cutoff ``T`` bounds
    ``|L{g}(x+iy)|`` by 1/2 outside ``[-T, T]``. The check asserts
    ``(spectral tail beyond T)^(1/2) <= 2 sqrt(2 pi) eps + slack``.
    """
    ygrid = default_ygrid(F.grid) if ygrid is None else ygrid
    const = 2.0 * math.sqrt(TWO_PI)
    found = None
    for d in _dyadic_shift_deltas(F.grid, min_steps=4):
        rep = exp_equicont_modulus(F, d, n_shifts, eps)
        if rep.passed:
            found = (d, rep)
            break
    if found is None:
        return _vacuous(EQUICONT_TO_LAPLACE_VANISH, eps, const, "no grid delta meets the premise")
    d, premise = found
    moll = make_mollifier(d, F.grid)
    T = mollifier_cutoff(moll, F.order)
    details = {"delta": d, "T": T, "premise_measured": premise.supremum}
    if T >= ygrid.top:
        return _vacuous(EQUICONT_TO_LAPLACE_VANISH, eps, const, "cutoff beyond the frequency grid", **details)
    tail = laplace_equivanish_tail(F, T, ygrid, eps)
    concl = math.sqrt(tail.supremum)
    return ChainCheck(
        EQUICONT_TO_LAPLACE_VANISH, eps, concl, const,
        _slack(math.sqrt(tail.error), const, premise.error), True, False, details,
    )


def _phase_gap_sq(s: float, x: float, y: np.ndarray) -> np.ndarray:
    return np.abs(1.0 - np.exp(-s * (x + 1j * y))) ** 2


def reverse_shift_width(x: float, T: float, eps: float, dt: float) -> float | None:
    """Largest grid width ``delta`` with ``|1 - exp(-s(x+iy))|^2 < eps`` for ``s <= delta``, ``|y| <= T``."""
    y = np.linspace(0.0, T, 2049)

    def ok(s):
        ss = np.linspace(0.0, s, 65)[1:]
        return all(float(np.max(_phase_gap_sq(si, x, y))) < eps for si in ss)

    k = max(int(math.floor(min(math.pi / (2.0 * T), 1.0) / dt)), 1)
    # the gap grows with s on this range; step down to the largest admissible width
    lo, hi = 0, k
    if not ok(dt):
        return None
    lo = 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if ok(mid * dt):
            lo = mid
        else:
            hi = mid - 1
    return lo * dt


def check_thm_laplace_vanish_reverse(
    F: PegoFamily, eps: float, T: float, ygrid=None, n_shifts: int = DEFAULT_SHIFTS
) -> ChainCheck:
    """A small spectral tail beyond ``T`` gives exponential equicontinuity.

    ``delta`` keeps ``|1 - exp(-s(x+iy))|^2 < eps`` on ``[-T, T]``; ``M1`` is
    the L2 bound and ``M2 = 4`` bounds ``|1 - exp(-s(x+iy))|^2`` everywhere.
    The check asserts ``modulus(delta)^2 <= (M1 + M2 / 2pi) eps + slack``.
    """
    premise = laplace_equivanish_tail(F, T, ygrid, eps)
    M1 = l2_bound(F).supremum
    const = M1 + 4.0 / TWO_PI
    details = {"T": T, "M1": M1, "M2": 4.0, "premise_measured": premise.supremum}
    if not premise.passed:
        return _vacuous(LAPLACE_VANISH_REVERSE, eps, const, "spectral tail not below eps", **details)
    delta = reverse_shift_width(F.order, T, eps, F.grid.dt)
    if delta is None:
        return _vacuous(LAPLACE_VANISH_REVERSE, eps, const, "admissible width below the grid step", **details)
    concl = exp_equicont_modulus(F, delta, n_shifts, eps)
    details["delta"] = delta
    return ChainCheck(
        LAPLACE_VANISH_REVERSE, eps, concl.supremum ** 2, const,
        _slack(concl.error ** 2, const, premise.error / TWO_PI), True, False, details,
    )


def _first_passing(reports, fallback):
    for r in reports:
        if r.passed:
            return r.scale
    return fallback


def run_chains(F: PegoFamily, eps: float = DEFAULT_EPS, ygrid=None, sweep=None) -> list[ChainCheck]:
    """All five chain checks at scales picked from the diagnosis ladders.

    Each check is run where its premise is met if the ladder reaches such a
    scale; otherwise at the finest ladder scale (where it may be vacuous).
    Root-scale checks (the lemma and the mollifier chain) use ``sqrt(eps)``.
    """
    ygrid = default_ygrid(F.grid) if ygrid is None else ygrid
    ladders = resolve_sweep(sweep, eps, F.grid, ygrid)
    eps_root = math.sqrt(eps)
    lap = scale_sweep(F, LAPLACE_EQUICONT, ladders["laplace"], eps, ygrid=ygrid)
    delta = _first_passing(lap, ladders["laplace"][-1])
    tails = scale_sweep(F, EXP_EQUIVANISH, ladders["time"], eps)
    T_time = _first_passing(tails, ladders["time"][-1])
    spec = scale_sweep(F, LAPLACE_EQUIVANISH, ladders["freq"], eps, ygrid=ygrid)
    T_freq = _first_passing(spec, ladders["freq"][-1])
    jobs = [
        lambda: check_thm_equicont_to_equivanish(F, eps, delta, ygrid),
        lambda: check_thm_bounded_reverse(F, eps, T_time, ygrid),
        lambda: check_lemma_exp_equicont(F, eps_root),
        lambda: check_thm_equicont_to_laplace_vanish(F, eps_root, ygrid),
        lambda: check_thm_laplace_vanish_reverse(F, eps, T_freq, ygrid),
    ]
    return pmap(lambda job: job(), jobs)


__all__ = [
    "COMPACT",
    "INCONCLUSIVE",
    "NON_COMPACT",
    "THEOREM_IDS",
    "ChainCheck",
    "CompactnessVerdict",
    "OracleResult",
    "check_lemma_exp_equicont",
    "check_thm_bounded_reverse",
    "check_thm_equicont_to_equivanish",
    "check_thm_equicont_to_laplace_vanish",
    "check_thm_laplace_vanish_reverse",
    "diagnose",
    "distance_matrix",
    "epsilon_net_oracle",
    "mollifier_cutoff",
    "run_chains",
]
