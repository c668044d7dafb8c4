"""Labeled test families and a seeded generator of random ones.

Parametrized families are finite samplings of a parameter interval. Samples
are listed coarse-to-fine (interval endpoints, then successive midpoints) so
that every prefix of the member list is itself a sampling of the whole
interval; the epsilon-net oracle relies on this when it compares prefixes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigurationError
from .halfline import (
    DEFAULT_GRID,
    LABELS,
    HalfLineFunction,
    PegoFamily,
    TimeGrid,
    check_order,
    exponential,
    from_dict,
    indicator,
    modulate,
    scale,
    translate,
    zero,
)


@dataclass(frozen=True, eq=False)
class FamilySpec:
    name: str
    generator: Callable[[object], HalfLineFunction]
    parameter_samples: tuple
    order: float
    label: str = "unknown"
    rationale: str = ""

    def __post_init__(self):
        object.__setattr__(self, "parameter_samples", tuple(self.parameter_samples))
        object.__setattr__(self, "order", check_order(self.order))
        if not self.parameter_samples:
            raise ConfigurationError(f"family {self.name!r} has no parameter samples")
        if self.label not in LABELS:
            raise ConfigurationError(f"unknown label {self.label!r}")
        if self.label != "unknown" and not self.rationale:
            raise ConfigurationError(f"family {self.name!r} is labeled {self.label!r} without a rationale")

    def members(self) -> list[HalfLineFunction]:
        return [self.generator(p) for p in self.parameter_samples]

    def build(self, grid: TimeGrid = DEFAULT_GRID, order: float | None = None) -> PegoFamily:
        x = self.order if order is None else order
        # a label is only meaningful at the order it was derived for
        label = self.label if x == self.order else "unknown"
        return PegoFamily(tuple(self.members()), x, grid, label, self.name, self.parameter_samples)

    def to_dict(self):
        return {
            "name": self.name,
            "order": self.order,
            "label": self.label,
            "rationale": self.rationale,
            "parameters": [_jsonable(p) for p in self.parameter_samples],
            "members": [f.to_dict() for f in self.members()],
        }


def _jsonable(p):
    if isinstance(p, tuple):
        return list(p)
    if isinstance(p, (np.floating, np.integer)):
        return p.item()
    return p


def coarse_to_fine(values) -> list:
    """Reorder a sorted sample list: endpoints first, then midpoints level by level."""
    values = list(values)
    m = len(values)
    if m <= 2:
        return values
    order = [0, m - 1]
    seen = {0, m - 1}
    intervals = [(0, m - 1)]
    while intervals:
        nxt = []
        for lo, hi in intervals:
            if hi - lo < 2:
                continue
            mid = (lo + hi) // 2
            if mid not in seen:
                seen.add(mid)
                order.append(mid)
            nxt += [(lo, mid), (mid, hi)]
        intervals = nxt
    return [values[i] for i in order]


def _translated_box(s):
    return translate(indicator(0.0, 1.0), s)


def _dilated_box(c):
    # sqrt(c) * 1_(0,1)(c t): unit L2 norm, support shrinking to 0
    return scale(indicator(0.0, 1.0 / c), math.sqrt(c))


def _modulated_exp(omega):
    return modulate(exponential(1.0), omega)


def catalog() -> list[FamilySpec]:
    shifts = coarse_to_fine(float(s) for s in range(9))
    return [
        FamilySpec(
            "singleton-exp", exponential, (1.0,), 0.0, "compact",
            "finite set",
        ),
        FamilySpec(
            "indicator-set", lambda ab: indicator(*ab),
            ((0.0, 1.0), (0.0, 1.1), (0.1, 1.0), (0.05, 1.05)), 0.0, "compact",
            "finite set",
        ),
        FamilySpec(
            "exp-scale", exponential,
            coarse_to_fine(round(1.0 + 0.1 * k, 10) for k in range(11)), 0.0, "compact",
            "continuous image of the compact interval a in [1, 2] in L2",
        ),
        FamilySpec(
            "translate-ray-x0", _translated_box, shifts, 0.0, "non-compact",
            "disjoint translates at x = 0 keep pairwise distance sqrt(2); the mass escapes to infinity",
        ),
        FamilySpec(
            "translate-ray-x1", _translated_box, shifts, 1.0, "compact",
            "at x = 1 the weighted norms decay like exp(-2s), so the translates converge to 0",
        ),
        FamilySpec(
            "modulation-ray", _modulated_exp,
            coarse_to_fine(float(w) for w in range(0, 201, 10)), 0.0, "non-compact",
            "spectral mass |L|^2 = 1/(1 + (y - w)^2) escapes to high frequency as w grows",
        ),
        FamilySpec(
            "dilation", _dilated_box,
            coarse_to_fine(float(2 ** k) for k in range(7)), 0.0, "non-compact",
            "unit-norm boxes concentrating at 0; the shift modulus stays near sqrt(2)",
        ),
        FamilySpec(
            "zero", lambda _: zero(), (0,), 0.0, "compact",
            "single point",
        ),
    ]


def family_names() -> list[str]:
    return [spec.name for spec in catalog()] + ["random"]


def get_family(name: str) -> FamilySpec:
    for spec in catalog():
        if spec.name == name:
            return spec
    raise ConfigurationError(f"unknown family {name!r}; known: {', '.join(family_names())}")


def _random_term(rng: np.random.Generator, kind: int) -> dict:
    coeff = float(rng.uniform(-0.5, 0.5))
    if kind == 0:
        base = {"kind": "exponential", "a": float(rng.uniform(0.5, 3.0))}
    elif kind == 1:
        a = float(rng.uniform(0.0, 3.0))
        base = {"kind": "indicator", "a": a, "b": a + float(rng.uniform(0.2, 2.0))}
    else:
        base = {
            "kind": "modulate",
            "omega": float(rng.uniform(-20.0, 20.0)),
            "base": {"kind": "exponential", "a": float(rng.uniform(0.5, 3.0))},
        }
    return {"kind": "scale", "c": coeff, "base": base}


def random_family(seed: int, size: int, kind_mix=(1.0, 1.0, 1.0), order: float = 1.0) -> FamilySpec:
    """Seeded family of random finite sums of exponentials, indicators and modulated exponentials.

    Decay rates, supports, frequencies and coefficients are drawn from bounded
    ranges, so every member is Laplace-Pego of any order ``x >= 0``. The
    parameters are the members' own function specs.
    """
    if int(size) < 1:
        raise ConfigurationError(f"size must be >= 1, got {size!r}")
    mix = np.asarray(kind_mix, dtype=float)
    if mix.shape != (3,) or np.any(mix < 0) or mix.sum() <= 0:
        raise ConfigurationError(f"kind_mix must be three non-negative weights, got {kind_mix!r}")
    rng = np.random.default_rng(int(seed))
    params = []
    for _ in range(int(size)):
        n_terms = int(rng.integers(1, 4))
        kinds = rng.choice(3, size=n_terms, p=mix / mix.sum())
        params.append({"kind": "sum", "terms": [_random_term(rng, int(k)) for k in kinds]})
    return FamilySpec(f"random-{int(seed)}-{int(size)}", from_dict, tuple(params), order)


def family_from_dsl(doc, order: float | None = None, name: str = "dsl") -> FamilySpec:
    """Family from a DSL document: one function, a list of functions, or ``{"members": [...], ...}``."""
    if isinstance(doc, dict) and "members" in doc:
        members = doc["members"]
        order = doc.get("order", 0.0) if order is None else order
        label = doc.get("label", "unknown")
        rationale = doc.get("rationale", "user supplied" if label != "unknown" else "")
        name = doc.get("name", name)
    else:
        members = doc if isinstance(doc, list) else [doc]
        order = 0.0 if order is None else order
        label, rationale = "unknown", ""
    if not isinstance(members, list) or not members:
        raise ConfigurationError("DSL family needs a non-empty member list")
    for m in members:
        from_dict(m)
    return FamilySpec(name, from_dict, tuple(members), order, label, rationale)


__all__ = [
    "FamilySpec",
    "catalog",
    "coarse_to_fine",
    "family_from_dsl",
    "family_names",
    "get_family",
    "random_family",
]
