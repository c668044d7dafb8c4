"""Acceptance criteria, one test each, each printing a PASS/FAIL line.

Run standalone with ``python tests/test_acceptance.py`` for just the summary.
"""
import math
import time

import pytest

from pegolab.cli import run
from pegolab.criteria import exp_equicont_modulus, exp_equivanish_tail, laplace_equivanish_tail
from pegolab.diagnosis import diagnose, run_chains
from pegolab.families import catalog
from pegolab.halfline import DEFAULT_GRID, PegoFamily, exponential, indicator
from pegolab.transform import convolution_theorem_check, plancherel_check, riemann_lebesgue_profile


def criterion_1():
    worst, slowest = 0.0, 0.0
    for a in (1.0, 2.0):
        for x in (0.0, 0.5, 1.0):
            t0 = time.perf_counter()
            r = plancherel_check(exponential(a), x)
            slowest = max(slowest, time.perf_counter() - t0)
            exact = 1 / (2 * (a + x))
            worst = max(worst, abs(r.lhs - exact) / exact, abs(r.rhs - exact) / exact)
    return worst <= 1e-3 and slowest < 5.0, f"max rel err {worst:.2e} (<= 1e-3), slowest case {slowest:.2f}s (< 5s)"


def criterion_2():
    t0 = time.perf_counter()
    gaps = [
        convolution_theorem_check(indicator(0, 1), indicator(0, 1), 1.0),
        convolution_theorem_check(exponential(1), exponential(2), 1.0),
    ]
    dt = time.perf_counter() - t0
    return max(gaps) <= 1e-4 and dt < 10.0, f"max gaps {gaps[0]:.2e}, {gaps[1]:.2e} (<= 1e-4) in {dt:.2f}s (< 10s)"


def criterion_3():
    Ys = (1e2, 1e3, 1e4)
    prof = riemann_lebesgue_profile(indicator(1, 2), 0.0, Ys)
    bounded = all(s <= 2 / Y for s, Y in zip(prof, Ys))
    decreasing = prof[0] > prof[1] > prof[2]
    return bounded and decreasing, "band sups " + ", ".join(f"{s:.4e}<=2/{Y:g}" for s, Y in zip(prof, Ys))


def _family(members):
    return PegoFamily(tuple(members), 0.0, DEFAULT_GRID)


def criterion_4():
    a = exp_equivanish_tail(_family([exponential(1.0)]), 1.0).supremum
    b = exp_equicont_modulus(_family([indicator(0, 1)]), 0.02).supremum
    c = laplace_equivanish_tail(_family([exponential(1.0)]), 10.0).supremum
    ea = abs(a - math.exp(-2) / 2)
    eb = abs(b - 0.2)
    ec = abs(c - 2 * (math.pi / 2 - math.atan(10)))
    ok = ea <= 1e-6 and eb <= 1e-3 and ec <= 1e-3
    return ok, f"errors {ea:.1e} (<= 1e-6), {eb:.1e} (<= 1e-3), {ec:.1e} (<= 1e-3)"


def criterion_5():
    t0 = time.perf_counter()
    total, bad = 0, []
    for spec in catalog():
        for c in run_chains(spec.build()):
            total += 1
            if not c.holds:
                bad.append(f"{spec.name}:{c.theorem_id}")
    dt = time.perf_counter() - t0
    detail = f"{total - len(bad)}/{total} chain checks hold in {dt:.1f}s (< 120s)"
    if bad:
        detail += "; violated: " + ", ".join(bad)
    return not bad and dt < 120.0, detail


def criterion_6():
    wrong = []
    labeled = [s for s in catalog() if s.label != "unknown"]
    verdicts = {}
    for spec in labeled:
        v = diagnose(spec.build())
        verdicts[spec.name] = v.verdict
        routes = v.route_verdicts
        if not (v.agreement and routes["laplace"] == routes["rk"] == routes["oracle"] == spec.label):
            wrong.append(f"{spec.name}: {routes}")
    flip = verdicts.get("translate-ray-x0") == "non-compact" and verdicts.get("translate-ray-x1") == "compact"
    detail = f"{len(labeled) - len(wrong)}/{len(labeled)} labeled families agree three ways; translate flip {flip}"
    if wrong:
        detail += "; " + "; ".join(wrong)
    return not wrong and flip, detail


def criterion_7(tmpdir):
    outs = []
    for k in range(2):
        path = f"{tmpdir}/run{k}.json"
        code = run(["diagnose", "--family", "random", "--seed", "1", "--size", "20", "--out", path])
        with open(path, "rb") as fh:
            outs.append((code, fh.read()))
    same = outs[0][1] == outs[1][1]
    return same and outs[0][0] == outs[1][0] == 0, f"byte-identical {same}, {len(outs[0][1])} bytes"


NAMES = {
    1: "Plancherel",
    2: "Convolution theorem",
    3: "Riemann-Lebesgue",
    4: "Criterion analytics",
    5: "Chain checks",
    6: "Main-theorem classification",
    7: "Determinism",
}


def _line(n, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] {n}. {NAMES[n]}: {detail}"


@pytest.fixture
def announce(capsys):
    def _announce(n, ok, detail):
        with capsys.disabled():
            print("\n" + _line(n, ok, detail))
    return _announce


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_criterion(n, announce):
    ok, detail = globals()[f"criterion_{n}"]()
    announce(n, ok, detail)
    assert ok, detail


def test_criterion_7(announce, tmp_path):
    ok, detail = criterion_7(tmp_path)
    announce(7, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    import sys
    import tempfile

    results = []
    for n in range(1, 8):
        if n == 7:
            with tempfile.TemporaryDirectory() as d:
                ok, detail = criterion_7(d)
        else:
            ok, detail = globals()[f"criterion_{n}"]()
        print(_line(n, ok, detail))
        results.append(ok)
    sys.exit(0 if all(results) else 1)
