"""Time the compiled kernels against the numpy fallback.

    python bench/bench_kernels.py [--repeat N]

Prints one line per kernel with the best-of-N time of each backend and the
speedup. Exits 1 if the extension is not built.
"""
import argparse
import sys
import timeit

import numpy as np

from pegolab import _kernels_py

try:
    from pegolab import _kernels
except ImportError:
    _kernels = None


def cases(rng):
    n, dt = 40000, 1e-3
    h = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = np.linspace(-200.0, 200.0, 512)
    ks = np.unique(np.rint(np.geomspace(1, 400, 8)).astype(np.int64))
    q = np.exp(-0.5 * ks * dt).astype(complex)
    rows = rng.standard_normal((21, n)) + 0j
    return {
        "direct_laplace (n=40000, 512 y)": lambda m: m.direct_laplace(h, dt, y),
        "shift_moduli_sq (n=40000, 8 shifts)": lambda m: m.shift_moduli_sq(h, dt, ks, q, False),
        "pairwise_sq_dist (21 x 40000)": lambda m: m.pairwise_sq_dist(rows, dt),
    }


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; run `pip install --no-build-isolation -e .`", file=sys.stderr)
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':40s} {'cython [s]':>11s} {'python [s]':>11s} {'speedup':>8s}")
    for name, fn in cases(rng).items():
        np.testing.assert_allclose(fn(_kernels), fn(_kernels_py), rtol=1e-8, atol=1e-8)
        t_c = min(timeit.repeat(lambda: fn(_kernels), number=1, repeat=args.repeat))
        t_p = min(timeit.repeat(lambda: fn(_kernels_py), number=1, repeat=args.repeat))
        print(f"{name:40s} {t_c:11.4f} {t_p:11.4f} {t_p / t_c:8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
