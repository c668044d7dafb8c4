"""Numpy implementations of the inner loops.

Same signatures and semantics as the compiled ``_kernels`` module; used when
the extension is not built or ``PEGO_LAB_PURE`` is set.
"""
import numpy as np

_BLOCK = 64


def direct_laplace(h, dt, y):
    """Midpoint sum ``dt * sum_j h[j] * exp(-1j * y[k] * t_j)`` with ``t_j = (j + 1/2) dt``."""
    h = np.ascontiguousarray(h, dtype=complex)
    y = np.ascontiguousarray(y, dtype=float)
    t = (np.arange(h.size) + 0.5) * dt
    out = np.empty(y.size, dtype=complex)
    for start in range(0, y.size, _BLOCK):
        yb = y[start:start + _BLOCK]
        out[start:start + _BLOCK] = np.exp(-1j * np.outer(yb, t)) @ h
    return out * dt


def shift_moduli_sq(h, dt, shifts, q, start_at_shift):
    """Shifted-difference energies.

    For each shift ``k = shifts[m]`` returns
    ``dt * sum_{j=j0}^{n+k-1} |h[j] - q[m] * h[j-k]|^2`` where ``h`` is zero
    outside ``0..n-1`` and ``j0`` is ``k`` when ``start_at_shift`` else 0.
    """
    h = np.asarray(h, dtype=complex)
    out = np.empty(len(shifts))
    for m, k in enumerate(shifts):
        k = int(k)
        padded = np.concatenate([h, np.zeros(k, dtype=complex)])
        lagged = np.concatenate([np.zeros(k, dtype=complex), h])
        diff = padded - q[m] * lagged
        if start_at_shift:
            diff = diff[k:]
        out[m] = dt * float(np.sum(diff.real ** 2 + diff.imag ** 2))
    return out


def pairwise_sq_dist(rows, dt):
    """Matrix of ``dt * sum |rows[a] - rows[b]|^2``."""
    rows = np.asarray(rows, dtype=complex)
    m = rows.shape[0]
    out = np.zeros((m, m))
    for a in range(m):
        diff = rows[a + 1:] - rows[a]
        d = dt * np.sum(diff.real ** 2 + diff.imag ** 2, axis=1)
        out[a, a + 1:] = d
        out[a + 1:, a] = d
    return out
