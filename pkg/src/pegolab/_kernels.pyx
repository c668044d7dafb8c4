# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; see ``_kernels_py`` for the reference semantics."""
import numpy as np

from libc.math cimport cos, sin

# re-seed the rotation recurrence this often to bound drift
DEF RESEED = 512


def direct_laplace(h, double dt, y):
    cdef const double complex[::1] hv = np.ascontiguousarray(h, dtype=complex)
    cdef const double[::1] yv = np.ascontiguousarray(y, dtype=float)
    cdef Py_ssize_t n = hv.shape[0], m = yv.shape[0]
    out = np.empty(m, dtype=complex)
    cdef double complex[::1] ov = out
    cdef Py_ssize_t j, k
    cdef double yk, re, im, cr, ci, rr, ri, tmp, hr, hi, t
    with nogil:
        for k in range(m):
            yk = yv[k]
            re = 0.0
            im = 0.0
            rr = cos(yk * dt)
            ri = -sin(yk * dt)
            cr = 1.0
            ci = 0.0
            for j in range(n):
                if j % RESEED == 0:
                    t = (j + 0.5) * dt
                    cr = cos(yk * t)
                    ci = -sin(yk * t)
                hr = hv[j].real
                hi = hv[j].imag
                re = re + hr * cr - hi * ci
                im = im + hr * ci + hi * cr
                tmp = cr * rr - ci * ri
                ci = cr * ri + ci * rr
                cr = tmp
            ov[k] = (re + 1j * im) * dt
    return out


def shift_moduli_sq(h, double dt, shifts, q, bint start_at_shift):
    cdef const double complex[::1] hv = np.ascontiguousarray(h, dtype=complex)
    cdef const long long[::1] sv = np.ascontiguousarray(shifts, dtype=np.int64)
    cdef const double complex[::1] qv = np.ascontiguousarray(q, dtype=complex)
    cdef Py_ssize_t n = hv.shape[0], ns = sv.shape[0]
    out = np.empty(ns, dtype=float)
    cdef double[::1] ov = out
    cdef Py_ssize_t m, j, k, j0
    cdef double complex a, b, d
    cdef double acc
    with nogil:
        for m in range(ns):
            k = sv[m]
            j0 = k if start_at_shift else 0
            acc = 0.0
            for j in range(j0, n + k):
                a = hv[j] if j < n else 0.0
                b = hv[j - k] if j >= k else 0.0
                d = a - qv[m] * b
                acc = acc + d.real * d.real + d.imag * d.imag
            ov[m] = acc * dt
    return out


def pairwise_sq_dist(rows, double dt):
    cdef const double complex[:, ::1] rv = np.ascontiguousarray(rows, dtype=complex)
    cdef Py_ssize_t m = rv.shape[0], n = rv.shape[1]
    out = np.zeros((m, m), dtype=float)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t a, b, j
    cdef double complex d
    cdef double acc
    with nogil:
        for a in range(m):
            for b in range(a + 1, m):
                acc = 0.0
                for j in range(n):
                    d = rv[a, j] - rv[b, j]
                    acc = acc + d.real * d.real + d.imag * d.imag
                ov[a, b] = acc * dt
                ov[b, a] = acc * dt
    return out
