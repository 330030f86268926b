# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Must stay numerically in step with ``_pykernels``."""

import numpy as np

from libc.math cimport exp, sqrt

cdef double PI_M14 = 0.7511255444649425  # pi ** -0.25


def psi_table(int nmax, const double[::1] t):
    cdef Py_ssize_t m = t.shape[0]
    cdef Py_ssize_t j
    cdef int n
    cdef double a, b
    out = np.empty((nmax + 1, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    for j in range(m):
        o[0, j] = PI_M14 * exp(-0.5 * t[j] * t[j])
    if nmax >= 1:
        a = sqrt(2.0)
        for j in range(m):
            o[1, j] = (t[j] * a) * o[0, j]
    for n in range(1, nmax):
        a = sqrt(2.0 / (n + 1.0))
        b = sqrt(n / (n + 1.0))
        for j in range(m):
            o[n + 1, j] = (t[j] * a) * o[n, j] - b * o[n - 1, j]
    return out


def hermite_table(int nmax, const double[::1] t):
    cdef Py_ssize_t m = t.shape[0]
    cdef Py_ssize_t j
    cdef int n
    out = np.empty((nmax + 1, m), dtype=np.float64)
    cdef double[:, ::1] o = out
    for j in range(m):
        o[0, j] = 1.0
    if nmax >= 1:
        for j in range(m):
            o[1, j] = 2.0 * t[j]
    for n in range(1, nmax):
        for j in range(m):
            o[n + 1, j] = (2.0 * t[j]) * o[n, j] - (2.0 * n) * o[n - 1, j]
    return out


def psi_series(const double[::1] coeffs, const double[::1] t):
    """Sum coeffs[k] * psi_k(t) without materialising the table."""
    cdef Py_ssize_t m = t.shape[0]
    cdef Py_ssize_t nc = coeffs.shape[0]
    cdef Py_ssize_t j, n
    cdef double a, b, c, p2
    out = np.zeros(m, dtype=np.float64)
    if nc == 0:
        return out
    # order-outer sweep over rolling rows so the point loop vectorises
    rp0 = np.empty(m, dtype=np.float64)
    rp1 = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef double[::1] p0 = rp0
    cdef double[::1] p1 = rp1
    c = coeffs[0]
    for j in range(m):
        p0[j] = PI_M14 * exp(-0.5 * t[j] * t[j])
        o[j] = c * p0[j]
    if nc == 1:
        return out
    a = sqrt(2.0)
    c = coeffs[1]
    for j in range(m):
        p1[j] = (t[j] * a) * p0[j]
        o[j] = o[j] + c * p1[j]
    for n in range(1, nc - 1):
        a = sqrt(2.0 / (n + 1.0))
        b = sqrt(n / (n + 1.0))
        c = coeffs[n + 1]
        for j in range(m):
            p2 = (t[j] * a) * p1[j] - b * p0[j]
            o[j] = o[j] + c * p2
            p0[j] = p1[j]
            p1[j] = p2
    return out
