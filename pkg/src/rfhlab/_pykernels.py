"""Pure numpy implementations of the compiled kernels in ``_ckernels.pyx``.

Each table function mirrors the operation order of its compiled twin so the
two backends agree to a few ulps. ``cms_symmetric`` has no compiled twin and
serves both backends.
"""

import math

import numpy as np

PI_M14 = math.pi ** -0.25


def psi_table(nmax, t):
    """Orthonormal Hermite functions psi_0..psi_nmax at points ``t``.

    Rows are orders, columns are points. Uses the normalised three-term
    recurrence so nothing overflows for moderate orders.
    """
    t = np.ascontiguousarray(t, dtype=np.float64)
    out = np.empty((nmax + 1, t.size))
    out[0] = PI_M14 * np.exp(-0.5 * t * t)
    if nmax >= 1:
        out[1] = (t * math.sqrt(2.0)) * out[0]
    for n in range(1, nmax):
        a = math.sqrt(2.0 / (n + 1.0))
        b = math.sqrt(n / (n + 1.0))
        out[n + 1] = (t * a) * out[n] - b * out[n - 1]
    return out


def hermite_table(nmax, t):
    """Physicists' Hermite polynomials H_0..H_nmax at points ``t``."""
    t = np.ascontiguousarray(t, dtype=np.float64)
    out = np.empty((nmax + 1, t.size))
    out[0] = 1.0
    if nmax >= 1:
        out[1] = 2.0 * t
    with np.errstate(over="ignore", invalid="ignore"):
        for n in range(1, nmax):
            out[n + 1] = (2.0 * t) * out[n] - (2.0 * n) * out[n - 1]
    return out


def psi_series(coeffs, t):
    """Evaluate ``sum_k coeffs[k] * psi_k(t)``."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    t = np.ascontiguousarray(t, dtype=np.float64)
    if coeffs.size == 0:
        return np.zeros(t.size)
    p0 = PI_M14 * np.exp(-0.5 * t * t)
    acc = coeffs[0] * p0
    if coeffs.size > 1:
        p1 = (t * math.sqrt(2.0)) * p0
        acc = acc + coeffs[1] * p1
        for n in range(1, coeffs.size - 1):
            p2 = (t * math.sqrt(2.0 / (n + 1.0))) * p1 - math.sqrt(n / (n + 1.0)) * p0
            acc = acc + coeffs[n + 1] * p2
            p0, p1 = p1, p2
    return acc


def cms_symmetric(alpha, u, w):
    """Chambers-Mallows-Stuck map for a symmetric stable law, unit scale.

    ``u`` is uniform on (-pi/2, pi/2), ``w`` is standard exponential.
    """
    u = np.asarray(u, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    inv_a = 1.0 / alpha
    expo = (1.0 - alpha) / alpha
    return (np.sin(alpha * u) / np.cos(u) ** inv_a
            * (np.cos((1.0 - alpha) * u) / w) ** expo)
