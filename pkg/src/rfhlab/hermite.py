"""Hermite polynomials, Hermite-Gaussian functions and Gauss-Hermite quadrature.

Physicists' convention throughout: weight ``exp(-t**2)``, ``H_1(t) = 2t`` and
``int H_m H_n exp(-t**2) dt = delta_mn * 2**n * n! * sqrt(pi)``.

Two flavours of the Hermite-Gaussian function are offered:

``PAPER_LITERAL``
    ``phi_n(t) = H_n(t) exp(-t**2) / sqrt(2**n sqrt(pi) n!)``. This is the
    default and is what the random coefficients and the kernel identities use.
``HALF_WEIGHT``
    ``phi_n(t) = H_n(t) exp(-t**2/2) / sqrt(2**n sqrt(pi) n!)``, the
    L2-orthonormal Hermite function.

Both are evaluated through the orthonormal recurrence for
``psi_n = H_n exp(-t**2/2) / norm_n`` so no intermediate overflows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln

from . import kernels

SQRT_PI = math.sqrt(math.pi)


class WeightConvention(str, enum.Enum):
    PAPER_LITERAL = "paper"
    HALF_WEIGHT = "half"


class QuadratureKind(str, enum.Enum):
    GAUSS_HERMITE = "gauss-hermite"
    TANH_SINH = "tanh-sinh"


class CapacityError(ValueError):
    """Requested order exceeds a basis' ``max_order``."""


class EvaluationError(ValueError):
    """A function returned a non-finite value at a quadrature node or grid point."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


def log_norms(max_order):
    """``log(sqrt(2**n sqrt(pi) n!))`` for n = 0..max_order."""
    n = np.arange(max_order + 1, dtype=np.float64)
    return 0.5 * (n * math.log(2.0) + 0.5 * math.log(math.pi) + gammaln(n + 1.0))


def _as_float_array(t):
    return np.ascontiguousarray(np.atleast_1d(np.asarray(t, dtype=np.float64)).ravel())


def _restore_shape(values, t):
    t = np.asarray(t)
    if t.ndim == 0:
        return values.reshape(values.shape[:-1]) if values.ndim > 1 else float(values[0])
    return values.reshape(values.shape[:-1] + t.shape)


def hermite_poly(n, t):
    """Physicists' Hermite polynomial ``H_n(t)`` by the three-term recurrence.

    Values that overflow double precision come back as signed infinities
    rather than NaN.
    """
    if n < 0:
        raise ValueError(f"order must be non-negative, got {n}")
    x = _as_float_array(t)
    vals = kernels.hermite_table(int(n), x)[n]
    bad = ~np.isfinite(vals)
    if bad.any():
        # leading term 2**n t**n dominates once the recurrence overflows
        sign = np.where((np.signbit(x[bad])) & (n % 2 == 1), -1.0, 1.0)
        vals = vals.copy()
        vals[bad] = sign * np.inf
    return _restore_shape(vals, t)


@dataclass(frozen=True, eq=False)
class HermiteBasis:
    """Normalisation constants and weight convention for orders 0..max_order.

    ``log_norms[n]`` holds ``log(sqrt(2**n sqrt(pi) n!))``; the norms themselves
    are only exponentiated where a ratio cannot be formed in log space.
    """

    max_order: int
    convention: WeightConvention = WeightConvention.PAPER_LITERAL
    log_norms: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.max_order < 0:
            raise ValueError(f"max_order must be non-negative, got {self.max_order}")
        object.__setattr__(self, "convention", WeightConvention(self.convention))
        ln = log_norms(self.max_order)
        ln.setflags(write=False)
        object.__setattr__(self, "log_norms", ln)

    @property
    def norms(self):
        return np.exp(self.log_norms)

    def norm_sq(self, n):
        """``2**n n! sqrt(pi)``."""
        self._check(n)
        return math.exp(2.0 * self.log_norms[n])

    def _check(self, n):
        if n < 0 or n > self.max_order:
            raise CapacityError(f"order {n} outside basis capacity 0..{self.max_order}")

    def residual_factor(self, t):
        """Gaussian factor that turns ``psi_n`` into ``phi_n`` under this convention."""
        t = np.asarray(t, dtype=np.float64)
        if self.convention is WeightConvention.PAPER_LITERAL:
            return np.exp(-0.5 * t * t)
        return np.ones_like(t)

    def psi_table(self, t, nmax=None):
        nmax = self.max_order if nmax is None else nmax
        self._check(nmax)
        return kernels.psi_table(nmax, _as_float_array(t))

    def phi_table(self, t, nmax=None):
        """Rows ``phi_0..phi_nmax`` evaluated at the flattened points ``t``."""
        x = _as_float_array(t)
        table = self.psi_table(x, nmax)
        if self.convention is WeightConvention.PAPER_LITERAL:
            table *= np.exp(-0.5 * x * x)
        return table

    def phi(self, n, t):
        self._check(n)
        return _restore_shape(self.phi_table(t, n)[n], t)

    def orthonormal_poly_table(self, t, nmax=None):
        """``H_k(t) / norm_k`` for k = 0..nmax, formed without large intermediates."""
        x = _as_float_array(t)
        return self.psi_table(x, nmax) * np.exp(0.5 * x * x)


def phi(n, t, convention=WeightConvention.PAPER_LITERAL):
    """Normalized Hermite-Gaussian function of order ``n``."""
    return _basis(max(int(n), 0), WeightConvention(convention)).phi(n, t)


@lru_cache(maxsize=32)
def _basis(max_order, convention):
    return HermiteBasis(max_order, convention)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    order: int
    kind: QuadratureKind = QuadratureKind.GAUSS_HERMITE
    # weights * exp(nodes**2); Gauss-Hermite only, avoids overflow in the tails
    scaled_weights: np.ndarray = None

    def integrate(self, g):
        """``sum_i w_i g(x_i)`` with a finiteness check on ``g``."""
        vals = _eval_at_nodes(g, self.nodes)
        return float(np.dot(self.weights, vals))


def _eval_at_nodes(g, nodes):
    vals = np.broadcast_to(np.asarray(g(nodes), dtype=np.float64), nodes.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        node = float(nodes[np.argmax(bad)])
        raise EvaluationError(f"non-finite function value at node {node!r}", node=node)
    return vals


@lru_cache(maxsize=64)
def gauss_hermite_rule(m):
    """Gauss-Hermite rule of order ``m`` for ``int g(t) exp(-t**2) dt``.

    Nodes come from the Jacobi matrix eigenvalues (Golub-Welsch) and are
    polished by Newton steps on the orthonormal recurrence. Weights use the
    Christoffel sum ``exp(-x**2) / sum_k psi_k(x)**2``, which keeps full
    relative accuracy in the tails where eigenvector components do not.
    """
    if not 1 <= m <= 256:
        raise ValueError(f"Gauss-Hermite order must be in 1..256, got {m}")
    if m == 1:
        nodes = np.array([0.0])
        weights = np.array([SQRT_PI])
        scaled = weights.copy()
    else:
        off = np.sqrt(np.arange(1, m) / 2.0)
        x = eigh_tridiagonal(np.zeros(m), off, eigvals_only=True)
        x = 0.5 * (x - x[::-1])
        for _ in range(3):
            x = x - _newton_step(m, x)
        x = 0.5 * (x - x[::-1])
        if m % 2 == 1:
            x[m // 2] = 0.0
        psi = kernels.psi_table(m - 1, x)
        scaled = 1.0 / np.sum(psi * psi, axis=0)
        scaled = 0.5 * (scaled + scaled[::-1])
        weights = np.exp(-x * x) * scaled
        nodes = x
    for arr in (nodes, weights, scaled):
        arr.setflags(write=False)
    return QuadratureRule(nodes, weights, m, QuadratureKind.GAUSS_HERMITE, scaled)


def _newton_step(m, x):
    # psi_m / psi_m' with psi_m' = sqrt(2m) psi_{m-1} - x psi_m
    psi = kernels.psi_table(m, x)
    deriv = math.sqrt(2.0 * m) * psi[m - 1] - x * psi[m]
    return psi[m] / deriv


def tanh_sinh_rule(a, b, level=6):
    """Double-exponential rule on the finite interval ``[a, b]``.

    Step ``2**-level``; the abscissae are truncated once the weights drop
    below 1e-300.
    """
    if not b > a:
        raise ValueError("tanh-sinh rule needs a < b")
    h = 2.0 ** -level
    kmax = int(math.ceil(4.0 / h))
    s = h * np.arange(-kmax, kmax + 1)
    u = 0.5 * math.pi * np.sinh(s)
    cu = np.cosh(u)
    y = np.tanh(u)
    w = h * 0.5 * math.pi * np.cosh(s) / (cu * cu)
    keep = (w > 1e-300) & (np.abs(y) < 1.0)
    half = 0.5 * (b - a)
    nodes = 0.5 * (a + b) + half * y[keep]
    weights = half * w[keep]
    return QuadratureRule(nodes, weights, int(keep.sum()), QuadratureKind.TANH_SINH)


def weighted_inner_product(g, h, rule):
    """``sum_i w_i g(x_i) h(x_i)``, approximating ``int g h exp(-t**2) dt``."""
    gv = _eval_at_nodes(g, rule.nodes)
    hv = _eval_at_nodes(h, rule.nodes)
    return math.fsum(rule.weights * gv * hv)
