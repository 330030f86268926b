"""Random Fourier-Hermite series and transforms.

Ingredients for a test function ``f`` and one process path ``omega``:

* ``c_n = int f(t) phi_n(t) dt``                  (:func:`coefficients`)
* ``A_n(omega) = int phi_n(t) dX(t, omega)``      (:func:`random_coeffs`)
* eigenvalues ``lambda_n``: 1, ``exp(-i n pi)`` or ``exp(-i pi Rand(n))``

and the partial sums ``S_n(y) = sum_{k<=n} c_k lambda_k A_k s_k(y)``.

The factor ``s_k(y)`` is selected by :class:`SeriesBasis`. ``LITERAL`` uses
the bare polynomial ``H_k(y)``. That series has terms growing like
``sqrt(k!)`` for smooth ``f`` and does not converge, so convergence checks
default to ``ORTHONORMAL``, which uses ``H_k(y) / norm_k``. In both cases
the kernel ``f_n(y, t) = sum_k c_k lambda_k s_k(y) H_k(t) / norm_k`` satisfies
``S_n(y) = int f_n(y, t) w(t) dX(t)`` exactly on a discrete path, where
``w`` is the residual Gaussian of the weight convention.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._rng import format_seed, make_rng
from .hermite import HermiteBasis, WeightConvention, gauss_hermite_rule

MIN_SPAN = 6.0


class EigenMode(str, enum.Enum):
    NONE = "none"
    PAPER = "paper"
    RANDOMIZED = "random"


class SeriesBasis(str, enum.Enum):
    LITERAL = "literal"
    ORTHONORMAL = "orthonormal"


def _default_rule(N):
    return gauss_hermite_rule(min(256, max(64, N + 16)))


def _node_values(f, rule):
    vals = np.asarray(f(rule.nodes), dtype=np.float64)
    if not np.all(np.isfinite(vals)):
        from .hermite import EvaluationError
        bad = float(rule.nodes[np.argmax(~np.isfinite(vals))])
        raise EvaluationError(f"non-finite value at node {bad!r}", node=bad)
    return np.broadcast_to(vals, rule.nodes.shape)


def coefficients(f, N, basis, rule=None):
    """Fourier-Hermite coefficients ``c_0..c_N`` by Gauss-Hermite quadrature.

    Under ``PAPER_LITERAL`` this is ``int f H_n exp(-t**2) dt / norm_n``;
    under ``HALF_WEIGHT`` it is ``int f psi_n dt``.
    """
    if N > basis.max_order:
        raise ValueError(f"order {N} exceeds basis capacity {basis.max_order}")
    rule = _default_rule(N) if rule is None else rule
    if rule.order < N + 16:
        raise ValueError(f"quadrature order {rule.order} too low for N={N}; need >= {N + 16}")
    x = rule.nodes
    g = _node_values(f, rule) * rule.scaled_weights
    if basis.convention is WeightConvention.PAPER_LITERAL:
        g = g * np.exp(-0.5 * x * x)
    return _symmetric_project(N, x, g)


def _symmetric_project(N, x, g):
    """``psi_table(N, x) @ g`` for nodes symmetric about 0.

    Mirror nodes are paired before summing, so a parity-definite ``g`` yields
    coefficients of the opposite parity that are exactly zero.
    """
    m = x.size
    half = m // 2
    pos = x[m - half:]
    even = g[m - half:] + g[:half][::-1]
    odd = g[m - half:] - g[:half][::-1]
    table = kernels.psi_table(N, pos)
    out = np.where(np.arange(N + 1) % 2 == 0, table @ even, table @ odd)
    if m % 2 == 1:
        out = out + kernels.psi_table(N, x[half:half + 1])[:, 0] * g[half]
    return out


def check_span(path, half_width=MIN_SPAN):
    tol = 1e-9
    if path.grid[0] > -half_width + tol or path.grid[-1] < half_width - tol:
        raise ValueError(
            f"path covers [{path.grid[0]:g}, {path.grid[-1]:g}]; "
            f"random coefficients need at least [-{half_width:g}, {half_width:g}]")


def random_coeffs(basis, N, path, table=None):
    """``A_n = sum_i phi_n(t_i) dX_i`` for n = 0..N on one path.

    ``table`` may carry a precomputed ``basis.phi_table(path.grid[:-1], N)``.
    """
    check_span(path)
    if table is None:
        table = basis.phi_table(path.grid[:-1], N)
    return table[: N + 1] @ path.increments


def eigenvalues(mode, N, rand_seq=None):
    """Unit-modulus eigenvalues ``lambda_0..lambda_N`` for ``mode``."""
    mode = EigenMode(mode)
    n = np.arange(N + 1)
    if mode is EigenMode.NONE:
        return np.ones(N + 1, dtype=np.complex128)
    if mode is EigenMode.PAPER:
        # exp(-i n pi) evaluated exactly
        return np.where(n % 2 == 0, 1.0, -1.0).astype(np.complex128)
    rand_seq = _check_rand_seq(rand_seq, N)
    return np.exp(-1j * math.pi * rand_seq)


def _check_rand_seq(rand_seq, N):
    if rand_seq is None:
        raise ValueError("randomized eigenvalues need a Rand(n) sequence")
    r = np.asarray(rand_seq, dtype=np.float64)
    if r.size < N + 1:
        raise ValueError(f"need {N + 1} random numbers, got {r.size}")
    r = r[: N + 1]
    if np.any((r < 0.0) | (r >= 1.0)):
        raise ValueError("Rand(n) values must lie in [0, 1)")
    return r


def draw_rand_seq(N, seed):
    """I.i.d. uniform ``Rand(0..N)`` on [0, 1) from ``seed``."""
    return make_rng(seed).random(N + 1)


def series_factors(basis, y, n, series_basis=SeriesBasis.ORTHONORMAL):
    """``s_k(y)`` for k = 0..n as a 1-d array."""
    y = float(y)
    if SeriesBasis(series_basis) is SeriesBasis.LITERAL:
        return kernels.hermite_table(n, np.array([y]))[:, 0]
    return basis.orthonormal_poly_table(np.array([y]), n)[:, 0]


@dataclass(frozen=True, eq=False)
class RfhExpansion:
    """Coefficients, random coefficients and eigenvalues tied to one path."""

    order: int
    coeffs: np.ndarray
    random_coeffs: np.ndarray
    eigen_mode: EigenMode
    eigenvalues: np.ndarray
    basis: HermiteBasis
    path_seed: object
    series_basis: SeriesBasis = SeriesBasis.ORTHONORMAL
    rand_seq: np.ndarray = None

    def __post_init__(self):
        if not np.allclose(np.abs(self.eigenvalues), 1.0, rtol=0, atol=1e-12):
            raise ValueError("eigenvalues must have unit modulus")

    @property
    def is_complex(self):
        return self.eigen_mode is EigenMode.RANDOMIZED

    def _check_order(self, n):
        if not 0 <= n <= self.order:
            raise IndexError(f"order {n} outside 0..{self.order}")

    def term_weights(self, y, n):
        """``c_k lambda_k s_k(y)`` for k = 0..n."""
        self._check_order(n)
        s = series_factors(self.basis, y, n, self.series_basis)
        w = self.coeffs[: n + 1] * s
        if self.eigen_mode is EigenMode.NONE:
            return w
        lam = self.eigenvalues[: n + 1]
        return w * lam.real if not self.is_complex else w * lam

    def _out(self, z):
        return complex(z) if self.is_complex else float(np.real(z))

    def partial_sum(self, y, n):
        """``S_n(y) = sum_{k<=n} c_k lambda_k A_k s_k(y)``."""
        return self._out(np.dot(self.term_weights(y, n), self.random_coeffs[: n + 1]))

    def partial_sums(self, y, orders):
        """``S_n(y)`` for every ``n`` in ``orders`` from one cumulative pass."""
        orders = list(orders)
        terms = self.term_weights(y, max(orders)) * self.random_coeffs[: max(orders) + 1]
        return np.cumsum(terms)[orders]

    def kernel_fn(self, y, t, n):
        """``f_n(y, t) = sum_k c_k lambda_k s_k(y) H_k(t) / norm_k``."""
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        w = self.term_weights(y, n)
        growth = np.exp(0.5 * t_arr * t_arr)
        vals = self._series(w, t_arr) * growth
        if np.ndim(t) == 0:
            return self._out(vals[0])
        return vals

    @staticmethod
    def _series(w, t):
        if np.iscomplexobj(w):
            return kernels.psi_series(np.ascontiguousarray(w.real), t) + \
                1j * kernels.psi_series(np.ascontiguousarray(w.imag), t)
        return kernels.psi_series(np.ascontiguousarray(w), t)

    def target_integrand(self, y, n_kernel, t):
        """``f_n(y, t) * w(t)`` where ``w`` completes ``H_k / norm_k`` to ``phi_k``."""
        t = np.asarray(t, dtype=np.float64)
        w = self.term_weights(y, n_kernel)
        psi_sum = self._series(w, t)
        if self.basis.convention is WeightConvention.PAPER_LITERAL:
            return psi_sum * np.exp(-0.5 * t * t)
        return psi_sum

    def target_integral(self, y, n_kernel, path):
        """``int f_n(y, t) w(t) dX(t)`` on ``path`` by a left-endpoint sum."""
        check_span(path)
        g = self.target_integrand(y, n_kernel, path.grid[:-1])
        return self._out(np.dot(g, path.increments))

    def to_csv(self):
        buf = io.StringIO()
        buf.write(f"# eigen_mode={self.eigen_mode.value}\n")
        buf.write(f"# series_basis={self.series_basis.value}\n")
        buf.write(f"# convention={self.basis.convention.value}\n")
        buf.write(f"# path_seed={format_seed(self.path_seed)}\n")
        buf.write("n,c_n,A_n,lambda_re,lambda_im\n")
        for k in range(self.order + 1):
            lam = self.eigenvalues[k]
            buf.write(f"{k},{float(self.coeffs[k])!r},{float(self.random_coeffs[k])!r},"
                      f"{float(lam.real)!r},{float(lam.imag)!r}\n")
        return buf.getvalue()

    def trace_csv(self, ys, orders):
        buf = io.StringIO()
        buf.write("n,y,S_n\n")
        for y in ys:
            for n in orders:
                buf.write(f"{n},{float(y)!r},{self.partial_sum(y, n)!r}\n")
        return buf.getvalue()


def build_expansion(f, N, path, basis=None, eigen_mode=EigenMode.NONE, rand_seq=None,
                    series_basis=SeriesBasis.ORTHONORMAL, rule=None, coeffs=None,
                    table=None):
    """Assemble an :class:`RfhExpansion` for ``f`` on ``path``."""
    basis = HermiteBasis(N) if basis is None else basis
    eigen_mode = EigenMode(eigen_mode)
    c = coefficients(f, N, basis, rule) if coeffs is None else np.asarray(coeffs)[: N + 1]
    A = random_coeffs(basis, N, path, table)
    if eigen_mode is EigenMode.RANDOMIZED:
        rand_seq = _check_rand_seq(rand_seq, N)
    lam = eigenvalues(eigen_mode, N, rand_seq)
    return RfhExpansion(N, c, A, eigen_mode, lam, basis, path.seed,
                        SeriesBasis(series_basis), rand_seq)


@dataclass(frozen=True, eq=False)
class RandomizedRFT:
    """``t -> sum_n coeffs[n] * eigenvalues[n] * phi_n(t)``."""

    coeffs: np.ndarray
    eigenvalues: np.ndarray
    basis: HermiteBasis

    @property
    def transformed_coeffs(self):
        return self.coeffs * self.eigenvalues

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
        w = np.asarray(self.transformed_coeffs, dtype=np.complex128)
        vals = RfhExpansion._series(w, t_arr) * self.basis.residual_factor(t_arr)
        return complex(vals[0]) if np.ndim(t) == 0 else vals

    def inverse(self):
        """Transform applying the conjugate eigenvalues to this one's output."""
        return RandomizedRFT(self.transformed_coeffs, np.conj(self.eigenvalues), self.basis)

    def energy(self):
        return float(np.sum(np.abs(self.transformed_coeffs) ** 2))


def randomized_rft(f, N, rand_seq, basis=None, rule=None):
    """Random-eigenvalue transform with ``lambda_n = exp(-i pi Rand(n))``."""
    basis = HermiteBasis(N) if basis is None else basis
    if N > basis.max_order:
        raise ValueError(f"order {N} exceeds basis capacity {basis.max_order}")
    lam = eigenvalues(EigenMode.RANDOMIZED, N, rand_seq)
    c = coefficients(f, N, basis, rule).astype(np.complex128)
    return RandomizedRFT(c, lam, basis)


def truncated_expansion(f, N, basis=None, rule=None):
    """The plain expansion ``sum_{n<=N} c_n phi_n`` (all eigenvalues 1)."""
    basis = HermiteBasis(N) if basis is None else basis
    c = coefficients(f, N, basis, rule).astype(np.complex128)
    return RandomizedRFT(c, np.ones(N + 1, dtype=np.complex128), basis)


def projection_error(f, n, basis=None, rule=None):
    """``int |f - P_n f|**2 exp(-t**2) dt`` for the weighted orthogonal projection.

    ``P_n f = sum_{k<=n} <f, e_k> e_k`` with ``e_k = H_k / norm_k``. Computed in
    the scaled form ``sum_i w_i e^{x_i^2} (f(x_i) e^{-x_i^2/2} - sum_k d_k psi_k(x_i))**2``
    so that no factor ``exp(x**2)`` is ever formed.
    """
    if basis is not None and n > basis.max_order:
        raise ValueError(f"order {n} exceeds basis capacity {basis.max_order}")
    rule = gauss_hermite_rule(min(256, max(128, n + 16))) if rule is None else rule
    if rule.order < n + 16:
        raise ValueError(f"quadrature order {rule.order} too low for n={n}")
    x = rule.nodes
    g = _node_values(f, rule) * np.exp(-0.5 * x * x)
    psi = kernels.psi_table(n, x)
    d = psi @ (rule.scaled_weights * g)
    resid = g - d @ psi
    return math.fsum(rule.scaled_weights * resid * resid)
