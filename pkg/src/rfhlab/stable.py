"""Symmetric alpha-stable laws and process paths.

Normalisation: a ``StableLaw(alpha, scale)`` variate ``Z`` has characteristic
function ``E exp(iuZ) = exp(-scale**alpha * |u|**alpha)`` and the process has
``E exp(iuX(t)) = exp(-t |u|**alpha)``. At ``alpha = 2`` this makes ``X(t)``
Gaussian with variance ``2t``, not ``t``.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from ._rng import format_seed, make_rng, parse_seed


@dataclass(frozen=True)
class StableLaw:
    alpha: float
    scale: float = 1.0

    def __post_init__(self):
        check_alpha(self.alpha)
        if not (self.scale >= 0.0 and math.isfinite(self.scale)):
            raise ValueError(f"scale must be finite and non-negative, got {self.scale}")

    def char_fn(self, u):
        return np.exp(-(self.scale * np.abs(u)) ** self.alpha)

    def sample(self, rng, size=None):
        return sample_stable(self, rng, size)


def check_alpha(alpha):
    if not 1.0 < alpha <= 2.0:
        raise ValueError(f"stability index must lie in (1, 2], got {alpha}")


def standard_symmetric(alpha, rng, size):
    """Unit-scale symmetric stable draws, shape ``(size,)``."""
    if alpha == 2.0:
        return math.sqrt(2.0) * rng.standard_normal(size)
    u = rng.uniform(-0.5 * math.pi, 0.5 * math.pi, size)
    w = rng.standard_exponential(size)
    return kernels.cms_symmetric(float(alpha), u, w)


def sample_stable(law, rng, size=None):
    """Draw from ``law``. Gaussian fast path at ``alpha = 2``, CMS otherwise."""
    rng = make_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    n = 1 if size is None else int(np.prod(size))
    if law.scale == 0.0:
        z = np.zeros(n)
    else:
        z = law.scale * standard_symmetric(law.alpha, rng, n)
    if size is None:
        return float(z[0])
    return z.reshape(size)


@dataclass(frozen=True, eq=False)
class SamplePath:
    """One realisation of the process as increments on a time grid.

    ``increments[i] = X(grid[i+1]) - X(grid[i])``.
    """

    grid: np.ndarray
    increments: np.ndarray
    alpha: float
    seed: object

    def __post_init__(self):
        if len(self.increments) != len(self.grid) - 1:
            raise ValueError("need exactly one increment per grid cell")

    def values(self):
        """Path values ``X(t_k)`` with ``X(t_0) = 0``."""
        return np.concatenate(([0.0], np.cumsum(self.increments)))

    def to_csv(self):
        buf = io.StringIO()
        buf.write(f"# alpha={self.alpha!r}\n")
        buf.write(f"# seed={format_seed(self.seed)}\n")
        buf.write("t,dX\n")
        for t, dx in zip(self.grid[:-1], self.increments):
            buf.write(f"{float(t)!r},{float(dx)!r}\n")
        buf.write(f"# t_end={float(self.grid[-1])!r}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        meta = {}
        ts, dxs = [], []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = value
            elif line and line != "t,dX":
                t, dx = line.split(",")
                ts.append(float(t))
                dxs.append(float(dx))
        grid = np.array(ts + [float(meta["t_end"])])
        return cls(grid, np.array(dxs), float(meta["alpha"]), parse_seed(meta["seed"]))


def simulate_path(grid, alpha, seed):
    """Independent increments ``StableLaw(alpha, dt**(1/alpha))`` on ``grid``.

    Deterministic in ``(grid, alpha, seed)``.
    """
    check_alpha(alpha)
    grid = np.asarray(grid, dtype=np.float64)
    if grid.ndim != 1 or grid.size < 2:
        raise ValueError("grid needs at least two points")
    dt = np.diff(grid)
    if not np.all(dt > 0):
        raise ValueError("grid must be strictly increasing")
    rng = make_rng(seed)
    z = standard_symmetric(alpha, rng, dt.size)
    return SamplePath(grid, dt ** (1.0 / alpha) * z, float(alpha), seed)


def uniform_grid(T, h):
    """Grid from ``-T`` to ``T`` with step ``h``; the last step may be shorter."""
    if not T > 0:
        raise ValueError(f"half-width must be positive, got {T}")
    if not 0 < h <= T:
        raise ValueError(f"step must satisfy 0 < h <= T, got {h}")
    span = 2.0 * T
    n = int(math.floor(span / h + 1e-9))
    half = round(T / h)
    if abs(T / h - half) < 1e-9:
        # symmetric integer multiples keep t = 0 and mirrored points exact
        grid = h * np.arange(-half, half + 1, dtype=np.float64)
    else:
        grid = -T + h * np.arange(n + 1, dtype=np.float64)
    if span - n * h > 1e-9 * h:
        grid = np.append(grid, T)
    grid[0] = -T
    grid[-1] = T
    return grid
