"""Stochastic integrals against a symmetric stable path, and the bounds on them.

For a deterministic integrand ``f`` the integral ``int f dX`` is itself
symmetric stable with scale ``(int |f|**alpha dt)**(1/alpha)``. That fact
gives an exact sampler which serves as the oracle for the Riemann-Stieltjes
sums computed on simulated paths.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .hermite import EvaluationError, tanh_sinh_rule
from .stable import StableLaw, check_alpha, sample_stable, simulate_path, uniform_grid

DEFAULT_T = 6.0
DEFAULT_H = 1e-3


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A named deterministic integrand.

    ``power_integral(alpha, a, b)``, when present, returns the closed form of
    ``int_a^b |f(t)|**alpha dt``. ``breakpoints`` lists points where ``f`` is
    not smooth so that numerical fallbacks can split there.
    """

    name: str
    fn: object
    power_integral: object = None
    support_hint: float = DEFAULT_T
    breakpoints: tuple = ()
    note: str = ""

    __test__ = False  # not a pytest class

    def __call__(self, t):
        return self.fn(np.asarray(t, dtype=np.float64))

    def abs_power_integral(self, alpha, a=-math.inf, b=math.inf):
        """``int_a^b |f|**alpha dt``: closed form if known, else tanh-sinh."""
        if not a < b:
            return 0.0
        if self.power_integral is not None:
            value = self.power_integral(alpha, a, b)
            if value is not None:
                return float(value)
        lo = max(a, -self.support_hint)
        hi = min(b, self.support_hint)
        if not lo < hi:
            return 0.0
        cuts = [lo] + [p for p in self.breakpoints if lo < p < hi] + [hi]
        total = 0.0
        for left, right in zip(cuts[:-1], cuts[1:]):
            rule = tanh_sinh_rule(left, right, level=7)
            vals = np.abs(self(rule.nodes)) ** alpha
            total += float(np.dot(rule.weights, vals))
        return total

    def scaled(self, c, name=None):
        return linear_combination([self], [c], name=name)


def linear_combination(fs, coeffs, name=None):
    """``sum_j coeffs[j] * fs[j]`` as a TestFunction (no closed form kept)."""
    fs = list(fs)
    coeffs = [float(c) for c in coeffs]

    def fn(t):
        return sum(c * f(t) for c, f in zip(coeffs, fs))

    label = name or "+".join(f"{c!r}*{f.name}" for c, f in zip(coeffs, fs))
    hint = max(f.support_hint for f in fs)
    bps = tuple(sorted({p for f in fs for p in f.breakpoints}))
    return TestFunction(label, fn, None, hint, bps)


def _clip(a, b, lo, hi):
    return max(a, lo), min(b, hi)


def _gaussian_power(alpha, a, b):
    r = math.sqrt(alpha)
    return 0.5 * math.sqrt(math.pi / alpha) * (special.erf(r * b) - special.erf(r * a))


def _half_line_tgauss(alpha, x):
    # int_0^x t**alpha exp(-alpha t**2) dt, x >= 0
    s = 0.5 * (alpha + 1.0)
    if math.isinf(x):
        return 0.5 * special.gamma(s) / alpha ** s
    return 0.5 * special.gamma(s) * special.gammainc(s, alpha * x * x) / alpha ** s


def _tgauss_power(alpha, a, b):
    def signed(x):
        return math.copysign(_half_line_tgauss(alpha, abs(x)), x)
    return signed(b) - signed(a)


def _half_line_cauchy(alpha, x):
    # int_0^x (1 + t**2)**(-alpha) dt via the regularised incomplete beta
    q = alpha - 0.5
    full = 0.5 * special.beta(0.5, q)
    if math.isinf(x):
        return full
    return full * special.betainc(0.5, q, x * x / (1.0 + x * x))


def _cauchy_power(alpha, a, b):
    def signed(x):
        return math.copysign(_half_line_cauchy(alpha, abs(x)), x)
    return signed(b) - signed(a)


def _box_power(alpha, a, b):
    lo, hi = _clip(a, b, 0.0, 1.0)
    return max(hi - lo, 0.0)


def _h3g_power(alpha, a, b):
    if alpha == 2.0 and a == -math.inf and b == math.inf:
        return 48.0 * math.sqrt(math.pi)
    return None


def _zero_power(alpha, a, b):
    return 0.0


CATALOG = {
    "gaussian": TestFunction(
        "gaussian", lambda t: np.exp(-t * t), _gaussian_power,
        note="exp(-t^2); in every L^p"),
    "t_gaussian": TestFunction(
        "t_gaussian", lambda t: t * np.exp(-t * t), _tgauss_power,
        note="t exp(-t^2); odd, in every L^p"),
    "cauchy_kernel": TestFunction(
        "cauchy_kernel", lambda t: 1.0 / (1.0 + t * t), _cauchy_power,
        support_hint=200.0,
        note="1/(1+t^2); in L^p for p > 1/2, slow algebraic decay"),
    "box01": TestFunction(
        "box01", lambda t: ((t >= 0.0) & (t < 1.0)).astype(np.float64), _box_power,
        support_hint=1.0, breakpoints=(0.0, 1.0),
        note="indicator of [0, 1); compact support"),
    "hermite3_gaussian": TestFunction(
        "hermite3_gaussian", lambda t: (8.0 * t ** 3 - 12.0 * t) * np.exp(-0.5 * t * t),
        _h3g_power, support_hint=12.0,
        breakpoints=(-math.sqrt(1.5), 0.0, math.sqrt(1.5)),
        note="H_3(t) exp(-t^2/2); odd, in every L^p"),
    "zero": TestFunction("zero", lambda t: np.zeros_like(t), _zero_power, note="f = 0"),
}


def get_test_function(name):
    try:
        return CATALOG[name]
    except KeyError:
        raise ValueError(f"unknown test function {name!r}; choose from {sorted(CATALOG)}") from None


@dataclass(frozen=True)
class IntegralEstimate:
    value: float
    truncation: float
    step: float
    seed: object
    scheme: str = "left-endpoint"


def _values_on(f, t):
    vals = np.asarray(f(t), dtype=np.float64)
    bad = ~np.isfinite(vals)
    if bad.any():
        node = float(np.asarray(t)[np.argmax(bad)])
        raise EvaluationError(f"{getattr(f, 'name', 'f')} is not finite at t={node!r}", node=node)
    return vals


def riemann_stieltjes(f, path):
    """Left-endpoint sum ``sum_i f(t_i) * dX_i`` over the path."""
    if len(path.increments) == 0:
        raise ValueError("empty path")
    return float(np.dot(_values_on(f, path.grid[:-1]), path.increments))


def riemann_stieltjes_values(values, path):
    """Same sum with the integrand already evaluated at the left endpoints."""
    return float(np.dot(values, path.increments))


def exact_integral_sampler(f, alpha, rng, size=None, a=-math.inf, b=math.inf):
    """Draw ``int_a^b f dX`` from its exact stable law."""
    check_alpha(alpha)
    p = f.abs_power_integral(alpha, a, b)
    if p is None or not math.isfinite(p) or p < 0:
        raise ValueError(f"power integral of {f.name} unavailable for alpha={alpha}")
    return sample_stable(StableLaw(alpha, p ** (1.0 / alpha)), rng, size)


def integrate_real_line(f, alpha, T=DEFAULT_T, h=DEFAULT_H, seed=0):
    """Truncated integral ``Y_T = int_{-T}^{T} f dX`` on a fresh path."""
    path = simulate_path(uniform_grid(T, h), alpha, seed)
    return IntegralEstimate(riemann_stieltjes(f, path), T, h, seed)


def truncation_masks(grid, truncations):
    """Boolean masks selecting the cells of ``grid`` that lie inside ``[-T, T]``."""
    left, right = grid[:-1], grid[1:]
    tol = 1e-9 * max(np.min(np.diff(grid)), 1e-300)
    return [(left >= -T - tol) & (right <= T + tol) for T in truncations]


def lemma1_bound(f, alpha, a, b, tol=1e-10):
    """Right-hand side of the first-absolute-moment bound on ``[a, b]``.

    ``4/(pi(alpha-1)) I + (2/pi) int_{|u|>1} (1 - exp(-|u|**alpha I)) / u**2 du``
    with ``I = int_a^b |f|**alpha``. The ``u`` integral is even, so it is
    taken on ``(1, U]`` and doubled; beyond ``U`` the integrand equals
    ``1/u**2`` up to ``tol``, contributing ``1/U`` per side.
    """
    if alpha == 1.0:
        raise ValueError("bound is infinite at alpha = 1")
    check_alpha(alpha)
    if not a < b:
        raise ValueError("need a < b")
    power = f.abs_power_integral(alpha, a, b)
    if power == 0.0:
        return 0.0
    return 4.0 / (math.pi * (alpha - 1.0)) * power + (2.0 / math.pi) * 2.0 * _u_integral(alpha, power, tol)


def _u_integral(alpha, power, tol):
    # int_1^inf (1 - exp(-u**alpha * power)) / u**2 du
    U = max(1.0, (math.log(1.0 / tol) / power) ** (1.0 / alpha))

    def g(v):
        u = math.exp(v)
        return -math.expm1(-(u ** alpha) * power) / u

    body = 0.0
    if U > 1.0:
        body, _ = integrate.quad(g, 0.0, math.log(U), epsabs=1e-13, epsrel=1e-12, limit=200)
    return body + 1.0 / U


def _check_bound_params(eps_prime, C):
    if not eps_prime > 0:
        raise ValueError(f"eps_prime must be positive, got {eps_prime}")
    if not C > 0:
        raise ValueError(f"C must be positive, got {C}")


def tail_bound_finite(f, alpha, a, b, eps_prime, C):
    """``C 2**(alpha+1) / ((alpha+1) eps'**alpha) * int_a^b |f|**alpha``."""
    _check_bound_params(eps_prime, C)
    if not 1.0 <= alpha <= 2.0:
        raise ValueError(f"alpha must lie in [1, 2], got {alpha}")
    power = f.abs_power_integral(alpha, a, b)
    return C * 2.0 ** (alpha + 1.0) / ((alpha + 1.0) * eps_prime ** alpha) * power


def tail_bound_real_line(f, eps_prime, C):
    """``(8C / (3 eps'**2)) * int |f|**2`` over the whole line."""
    _check_bound_params(eps_prime, C)
    return 8.0 * C / (3.0 * eps_prime ** 2) * f.abs_power_integral(2.0)


@dataclass(frozen=True)
class BoundRow:
    lemma: str
    f: str
    alpha: float
    a: float
    b: float
    eps_prime: float
    C: float
    bound: float

    HEADER = "lemma,f,alpha,a,b,eps_prime,C,bound"

    def csv(self):
        return ",".join(_fmt(v) for v in (self.lemma, self.f, self.alpha, self.a, self.b,
                                           self.eps_prime, self.C, self.bound))


def _fmt(v):
    if isinstance(v, str):
        return v
    if v is None:
        return ""
    return repr(float(v))


def bounds_csv(rows):
    buf = io.StringIO()
    buf.write(BoundRow.HEADER + "\n")
    for row in rows:
        buf.write(row.csv() + "\n")
    return buf.getvalue()
