"""Monte Carlo checks of convergence in probability / in mean and of the bounds.

Every estimator takes a sampler ``seed -> (a, b)`` and a master seed. Trial
``k`` always runs on ``derive(master_seed, k)`` and results are folded in
trial order, so the output does not depend on the number of workers.
"""

from __future__ import annotations

import dataclasses
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm

from ._rng import aux_seed, derive, format_seed
from .hermite import HermiteBasis
from .integral import (lemma1_bound, riemann_stieltjes_values, tail_bound_finite,
                       tail_bound_real_line, truncation_masks, _values_on)
from .rfh import (EigenMode, RfhExpansion, SeriesBasis, coefficients, draw_rand_seq,
                  eigenvalues)
from .stable import simulate_path, uniform_grid

DEFAULT_SEED = 20240917
CONFIDENCE = 0.99
Z99 = float(norm.ppf(0.5 + CONFIDENCE / 2.0))
WORKERS_ENV = "RFHLAB_WORKERS"


class TrialError(RuntimeError):
    def __init__(self, seed, cause):
        super().__init__(f"trial with sub-seed {format_seed(seed)} failed: {cause!r}")
        self.seed = seed


def default_workers():
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class ExperimentConfig:
    trials: int = 2000
    epsilon: float = 0.1
    eps_prime: float | None = None
    C: float = 1.0
    orders: tuple = (0, 2, 4, 8, 16, 32)
    y_grid: tuple = (-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0)
    T: float = 6.0
    h: float = 1e-3
    alpha: float = 2.0
    master_seed: int = DEFAULT_SEED
    reference_order: int = 128

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))
        object.__setattr__(self, "y_grid", tuple(float(y) for y in self.y_grid))
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.eps_prime is not None and not self.eps_prime > 0:
            raise ValueError("eps_prime must be positive")
        if any(b <= a for a, b in zip(self.orders, self.orders[1:])):
            raise ValueError("orders must be strictly increasing")
        if self.orders and self.orders[0] < 0:
            raise ValueError("orders must be non-negative")
        if self.orders and self.reference_order < self.orders[-1]:
            raise ValueError("reference_order must be at least max(orders)")

    @property
    def effective_eps_prime(self):
        return self.epsilon if self.eps_prime is None else self.eps_prime

    def echo(self):
        out = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            out[f.name] = list(v) if isinstance(v, tuple) else v
        out["eps_prime"] = self.effective_eps_prime
        return out


# ---------------------------------------------------------------------------
# estimators


def run_trials(sampler, trials, master_seed, workers=None):
    """``[sampler(derive(master_seed, k)) for k in range(trials)]``, maybe threaded."""
    workers = default_workers() if workers is None else max(1, int(workers))

    def one(k):
        seed = derive(master_seed, k)
        try:
            return sampler(seed)
        except Exception as exc:  # report which sub-seed broke
            raise TrialError(seed, exc) from exc

    if workers == 1:
        return [one(k) for k in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(trials), chunksize=max(1, trials // (8 * workers))))


def wilson_interval(successes, n, confidence=CONFIDENCE):
    """Wilson score interval ``(lo, hi)`` for a binomial proportion."""
    z = float(norm.ppf(0.5 + confidence / 2.0))
    successes = np.asarray(successes, dtype=np.float64)
    p = successes / n
    denom = 1.0 + z * z / n
    centre = (p + z * z / (2.0 * n)) / denom
    half = z * np.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom
    return centre - half, centre + half


def prob_exceed_from_diffs(diffs, epsilon):
    """Fraction of ``|diff| > epsilon`` along axis 0, with Wilson half-width."""
    diffs = np.asarray(diffs)
    n = diffs.shape[0]
    k = np.sum(np.abs(diffs) > epsilon, axis=0)
    lo, hi = wilson_interval(k, n)
    return k / n, 0.5 * (hi - lo)


def mean_abs_from_diffs(diffs):
    """Mean of ``|diff|`` along axis 0 with a normal-approximation half-width."""
    a = np.abs(np.asarray(diffs))
    n = a.shape[0]
    mean = np.mean(a, axis=0)
    sd = np.std(a, axis=0, ddof=1) if n > 1 else np.zeros_like(mean)
    return mean, Z99 * sd / math.sqrt(n)


def _diffs(pairs):
    a = np.array([np.asarray(p[0]) for p in pairs])
    b = np.array([np.asarray(p[1]) for p in pairs])
    return a - b


def _scalar(x):
    x = np.asarray(x)
    return float(x) if x.ndim == 0 else x


def estimate_prob_exceed(pair_sampler, epsilon, trials, master_seed, workers=None):
    """Estimate ``P(|a - b| > epsilon)`` with a 99% Wilson half-width."""
    if trials < 100:
        raise ValueError("need at least 100 trials")
    p, half = prob_exceed_from_diffs(_diffs(run_trials(pair_sampler, trials, master_seed, workers)),
                                     epsilon)
    return _scalar(p), _scalar(half)


def estimate_mean_error(pair_sampler, trials, master_seed, workers=None):
    """Estimate ``E|a - b|`` with a 99% normal-approximation half-width."""
    if trials < 100:
        raise ValueError("need at least 100 trials")
    m, half = mean_abs_from_diffs(_diffs(run_trials(pair_sampler, trials, master_seed, workers)))
    return _scalar(m), _scalar(half)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class Report:
    """Rows plus the full config echo; serialises to CSV or JSON."""

    kind: str
    config: dict
    columns: tuple
    rows: list
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def failed_checks(self):
        return [c for c in self.checks if not c.passed]

    def to_csv(self):
        buf = io.StringIO()
        buf.write(f"# kind={self.kind}\n")
        for key, value in self.config.items():
            buf.write(f"# {key}={_cell(value)}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(_cell(v) for v in row) + "\n")
        for c in self.checks:
            buf.write(f"# check {c.name}={'pass' if c.passed else 'FAIL'} {c.detail}\n")
        return buf.getvalue()

    def to_json(self):
        doc = {
            "kind": self.kind,
            "config": {k: _jsonable(v) for k, v in self.config.items()},
            "columns": list(self.columns),
            "rows": [[_jsonable(v) for v in row] for row in self.rows],
            "summary": {
                "passed": self.passed,
                "checks": [dataclasses.asdict(c) for c in self.checks],
            },
        }
        return json.dumps(doc, indent=2) + "\n"

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


class ConvergenceReport(Report):
    COLUMNS = ("n", "y", "est_prob_exceed", "prob_ci_halfwidth",
               "est_mean_abs_err", "mean_ci_halfwidth")

    def lookup(self, n, y):
        for row in self.rows:
            if row[0] == n and row[1] == y:
                return row
        raise KeyError((n, y))


def _cell(v):
    if isinstance(v, bool) or isinstance(v, np.bool_):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (list, tuple)):
        return ";".join(_cell(x) for x in v)
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v if v is None or isinstance(v, str) else str(v)


# ---------------------------------------------------------------------------
# experiments


def theorem35_experiment(f, cfg, eigen_mode=EigenMode.NONE,
                         series_basis=SeriesBasis.ORTHONORMAL, workers=None):
    """Convergence in probability of ``S_n(y)`` to the reference-order integral.

    Each trial simulates one path, forms ``A_0..A_ref`` on it and compares
    ``S_n(y)`` for every configured ``n`` with ``target_integral`` at the
    reference order on the same path.
    """
    if cfg.alpha != 2.0:
        raise ValueError("the Fourier-Hermite convergence experiment needs alpha = 2")
    eigen_mode = EigenMode(eigen_mode)
    series_basis = SeriesBasis(series_basis)
    ref = cfg.reference_order
    basis = HermiteBasis(ref)
    grid = uniform_grid(cfg.T, cfg.h)
    table = basis.phi_table(grid[:-1], ref)
    c = coefficients(f, ref, basis)
    rand_seq = draw_rand_seq(ref, aux_seed(cfg.master_seed)) if eigen_mode is EigenMode.RANDOMIZED else None
    template = RfhExpansion(ref, c, np.zeros(ref + 1), eigen_mode,
                            eigenvalues(eigen_mode, ref, rand_seq), basis, None,
                            series_basis, rand_seq)
    integrands = [template.target_integrand(y, ref, grid[:-1]) for y in cfg.y_grid]
    orders = list(cfg.orders)

    def sampler(seed):
        path = simulate_path(grid, cfg.alpha, seed)
        exp = dataclasses.replace(template, random_coeffs=table @ path.increments, path_seed=seed)
        s = np.array([exp.partial_sums(y, orders) for y in cfg.y_grid])
        target = np.array([np.dot(g, path.increments) for g in integrands])
        return s, np.broadcast_to(target[:, None], s.shape)

    diffs = _diffs(run_trials(sampler, cfg.trials, cfg.master_seed, workers))
    prob, prob_ci = prob_exceed_from_diffs(diffs, cfg.epsilon)
    mean, mean_ci = mean_abs_from_diffs(diffs)
    rows = []
    for iy, y in enumerate(cfg.y_grid):
        for jn, n in enumerate(orders):
            rows.append((n, y, float(prob[iy, jn]), float(prob_ci[iy, jn]),
                         float(mean[iy, jn]), float(mean_ci[iy, jn])))
    config = dict(cfg.echo(), f=f.name, eigen_mode=eigen_mode.value,
                  series_basis=series_basis.value, convention=basis.convention.value)
    report = ConvergenceReport("theorem35", config, ConvergenceReport.COLUMNS, rows)
    for iy, y in enumerate(cfg.y_grid):
        report.checks.append(monotone_check(f"prob_nonincreasing[y={y!r}]",
                                            prob[iy], prob_ci[iy]))
    return report


def monotone_check(name, values, halfwidths):
    """Non-increasing within one CI half-width of the later estimate."""
    values = np.asarray(values, dtype=np.float64)
    halfwidths = np.asarray(halfwidths, dtype=np.float64)
    for i in range(1, values.size):
        if values[i] > values[:i].min() + halfwidths[i]:
            return Check(name, False, f"rise at index {i}: {values[i]!r} > {values[:i].min()!r}")
    return Check(name, True)


def theorem34_experiment(f, truncations, cfg, workers=None):
    """Shared-path ``E|Y_T - Y_T'|`` for consecutive truncations.

    One path on ``[-max T, max T]`` per trial; the difference of two nested
    truncations is the sum over the cells between them only.
    """
    truncations = [float(T) for T in truncations]
    if any(b < a for a, b in zip(truncations, truncations[1:])):
        raise ValueError("truncations must be non-decreasing")
    grid = uniform_grid(max(truncations), cfg.h)
    masks = truncation_masks(grid, truncations)
    fvals = _values_on(f, grid[:-1])
    annuli = [fvals * (outer & ~inner) for inner, outer in zip(masks, masks[1:])]

    def sampler(seed):
        path = simulate_path(grid, cfg.alpha, seed)
        d = np.array([np.dot(w, path.increments) for w in annuli])
        return d, np.zeros_like(d)

    diffs = _diffs(run_trials(sampler, cfg.trials, cfg.master_seed, workers))
    mean, ci = mean_abs_from_diffs(diffs)
    rows = [(T, T2, float(m), float(c))
            for T, T2, m, c in zip(truncations, truncations[1:], mean, ci)]
    config = dict(cfg.echo(), f=f.name, truncations=truncations)
    report = Report("theorem34", config, ("T", "T_next", "mean_abs_diff", "mean_ci_halfwidth"), rows)
    strictly = all(b < a for a, b in zip(mean, mean[1:]))
    report.checks.append(Check("mean_abs_diff_strictly_decreasing", bool(strictly) or
                               bool(np.all(mean == 0.0))))
    return report


def lemma_bound_experiment(f, alpha, cfg, epsilons=None, workers=None):
    """Empirical ``E|int f dX|`` and tail probabilities against the lemma bounds.

    The integral runs over ``[-cfg.T, cfg.T]``. Tail rows use the whole-line
    bound at ``alpha = 2`` and the finite-interval bound otherwise, with
    ``eps' = eps`` unless ``cfg.eps_prime`` is set.
    """
    epsilons = [cfg.epsilon] if epsilons is None else [float(e) for e in epsilons]
    a, b = -cfg.T, cfg.T
    grid = uniform_grid(cfg.T, cfg.h)
    fvals = _values_on(f, grid[:-1])

    def sampler(seed):
        path = simulate_path(grid, alpha, seed)
        return riemann_stieltjes_values(fvals, path), 0.0

    diffs = _diffs(run_trials(sampler, cfg.trials, cfg.master_seed, workers))
    mean, mean_ci = mean_abs_from_diffs(diffs)
    rows = []
    bound1 = lemma1_bound(f, alpha, a, b)
    rows.append(("lemma1:E|I|", "", "", float(mean), float(mean_ci), bound1,
                 bool(mean + mean_ci <= bound1)))
    n = diffs.shape[0]
    for eps in epsilons:
        eps_prime = eps if cfg.eps_prime is None else cfg.eps_prime
        k = int(np.sum(np.abs(diffs) > eps))
        lo, hi = wilson_interval(k, n)
        if alpha == 2.0:
            label, bound = "lemma3:P(|I|>eps)", tail_bound_real_line(f, eps_prime, cfg.C)
        else:
            label, bound = "lemma2:P(|I|>eps)", tail_bound_finite(f, alpha, a, b, eps_prime, cfg.C)
        # no exceedances against a zero bound is a pass, not a CI artefact
        ok = bool(hi <= bound) or (k == 0 and bound == 0.0)
        rows.append((label, eps, eps_prime, k / n, float(0.5 * (hi - lo)), bound, ok))
    config = dict(cfg.echo(), f=f.name, alpha=alpha, a=a, b=b, epsilons=epsilons)
    report = Report("bounds", config, ("quantity", "epsilon", "eps_prime", "empirical",
                                       "ci_halfwidth", "bound", "pass"), rows)
    for row in rows:
        report.checks.append(Check(f"{row[0]}@{row[1]}" if row[1] != "" else row[0], row[6],
                                   f"empirical={row[3]!r} ci={row[4]!r} bound={row[5]!r}"))
    return report
