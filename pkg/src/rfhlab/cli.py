"""Command-line front end.

Every subcommand writes a self-describing report: ``#``-prefixed config lines
followed by CSV data (or one JSON document with ``--json``). Exit status is 0
on success, 2 on bad arguments and 1 when an experiment check fails.

Negative list values need the ``=`` form, e.g. ``--y=-2,-1,0``.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np
from scipy.stats import ks_2samp

from . import __version__
from ._rng import aux_seed, format_seed, make_rng
from .hermite import HermiteBasis, WeightConvention
from .integral import (BoundRow, CATALOG, DEFAULT_H, DEFAULT_T, exact_integral_sampler,
                       get_test_function, lemma1_bound, riemann_stieltjes_values,
                       tail_bound_finite, tail_bound_real_line, _values_on)
from .kernels import BACKEND
from .rfh import (EigenMode, SeriesBasis, build_expansion, coefficients, draw_rand_seq,
                  projection_error, randomized_rft, truncated_expansion)
from .stable import simulate_path, uniform_grid
from .verify import (Check, DEFAULT_SEED, ExperimentConfig, Report, WORKERS_ENV,
                     lemma_bound_experiment, monotone_check, run_trials,
                     theorem34_experiment, theorem35_experiment)

KS_LEVEL = 0.01


class UsageError(ValueError):
    pass


def _ints(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser():
    p = argparse.ArgumentParser(
        prog="rfhlab",
        description="Random Fourier-Hermite series driven by symmetric stable processes.",
        epilog=f"Default worker count comes from ${WORKERS_ENV} (default 1).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND})")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(sp, f=True, alpha=True, grid=True):
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"master seed (default {DEFAULT_SEED})")
        sp.add_argument("--out", default="-", help="output file, '-' for stdout")
        sp.add_argument("--json", action="store_true", help="emit JSON instead of CSV")
        sp.add_argument("--workers", type=int, default=None,
                        help=f"worker threads (default ${WORKERS_ENV} or 1)")
        if f:
            sp.add_argument("--f", default="gaussian", choices=sorted(CATALOG),
                            help="test function")
        if alpha:
            sp.add_argument("--alpha", type=float, default=2.0, help="stability index in (1, 2]")
        if grid:
            sp.add_argument("--T", type=float, default=DEFAULT_T, help="truncation half-width")
            sp.add_argument("--h", type=float, default=DEFAULT_H, help="grid step")

    sp = sub.add_parser("path", help="simulate and dump one sample path")
    common(sp, f=False)

    sp = sub.add_parser("integrate", help="stochastic integral vs its exact law (KS test)")
    common(sp)
    sp.add_argument("--trials", type=int, default=5000, help="draws from each sampler")

    sp = sub.add_parser("coeffs", help="dump Fourier-Hermite coefficients c_n")
    common(sp, alpha=False, grid=False)
    sp.add_argument("--order", type=int, default=32, help="highest order N")
    sp.add_argument("--convention", choices=[c.value for c in WeightConvention],
                    default=WeightConvention.PAPER_LITERAL.value,
                    help="weight exp(-t^2/2) on Hermite functions, or the classical one")

    sp = sub.add_parser("expansion", help="dump c_n, A_n and eigenvalues for one path")
    common(sp)
    sp.add_argument("--order", type=int, default=32, help="highest order N")
    sp.add_argument("--eigen", choices=[m.value for m in EigenMode], default="none",
                    help="eigenvalues: 1, (-1)^n or exp(-i pi Rand(n))")
    sp.add_argument("--series", choices=[s.value for s in SeriesBasis], default="orthonormal",
                    help="factor on A_n: H_n(y) or H_n(y)/norm_n")

    sp = sub.add_parser("theorem34", help="Cauchy-in-mean check for truncated integrals")
    common(sp, grid=False)
    sp.add_argument("--h", type=float, default=DEFAULT_H, help="grid step")
    sp.add_argument("--truncations", type=_floats, default=[1, 2, 3, 4, 5, 6],
                    help="comma-separated half-widths T, non-decreasing")
    sp.add_argument("--trials", type=int, default=2000, help="Monte Carlo trials")

    sp = sub.add_parser("theorem35", help="convergence in probability of RFH partial sums")
    common(sp, alpha=False)
    sp.add_argument("--orders", type=_ints, default=[0, 2, 4, 8, 16, 32],
                    help="comma-separated increasing partial-sum orders")
    sp.add_argument("--y", type=_floats, default=[-2, -1, -0.5, 0, 0.5, 1, 2],
                    help="comma-separated evaluation points (use --y=-1,0 for negatives)")
    sp.add_argument("--trials", type=int, default=2000, help="Monte Carlo trials")
    sp.add_argument("--epsilon", type=float, default=0.1, help="exceedance threshold")
    sp.add_argument("--reference-order", type=int, default=128,
                    help="kernel order standing in for the limit")
    sp.add_argument("--eigen", choices=[m.value for m in EigenMode], default="none",
                    help="eigenvalues: 1, (-1)^n or exp(-i pi Rand(n))")
    sp.add_argument("--series", choices=[s.value for s in SeriesBasis], default="orthonormal",
                    help="factor on A_n: H_n(y) or H_n(y)/norm_n")

    sp = sub.add_parser("bounds", help="empirical moments and tails vs the lemma bounds")
    common(sp)
    sp.add_argument("--trials", type=int, default=10000, help="Monte Carlo trials")
    sp.add_argument("--epsilon", type=_floats, default=[1.0],
                    help="comma-separated tail thresholds")
    sp.add_argument("--eps-prime", type=float, default=None,
                    help="threshold inside the tail bound (defaults to each epsilon)")
    sp.add_argument("--C", type=float, default=1.0, help="constant in the tail bounds")
    sp.add_argument("--bounds-only", action="store_true",
                    help="evaluate the bound formulas without Monte Carlo")

    sp = sub.add_parser("projection", help="weighted L2 projection error curve")
    common(sp, alpha=False, grid=False)
    sp.add_argument("--max-order", type=int, default=64, help="largest projection order")

    sp = sub.add_parser("rft", help="randomized-eigenvalue transform round trip")
    common(sp, alpha=False, grid=False)
    sp.add_argument("--order", type=int, default=32, help="highest order N")
    sp.add_argument("--points", type=_floats, default=[-2, -1, 0, 1, 2],
                    help="comma-separated points for the round-trip check")
    return p


def _cmd_path(args):
    path = simulate_path(uniform_grid(args.T, args.h), args.alpha, args.seed)
    rows = list(zip(path.grid[:-1].tolist(), path.increments.tolist()))
    config = {"alpha": args.alpha, "seed": format_seed(path.seed), "T": args.T, "h": args.h,
              "t_end": float(path.grid[-1])}
    return Report("path", config, ("t", "dX"), rows)


def _cmd_integrate(args):
    f = get_test_function(args.f)
    grid = uniform_grid(args.T, args.h)
    fvals = _values_on(f, grid[:-1])

    def sampler(seed):
        return riemann_stieltjes_values(fvals, simulate_path(grid, args.alpha, seed))

    rs = np.array(run_trials(sampler, args.trials, args.seed, args.workers))
    exact = exact_integral_sampler(f, args.alpha, _aux_rng(args.seed), size=args.trials)
    if np.all(rs == 0.0) and np.all(exact == 0.0):
        stat, pvalue = 0.0, 1.0
    else:
        res = ks_2samp(rs, exact)
        stat, pvalue = float(res.statistic), float(res.pvalue)
    rows = [("ks_statistic", stat), ("ks_pvalue", pvalue),
            ("median_abs_riemann_stieltjes", float(np.median(np.abs(rs)))),
            ("median_abs_exact", float(np.median(np.abs(exact))))]
    config = {"f": f.name, "alpha": args.alpha, "trials": args.trials, "T": args.T, "h": args.h,
              "master_seed": args.seed, "ks_level": KS_LEVEL}
    report = Report("integrate", config, ("quantity", "value"), rows)
    report.checks.append(Check("ks_pvalue_above_level", pvalue > KS_LEVEL, f"p={pvalue!r}"))
    print(f"ks_pvalue={pvalue!r}", file=sys.stderr)
    return report


def _aux_rng(seed):
    return make_rng(aux_seed(seed))


def _cmd_coeffs(args):
    basis = HermiteBasis(args.order, args.convention)
    c = coefficients(get_test_function(args.f), args.order, basis)
    config = {"f": args.f, "order": args.order, "convention": args.convention}
    return Report("coeffs", config, ("n", "c_n"), [(n, float(v)) for n, v in enumerate(c)])


def _cmd_expansion(args):
    f = get_test_function(args.f)
    basis = HermiteBasis(args.order)
    path = simulate_path(uniform_grid(args.T, args.h), args.alpha, args.seed)
    rand_seq = draw_rand_seq(args.order, aux_seed(args.seed)) if args.eigen == "random" else None
    exp = build_expansion(f, args.order, path, basis, args.eigen, rand_seq, args.series)
    rows = [(n, float(exp.coeffs[n]), float(exp.random_coeffs[n]),
             float(exp.eigenvalues[n].real), float(exp.eigenvalues[n].imag))
            for n in range(args.order + 1)]
    config = {"f": f.name, "order": args.order, "alpha": args.alpha, "T": args.T, "h": args.h,
              "seed": args.seed, "eigen_mode": args.eigen, "series_basis": args.series,
              "convention": basis.convention.value}
    return Report("expansion", config, ("n", "c_n", "A_n", "lambda_re", "lambda_im"), rows)


def _cmd_theorem34(args):
    cfg = ExperimentConfig(trials=args.trials, h=args.h, alpha=args.alpha,
                           T=max(args.truncations), master_seed=args.seed)
    return theorem34_experiment(get_test_function(args.f), args.truncations, cfg, args.workers)


def _cmd_theorem35(args):
    cfg = ExperimentConfig(trials=args.trials, epsilon=args.epsilon, orders=tuple(args.orders),
                           y_grid=tuple(args.y), T=args.T, h=args.h, alpha=2.0,
                           master_seed=args.seed, reference_order=args.reference_order)
    return theorem35_experiment(get_test_function(args.f), cfg, args.eigen, args.series,
                                args.workers)


def _cmd_bounds(args):
    f = get_test_function(args.f)
    if args.bounds_only:
        return _bound_formulas(f, args)
    cfg = ExperimentConfig(trials=args.trials, epsilon=args.epsilon[0], eps_prime=args.eps_prime,
                           C=args.C, T=args.T, h=args.h, alpha=args.alpha, master_seed=args.seed)
    return lemma_bound_experiment(f, args.alpha, cfg, args.epsilon, args.workers)


def _bound_formulas(f, args):
    a, b = -args.T, args.T
    rows = [BoundRow("lemma1", f.name, args.alpha, a, b, None, None,
                     lemma1_bound(f, args.alpha, a, b))]
    for eps in args.epsilon:
        ep = eps if args.eps_prime is None else args.eps_prime
        rows.append(BoundRow("lemma2", f.name, args.alpha, a, b, ep, args.C,
                             tail_bound_finite(f, args.alpha, a, b, ep, args.C)))
        rows.append(BoundRow("lemma3", f.name, 2.0, -np.inf, np.inf, ep, args.C,
                             tail_bound_real_line(f, ep, args.C)))
    config = {"f": f.name, "alpha": args.alpha, "T": args.T, "epsilons": args.epsilon,
              "eps_prime": args.eps_prime, "C": args.C}
    columns = tuple(BoundRow.HEADER.split(","))
    return Report("bound-formulas", config, columns,
                  [(r.lemma, r.f, r.alpha, r.a, r.b, r.eps_prime, r.C, r.bound) for r in rows])


def _cmd_projection(args):
    f = get_test_function(args.f)
    errs = [projection_error(f, n) for n in range(args.max_order + 1)]
    report = Report("projection", {"f": f.name, "max_order": args.max_order},
                    ("n", "projection_error"), list(enumerate(errs)))
    report.checks.append(monotone_check("projection_error_nonincreasing", errs,
                                        [1e-12] * len(errs)))
    return report


def _cmd_rft(args):
    f = get_test_function(args.f)
    basis = HermiteBasis(args.order)
    rand_seq = draw_rand_seq(args.order, aux_seed(args.seed))
    fwd = randomized_rft(f, args.order, rand_seq, basis)
    plain = truncated_expansion(f, args.order, basis)
    pts = np.array(args.points, dtype=np.float64)
    back = fwd.inverse()(pts)
    ref = plain(pts)
    roundtrip = float(np.max(np.abs(back - ref)))
    energy = abs(fwd.energy() - plain.energy())
    rows = [(n, float(fwd.coeffs[n].real), float(rand_seq[n]),
             float(fwd.eigenvalues[n].real), float(fwd.eigenvalues[n].imag))
            for n in range(args.order + 1)]
    config = {"f": f.name, "order": args.order, "seed": args.seed,
              "points": args.points, "roundtrip_max_abs_err": roundtrip,
              "energy_abs_err": energy}
    report = Report("rft", config, ("n", "c_n", "rand", "lambda_re", "lambda_im"), rows)
    report.checks.append(Check("roundtrip", roundtrip <= 1e-12, f"err={roundtrip!r}"))
    report.checks.append(Check("isometry", energy <= 1e-12, f"err={energy!r}"))
    return report


COMMANDS = {
    "path": _cmd_path,
    "integrate": _cmd_integrate,
    "coeffs": _cmd_coeffs,
    "expansion": _cmd_expansion,
    "theorem34": _cmd_theorem34,
    "theorem35": _cmd_theorem35,
    "bounds": _cmd_bounds,
    "projection": _cmd_projection,
    "rft": _cmd_rft,
}


def run(argv=None):
    """Run one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        report = COMMANDS[args.command](args)
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"rfhlab {args.command}: error: {exc}", file=sys.stderr)
        return 2
    text = report.to_json() if args.json else report.to_csv()
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    failed = report.failed_checks()
    for c in failed:
        print(f"FAILED {c.name}: {c.detail}", file=sys.stderr)
    return 1 if failed else 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
