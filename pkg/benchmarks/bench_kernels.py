"""Time the compiled kernels against their numpy twins.

Usage: python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from rfhlab import _pykernels

try:
    from rfhlab import _ckernels
except ImportError:
    _ckernels = None


def cases():
    rng = np.random.default_rng(0)
    grid = np.linspace(-6.0, 6.0, 12_001)
    coeffs = rng.standard_normal(129)
    return [
        ("psi_table(128, 12k pts)", "psi_table", (128, grid)),
        ("psi_table(32, 12k pts)", "psi_table", (32, grid)),
        ("hermite_table(64, 12k pts)", "hermite_table", (64, grid)),
        ("psi_series(129 coeffs, 12k pts)", "psi_series", (coeffs, grid)),
    ]


def best(fn, args, repeat):
    t = timeit.Timer(lambda: fn(*args))
    n, _ = t.autorange()
    return min(t.repeat(repeat, n)) / n


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; run `pip install -e . --no-build-isolation` first")
    print(f"{'kernel':<34}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for label, name, fargs in cases():
        tp = best(getattr(_pykernels, name), fargs, args.repeat)
        if _ckernels is None:
            print(f"{label:<34}{tp * 1e3:>12.3f}{'-':>12}{'-':>10}")
            continue
        tc = best(getattr(_ckernels, name), fargs, args.repeat)
        print(f"{label:<34}{tp * 1e3:>12.3f}{tc * 1e3:>12.3f}{tp / tc:>9.2f}x")


if __name__ == "__main__":
    main()
