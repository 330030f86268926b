"""Random Fourier-Hermite series and transforms driven by symmetric stable processes."""

__version__ = "0.1.0"

from .hermite import (HermiteBasis, QuadratureRule, WeightConvention, gauss_hermite_rule,
                      hermite_poly, phi, weighted_inner_product)
from .integral import (CATALOG, TestFunction, exact_integral_sampler, get_test_function,
                       integrate_real_line, lemma1_bound, riemann_stieltjes, tail_bound_finite,
                       tail_bound_real_line)
from .kernels import BACKEND
from .rfh import (EigenMode, RfhExpansion, SeriesBasis, build_expansion, coefficients,
                  projection_error, random_coeffs, randomized_rft)
from .stable import SamplePath, StableLaw, sample_stable, simulate_path, uniform_grid
from .verify import (ConvergenceReport, ExperimentConfig, estimate_mean_error,
                     estimate_prob_exceed, lemma_bound_experiment, theorem34_experiment,
                     theorem35_experiment)

__all__ = [
    "BACKEND", "CATALOG", "ConvergenceReport", "EigenMode", "ExperimentConfig", "HermiteBasis",
    "QuadratureRule", "RfhExpansion", "SamplePath", "SeriesBasis", "StableLaw", "TestFunction",
    "WeightConvention", "build_expansion", "coefficients", "estimate_mean_error",
    "estimate_prob_exceed", "exact_integral_sampler", "gauss_hermite_rule", "get_test_function",
    "hermite_poly", "integrate_real_line", "lemma1_bound", "lemma_bound_experiment", "phi",
    "projection_error", "random_coeffs", "randomized_rft", "riemann_stieltjes", "sample_stable",
    "simulate_path", "tail_bound_finite", "tail_bound_real_line", "theorem34_experiment",
    "theorem35_experiment", "uniform_grid", "weighted_inner_product",
]
