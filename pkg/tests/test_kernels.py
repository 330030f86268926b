"""The compiled kernels and the numpy fallback must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest

from rfhlab import _pykernels, kernels

try:
    from rfhlab import _ckernels
except ImportError:  # pragma: no cover - extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


@pytest.fixture
def points():
    return np.linspace(-9.0, 9.0, 401)


# libm and numpy exp differ by an ulp; cancellation near zeros of psi_n
# amplifies that, so compare on the O(1) scale of the functions
@needs_ext
@pytest.mark.parametrize("nmax", [0, 1, 2, 40, 200])
def test_psi_table_backends_agree(nmax, points):
    np.testing.assert_allclose(_ckernels.psi_table(nmax, points),
                               _pykernels.psi_table(nmax, points), rtol=1e-11, atol=1e-14)


@needs_ext
@pytest.mark.parametrize("nmax", [0, 1, 5, 30])
def test_hermite_table_backends_agree(nmax, points):
    np.testing.assert_allclose(_ckernels.hermite_table(nmax, points),
                               _pykernels.hermite_table(nmax, points), rtol=1e-13)


@needs_ext
@pytest.mark.parametrize("ncoef", [0, 1, 2, 65])
def test_psi_series_backends_agree(ncoef, points):
    rng = np.random.default_rng(3)
    c = rng.standard_normal(ncoef)
    np.testing.assert_allclose(_ckernels.psi_series(c, points),
                               _pykernels.psi_series(c, points), rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9])
def test_cms_shared_by_backends(alpha):
    assert kernels.cms_symmetric is _pykernels.cms_symmetric
    rng = np.random.default_rng(4)
    u = rng.uniform(-np.pi / 2, np.pi / 2, 1000)
    w = rng.standard_exponential(1000)
    assert np.all(np.isfinite(kernels.cms_symmetric(alpha, u, w)))


def test_psi_series_matches_table(points):
    c = np.linspace(1.0, -1.0, 12)
    expected = c @ kernels.psi_table(11, points)
    np.testing.assert_allclose(kernels.psi_series(c, points), expected, rtol=1e-12, atol=1e-15)


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_env_forces_fallback():
    env = dict(os.environ, RFHLAB_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import rfhlab.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
