import math

import numpy as np
import pytest
from scipy import integrate

from rfhlab._rng import derive
from rfhlab.hermite import HermiteBasis, hermite_poly, log_norms
from rfhlab.integral import CATALOG, TestFunction
from rfhlab.rfh import (EigenMode, SeriesBasis, build_expansion, coefficients, draw_rand_seq,
                        eigenvalues, projection_error, random_coeffs, randomized_rft,
                        truncated_expansion)
from rfhlab.stable import SamplePath, simulate_path, uniform_grid

GAUSS = CATALOG["gaussian"]
COARSE = uniform_grid(6.0, 0.01)


@pytest.fixture(scope="module")
def basis64():
    return HermiteBasis(64)


@pytest.fixture(scope="module")
def path():
    return simulate_path(uniform_grid(6.0, 1e-3), 2.0, (1, 0, 0))


def _poly(n):
    return TestFunction(f"H_{n}", lambda t: hermite_poly(n, t))


class TestCoefficients:
    def test_odd_function_has_zero_c0(self, basis64):
        assert abs(coefficients(CATALOG["t_gaussian"], 8, basis64)[0]) <= 1e-14

    def test_gaussian_c0(self, basis64):
        c = coefficients(GAUSS, 8, basis64)
        assert c[0] == pytest.approx(math.pi ** 0.25 / math.sqrt(2), rel=1e-13)
        assert abs(c[1]) <= 1e-14

    def test_against_adaptive_quadrature(self, basis64):
        c = coefficients(GAUSS, 10, basis64)
        for n in (2, 4, 10):
            ref, _ = integrate.quad(lambda t: GAUSS(t) * float(basis64.phi(n, t)), -12, 12,
                                    epsabs=1e-15, limit=200)
            assert c[n] == pytest.approx(ref, rel=1e-10, abs=1e-15)

    def test_half_weight_convention(self):
        b = HermiteBasis(4, "half")
        c = coefficients(GAUSS, 4, b)
        # int exp(-t^2) pi^(-1/4) exp(-t^2/2) dt = pi^(-1/4) sqrt(2 pi / 3)
        assert c[0] == pytest.approx(math.pi ** -0.25 * math.sqrt(2 * math.pi / 3), rel=1e-13)

    def test_decay(self, basis64):
        c = np.abs(coefficients(GAUSS, 64, basis64))
        even = c[::2]
        assert np.all(np.diff(even[5:]) < 0)
        assert c[64] < 1e-10

    def test_rule_too_small(self, basis64):
        from rfhlab.hermite import gauss_hermite_rule
        with pytest.raises(ValueError):
            coefficients(GAUSS, 40, basis64, gauss_hermite_rule(32))

    def test_capacity(self):
        with pytest.raises(ValueError):
            coefficients(GAUSS, 10, HermiteBasis(5))


class TestRandomCoeffs:
    def test_deterministic(self, basis64, path):
        a = random_coeffs(basis64, 8, path)
        b = random_coeffs(basis64, 8, simulate_path(path.grid, 2.0, path.seed))
        assert a.tobytes() == b.tobytes()

    def test_span_required(self, basis64):
        short = simulate_path(uniform_grid(3.0, 0.01), 2.0, 0)
        with pytest.raises(ValueError, match="at least"):
            random_coeffs(basis64, 4, short)

    def test_variance_and_correlation(self, basis64):
        table = basis64.phi_table(COARSE[:-1], 1)
        A = np.array([random_coeffs(basis64, 1, simulate_path(COARSE, 2.0, derive(31, k)), table)
                      for k in range(10_000)])
        assert A[:, 0].var() == pytest.approx(math.sqrt(2), abs=0.05)
        assert abs(np.corrcoef(A[:, 0], A[:, 1])[0, 1]) <= 0.03


class TestEigenvalues:
    def test_alternating_sign_eigenvalues_exact(self):
        lam = eigenvalues(EigenMode.PAPER, 9)
        assert np.array_equal(lam, np.array([(-1) ** n for n in range(10)], dtype=complex))

    def test_unit_modulus(self):
        lam = eigenvalues(EigenMode.RANDOMIZED, 50, draw_rand_seq(50, 3))
        assert np.max(np.abs(np.abs(lam) - 1)) <= 1e-12

    @pytest.mark.parametrize("seq", [None, [0.1, 0.2], [0.1, 1.0, 0.2], [-0.1, 0.2, 0.3]])
    def test_bad_rand_sequence(self, seq):
        with pytest.raises(ValueError):
            eigenvalues(EigenMode.RANDOMIZED, 2, seq)

    def test_rand_seq_reproducible(self):
        assert draw_rand_seq(5, 7).tobytes() == draw_rand_seq(5, 7).tobytes()


class TestPartialSums:
    @pytest.mark.parametrize("sb", list(SeriesBasis))
    def test_order_zero(self, path, sb):
        e = build_expansion(GAUSS, 8, path, series_basis=sb)
        s0 = 1.0 if sb is SeriesBasis.LITERAL else math.pi ** -0.25
        assert e.partial_sum(0.7, 0) == pytest.approx(e.coeffs[0] * e.random_coeffs[0] * s0,
                                                      rel=1e-15)

    def test_alternating_signs_vanish_on_even_function(self, path):
        a = build_expansion(GAUSS, 32, path, eigen_mode="none")
        b = build_expansion(GAUSS, 32, path, eigen_mode="paper")
        for y in (-1.0, 0.3, 2.0):
            assert a.partial_sum(y, 32) == b.partial_sum(y, 32)

    def test_zero_rand_is_none_mode(self, path):
        a = build_expansion(CATALOG["t_gaussian"], 16, path)
        b = build_expansion(CATALOG["t_gaussian"], 16, path, eigen_mode="random",
                            rand_seq=np.zeros(17))
        assert b.partial_sum(0.5, 16) == pytest.approx(a.partial_sum(0.5, 16), rel=1e-15)

    def test_partial_sums_match_single(self, path):
        e = build_expansion(GAUSS, 32, path)
        got = e.partial_sums(0.5, [0, 4, 32])
        want = [e.partial_sum(0.5, n) for n in (0, 4, 32)]
        np.testing.assert_allclose(got, want, rtol=1e-13)

    def test_literal_series_blows_up(self, path):
        # c_k H_k(0) grows like sqrt(k!) for this f: no convergence to assert
        e = build_expansion(GAUSS, 128, path, series_basis="literal")
        o = build_expansion(GAUSS, 128, path)
        assert abs(e.partial_sum(0.0, 128)) > 1e50
        assert abs(o.partial_sum(0.0, 128)) < 10

    def test_order_out_of_range(self, path):
        with pytest.raises(IndexError):
            build_expansion(GAUSS, 4, path).partial_sum(0.0, 5)


class TestKernel:
    def test_order_zero(self, path):
        e = build_expansion(GAUSS, 4, path, series_basis="literal")
        assert e.kernel_fn(0.3, -1.2, 0) == pytest.approx(e.coeffs[0] * math.pi ** -0.25,
                                                           rel=1e-14)

    @pytest.mark.parametrize("sb", list(SeriesBasis))
    @pytest.mark.parametrize("mode", ["none", "paper"])
    def test_symmetric(self, path, sb, mode):
        e = build_expansion(CATALOG["hermite3_gaussian"], 24, path, eigen_mode=mode,
                            series_basis=sb)
        for y, t in [(0.3, -1.1), (1.7, 0.2), (-2.0, 2.5)]:
            a, b = e.kernel_fn(y, t, 24), e.kernel_fn(t, y, 24)
            assert a == pytest.approx(b, rel=1e-12, abs=1e-12 * max(1.0, abs(a)))

    def test_origin_value_against_direct_sum(self, path):
        e = build_expansion(GAUSS, 128, path)
        ln = log_norms(128)
        direct = math.fsum(float(e.coeffs[k]) * float(hermite_poly(k, 0.0)) ** 2
                           / math.exp(2 * ln[k]) for k in range(129))
        assert e.kernel_fn(0.0, 0.0, 128) == pytest.approx(direct, rel=1e-12)
        assert e.kernel_fn(0.0, 0.0, 96) == pytest.approx(direct, rel=1e-12)


class TestRepresentation:
    @pytest.mark.parametrize("mode", list(EigenMode))
    @pytest.mark.parametrize("sb", list(SeriesBasis))
    @pytest.mark.parametrize("conv", ["paper", "half"])
    def test_identity(self, path, mode, sb, conv):
        basis = HermiteBasis(32, conv)
        e = build_expansion(CATALOG["cauchy_kernel"], 32, path, basis=basis, eigen_mode=mode,
                            series_basis=sb, rand_seq=draw_rand_seq(32, 5))
        for y in (-2.0, 0.0, 1.0):
            for n in (0, 5, 32):
                s = e.partial_sum(y, n)
                assert abs(s - e.target_integral(y, n, path)) <= 1e-9 * (1 + abs(s))

    def test_single_increment(self):
        p = SamplePath(np.array([-6.0, 6.0]), np.array([0.8]), 2.0, 0)
        e = build_expansion(GAUSS, 4, p, series_basis="literal")
        phi0 = math.pi ** -0.25 * math.exp(-36.0)
        assert e.target_integral(1.3, 0, p) == pytest.approx(e.coeffs[0] * phi0 * 0.8, rel=1e-14)

    def test_csv(self, path):
        e = build_expansion(GAUSS, 3, path, eigen_mode="paper")
        lines = e.to_csv().splitlines()
        head = [ln for ln in lines if not ln.startswith("#")]
        assert head[0] == "n,c_n,A_n,lambda_re,lambda_im"
        assert len(head) == 5 and head[2].split(",")[3] == "-1.0"
        trace = e.trace_csv([0.0, 1.0], [0, 3]).splitlines()
        assert trace[0] == "n,y,S_n" and len(trace) == 5


class TestRandomizedRFT:
    def test_zero_rand_is_plain_expansion(self):
        t = np.linspace(-3, 3, 25)
        r = randomized_rft(GAUSS, 20, np.zeros(21))
        np.testing.assert_allclose(r(t), truncated_expansion(GAUSS, 20)(t), rtol=0, atol=1e-15)

    def test_round_trip(self):
        t = np.linspace(-4, 4, 41)
        r = randomized_rft(CATALOG["hermite3_gaussian"], 40, draw_rand_seq(40, 9))
        back = r.inverse()(t)
        plain = truncated_expansion(CATALOG["hermite3_gaussian"], 40)(t)
        assert np.max(np.abs(back - plain)) <= 1e-12

    def test_energy(self):
        r = randomized_rft(GAUSS, 40, draw_rand_seq(40, 10))
        plain = float(np.sum(np.abs(r.coeffs) ** 2))
        assert r.energy() == pytest.approx(plain, rel=1e-12)

    def test_scalar_call(self):
        assert isinstance(randomized_rft(GAUSS, 4, np.zeros(5))(0.0), complex)

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            randomized_rft(GAUSS, 4, [0.1])
        with pytest.raises(ValueError):
            randomized_rft(GAUSS, 8, np.zeros(9), basis=HermiteBasis(4))


class TestProjection:
    def test_in_span(self):
        for n in (2, 3, 10):
            assert projection_error(_poly(2), n) <= 1e-12

    def test_h3_at_order_two(self):
        assert projection_error(_poly(3), 2) == pytest.approx(48 * math.sqrt(math.pi), rel=1e-9)

    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_monotone(self, name):
        e = [projection_error(CATALOG[name], n) for n in range(65)]
        assert all(b <= a + 1e-12 for a, b in zip(e, e[1:]))

    @pytest.mark.parametrize("name", sorted(CATALOG))
    def test_bessel_inequality(self, name, basis64):
        f = CATALOG[name]
        c = coefficients(f, 64, basis64)
        pts = list(f.breakpoints) or None
        norm2, _ = integrate.quad(lambda t: float(f(t)) ** 2 * math.exp(-t * t), -30, 30,
                                  points=pts, limit=400, epsabs=1e-14)
        assert np.all(np.cumsum(c ** 2) <= norm2 + 1e-10)


def test_fourier_eigenrelation_half_weight():
    # classical relation F[psi_n] = (-i)^n psi_n with unitary F
    b = HermiteBasis(8, "half")
    t = np.linspace(-20, 20, 4001)
    dt = t[1] - t[0]
    w = np.full(t.size, dt)
    w[[0, -1]] *= 0.5
    psi = b.phi_table(t, 8)
    omega = np.array([-1.7, -0.4, 0.0, 0.9, 2.3])
    F = np.exp(-1j * np.outer(omega, t)) * w / math.sqrt(2 * math.pi)
    want = b.phi_table(omega, 8)
    for n in range(9):
        got = F @ psi[n]
        assert np.max(np.abs(got - (-1j) ** n * want[n])) <= 1e-6
