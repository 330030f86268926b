import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from rfhlab._rng import derive, make_rng
from rfhlab.stable import SamplePath, StableLaw, sample_stable, simulate_path, uniform_grid


class TestStableLaw:
    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.01])
    def test_rejects_alpha_outside_range(self, alpha):
        with pytest.raises(ValueError):
            StableLaw(alpha)

    def test_rejects_negative_scale(self):
        with pytest.raises(ValueError):
            StableLaw(2.0, -1.0)

    def test_zero_scale_gives_zero(self):
        assert sample_stable(StableLaw(1.5, 0.0), make_rng(1)) == 0.0

    def test_gaussian_variance_is_two(self):
        z = sample_stable(StableLaw(2.0, 1.0), make_rng(11), 100_000)
        assert z.var() == pytest.approx(2.0, abs=0.05)

    @pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8])
    def test_empirical_characteristic_function(self, alpha):
        z = sample_stable(StableLaw(alpha, 1.0), make_rng(12), 100_000)
        assert np.cos(z).mean() == pytest.approx(math.exp(-1.0), abs=0.01)

    def test_scale_enters_characteristic_function(self):
        law = StableLaw(1.5, 0.7)
        z = law.sample(make_rng(13), 100_000)
        assert np.cos(z).mean() == pytest.approx(float(law.char_fn(1.0)), abs=0.01)

    def test_near_two_is_close_to_gaussian(self):
        z = sample_stable(StableLaw(1.999, 1.0), make_rng(14), 20_000)
        assert stats.kstest(z, stats.norm(scale=math.sqrt(2)).cdf).pvalue > 0.01


class TestSimulatePath:
    def test_single_step_is_normal_with_variance_two(self):
        x = np.array([simulate_path([0.0, 1.0], 2.0, derive(5, k)).increments[0]
                      for k in range(3000)])
        assert stats.kstest(x, stats.norm(scale=math.sqrt(2)).cdf).pvalue > 0.01

    def test_refinement_preserves_law(self):
        x = np.array([simulate_path([0.0, 0.5, 1.0], 2.0, derive(6, k)).values()[-1]
                      for k in range(3000)])
        assert stats.kstest(x, stats.norm(scale=math.sqrt(2)).cdf).pvalue > 0.01

    @pytest.mark.parametrize("alpha", [1.5, 2.0])
    def test_deterministic(self, alpha):
        g = uniform_grid(1.0, 0.1)
        a = simulate_path(g, alpha, (3, 0, 9))
        b = simulate_path(g, alpha, (3, 0, 9))
        assert a.increments.tobytes() == b.increments.tobytes()

    def test_self_similarity(self):
        # X(4) ~ 2 X(1) at alpha = 2
        a = np.array([simulate_path([0.0, 4.0], 2.0, derive(7, k)).increments[0]
                      for k in range(5000)])
        b = np.array([2.0 * simulate_path([0.0, 1.0], 2.0, derive(8, k)).increments[0]
                      for k in range(5000)])
        assert stats.ks_2samp(a, b).pvalue > 0.01

    def test_disjoint_increments_uncorrelated(self):
        g = [0.0, 0.5, 1.0]
        inc = np.array([simulate_path(g, 2.0, derive(9, k)).increments for k in range(10_000)])
        r = np.corrcoef(inc[:, 0], inc[:, 1])[0, 1]
        assert abs(r) <= 3 / math.sqrt(10_000)

    def test_increment_scale_follows_step(self):
        inc = np.array([simulate_path([0.0, 0.25, 1.0], 2.0, derive(10, k)).increments
                        for k in range(20_000)])
        np.testing.assert_allclose(inc.var(axis=0), [0.5, 1.5], rtol=0.05)

    @pytest.mark.parametrize("grid", [[0.0], [0.0, 0.0], [1.0, 0.0], [0.0, 2.0, 1.0]])
    def test_bad_grid(self, grid):
        with pytest.raises(ValueError):
            simulate_path(grid, 2.0, 0)

    def test_values_start_at_zero(self):
        p = simulate_path([0.0, 1.0, 2.0], 1.5, 1)
        v = p.values()
        assert v[0] == 0.0 and v[-1] == pytest.approx(p.increments.sum())

    def test_csv_round_trip(self):
        p = simulate_path(uniform_grid(1.0, 0.3), 1.5, (4, 0, 2))
        q = SamplePath.from_csv(p.to_csv())
        assert q.grid.tobytes() == p.grid.tobytes()
        assert q.increments.tobytes() == p.increments.tobytes()
        assert q.alpha == 1.5 and q.seed == (4, 0, 2)
        assert p.to_csv().splitlines()[2] == "t,dX"


class TestUniformGrid:
    def test_half_steps(self):
        np.testing.assert_array_equal(uniform_grid(1, 0.5), [-1, -0.5, 0, 0.5, 1])

    def test_fine_grid(self):
        g = uniform_grid(6, 0.001)
        assert g.size == 12001 and g[0] == -6.0 and g[-1] == 6.0
        assert 0.0 in g

    def test_short_last_step(self):
        np.testing.assert_allclose(uniform_grid(1, 0.3),
                                   [-1, -0.7, -0.4, -0.1, 0.2, 0.5, 0.8, 1], atol=1e-15)

    @pytest.mark.parametrize("T,h", [(0, 0.1), (1, 0), (1, 3)])
    def test_rejects_bad_arguments(self, T, h):
        with pytest.raises(ValueError):
            uniform_grid(T, h)

    @given(T=st.floats(0.5, 10), h=st.floats(0.01, 0.5))
    def test_properties(self, T, h):
        g = uniform_grid(T, h)
        d = np.diff(g)
        assert g[0] == -T and g[-1] == T
        assert np.all(d > 0) and np.all(d <= h * (1 + 1e-9))
