import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.linalg import expm
from scipy.spatial.transform import Rotation

from spinframe.integrate import (
    cumulative_simpson,
    midpoint_values,
    nearest_rotation,
    orthonormalize,
    propagate_linear,
    rk4_step_matrices,
)


class TestMidpointValues:
    @given(st.lists(st.floats(-5, 5), min_size=4, max_size=4), st.integers(4, 30))
    def test_exact_for_cubics(self, coeffs, n):
        x = np.linspace(0, 1, n)
        poly = np.polynomial.Polynomial(coeffs)
        mid = midpoint_values(poly(x))
        assert np.allclose(mid, poly(0.5 * (x[:-1] + x[1:])), atol=1e-10)

    def test_vector_valued(self):
        x = np.linspace(0, 1, 11)
        f = np.stack([np.sin(x), np.cos(x)], axis=1)
        mid = midpoint_values(f)
        xm = 0.5 * (x[1:] + x[:-1])
        assert mid.shape == (10, 2)
        assert np.allclose(mid, np.stack([np.sin(xm), np.cos(xm)], axis=1), atol=1e-6)

    def test_fourth_order(self):
        errs = []
        for n in (41, 81):
            x = np.linspace(0, 2, n)
            errs.append(np.max(np.abs(midpoint_values(np.exp(x)) - np.exp(0.5 * (x[1:] + x[:-1])))))
        assert errs[0] / errs[1] > 14

    def test_too_short(self):
        with pytest.raises(ValueError):
            midpoint_values([1.0, 2.0, 3.0])


class TestCumulativeSimpson:
    def test_sine_integral(self):
        # oracle: int_0^pi sin = 2 (scipy quad agrees)
        assert quad(np.sin, 0, np.pi)[0] == pytest.approx(2.0, abs=1e-14)
        x = np.linspace(0, np.pi, 201)
        out = cumulative_simpson(np.sin(x), x[1] - x[0])
        assert out[-1] == pytest.approx(2.0, abs=1e-8)
        assert np.max(np.abs(out - (1 - np.cos(x)))) <= 1e-8

    @pytest.mark.parametrize("n", [5, 6, 7, 100, 101])
    def test_exact_for_quadratics(self, n):
        x = np.linspace(0, 2, n)
        out = cumulative_simpson(3 * x**2 - x + 1, x[1] - x[0], initial=0.5)
        assert np.allclose(out, x**3 - 0.5 * x**2 + x + 0.5, atol=1e-12)

    def test_fourth_order_at_odd_indices(self):
        errs = []
        for n in (41, 81):
            x = np.linspace(0, 3, n)
            out = cumulative_simpson(np.exp(x), x[1] - x[0])
            errs.append(np.max(np.abs(out - (np.exp(x) - 1))[1::2]))
        assert errs[0] / errs[1] > 14

    def test_tiny_inputs(self):
        assert cumulative_simpson([4.0], 0.1, initial=2.0).tolist() == [2.0]
        assert cumulative_simpson([0.0, 2.0], 0.5).tolist() == [0.0, 0.5]


class TestRK4:
    def test_constant_generator_matches_expm(self):
        a = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 2.0], [0.0, -2.0, 0.0]])
        h, n = 1e-2, 301
        grid = np.broadcast_to(a, (n, 3, 3))
        steps = rk4_step_matrices(grid, grid[:-1], h)
        y = propagate_linear(steps, np.eye(3), project=None)
        assert np.allclose(y[-1], expm(a * h * (n - 1)), atol=1e-9)

    def test_scalar_ode_order(self):
        # y' = s y, y(0) = 1 -> exp(s^2 / 2)
        def run(n):
            s = np.linspace(0, 1, n)
            a = s[:, None, None].astype(float)
            steps = rk4_step_matrices(a, midpoint_values(a), s[1] - s[0])
            return abs(propagate_linear(steps, np.ones(1))[-1, 0] - np.exp(0.5))

        e1, e2 = run(21), run(41)
        assert e1 < 1e-6
        assert e1 / e2 > 14

    def test_projection_every(self):
        calls = []

        def project(y):
            calls.append(1)
            return y

        steps = np.broadcast_to(np.eye(2), (10, 2, 2))
        propagate_linear(steps, np.ones(2), project=project, every=3)
        assert len(calls) == 3
        calls.clear()
        propagate_linear(steps, np.ones(2), project=project, every=None)
        assert not calls


class TestOrthonormalization:
    @given(st.integers(0, 2**32 - 1), st.floats(1e-8, 1e-4))
    def test_sweep_squares_the_defect(self, seed, eps):
        rng = np.random.default_rng(seed)
        r = Rotation.random(random_state=seed).as_matrix()
        f = r + eps * rng.standard_normal((3, 3))
        before = np.max(np.abs(f @ f.T - np.eye(3)))
        g = orthonormalize(f)
        after = np.max(np.abs(g @ g.T - np.eye(3)))
        assert after <= max(10 * before**2, 1e-14)

    def test_nearest_rotation(self):
        r = Rotation.from_euler("xyz", [0.3, -1.0, 2.0]).as_matrix()
        assert np.allclose(nearest_rotation(1.001 * r), r, atol=1e-14)
        with pytest.raises(ValueError, match="left-handed"):
            nearest_rotation(np.diag([1.0, 1.0, -1.0]))


def test_long_recursion_keeps_float64_floor_away():
    # 10^5 steps of a constant rotation: accumulated rounding stays far below 1e-13
    a = np.array([[0.0, -1.0], [1.0, 0.0]])
    n, h = 100_001, 1e-4
    grid = np.broadcast_to(a, (n, 2, 2))
    steps = rk4_step_matrices(grid, grid[:-1], h)
    y = propagate_linear(steps, np.array([1.0, 0.0]), project=None)
    assert y.dtype == np.float64
    t = h * (n - 1)
    assert np.max(np.abs(y[-1] - [np.cos(t), np.sin(t)])) <= 1e-13
