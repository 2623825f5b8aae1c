import numpy as np
import pytest
import scipy.interpolate

import libmetaact.splines as splines
from libmetaact.metaglobal import ConfigError


def test_zero_spline():
    s = splines.init_spline("zeros", n_c=50, a=-5.0, b=5.0)
    assert s.n_c == 50
    assert np.all(s.psi == 0.0)
    x = np.linspace(-10.0, 10.0, 101)
    assert np.all(splines.spline_eval(s, x) == 0.0)


def test_relu_init_reproduces_relu(relu_spline_51):
    s = relu_spline_51
    x = np.linspace(-5.0, 5.0, 1001)
    assert np.allclose(s(x), np.maximum(0.0, x), rtol=0.0, atol=1e-12)
    assert s(0.0) == 0.0
    assert s(10.0) == pytest.approx(5.0, abs=1e-12)
    assert s(-10.0) == 0.0


def test_linear_interpolation():
    s = splines.SplineActivation([0.0, 1.0], a=0.0, b=1.0, mode="linear")
    assert s(0.25) == pytest.approx(0.25, abs=1e-15)


def test_init_kinds():
    assert np.array_equal(splines.init_spline("relu", 3, -1.0, 1.0).psi, [0, 0, 1])
    assert np.array_equal(
        splines.init_spline("identity", 3, -1.0, 1.0).psi, [-1, 0, 1]
    )
    with pytest.raises(ConfigError):
        splines.init_spline("sigmoid", 3, -1.0, 1.0)
    with pytest.raises(ConfigError):
        splines.init_spline("zeros", 1, -1.0, 1.0)


@pytest.mark.parametrize("mode", ["nearest", "linear", "cubic"])
def test_grid_exactness_and_extrapolation(mode, random_psi):
    s = splines.SplineActivation(random_psi, a=-2.0, b=3.0, mode=mode)
    assert np.array_equal(s(s.grid), s.psi)
    assert s(-2.5) == s.psi[0]
    assert s(-100.0) == s.psi[0]
    assert s(3.5) == s.psi[-1]
    assert s(1e6) == s.psi[-1]


@pytest.mark.parametrize("mode", ["nearest", "linear", "cubic"])
def test_nan_samples(mode, random_psi):
    s = splines.SplineActivation(random_psi, a=-2.0, b=3.0, mode=mode)
    y = s(np.array([np.nan, 0.5, np.inf, -np.inf]))
    assert np.isnan(y[0])
    assert y[1] == s(0.5)
    assert y[2] == s.psi[-1]
    assert y[3] == s.psi[0]
    assert np.isnan(s.derivative(np.nan, 1))
    g = splines.spline_scatter(
        np.array([np.nan, 0.5]), np.ones(2), (s.n_c,), -2.0, 3.0, mode
    )
    assert np.all(np.isnan(g[:2]))


def test_nearest_tie_goes_to_lower_index():
    s = splines.SplineActivation([0.0, 1.0, 2.0], a=0.0, b=2.0, mode="nearest")
    assert s(0.5) == 0.0
    assert s(0.5000001) == 1.0
    assert s(1.5) == 1.0


def test_linear_mode_is_piecewise_linear(random_psi):
    s = splines.SplineActivation(random_psi, a=-1.0, b=1.0, mode="linear")
    h = 2.0 / (s.n_c - 1)
    # dense samples strictly inside cell 3
    x = -1.0 + 3 * h + np.linspace(0.1, 0.9, 9) * h
    second_diff = np.diff(s(x), n=2)
    assert np.allclose(second_diff, 0.0, atol=1e-13)


def test_cubic_mode_matches_natural_cubic_spline(random_psi):
    s = splines.SplineActivation(random_psi, a=-1.0, b=1.0, mode="cubic")
    oracle = scipy.interpolate.CubicSpline(s.grid, s.psi, bc_type="natural")
    x = np.linspace(-1.0, 1.0, 333)
    assert np.allclose(s(x), oracle(x), rtol=0.0, atol=1e-10)
    assert np.allclose(s.derivative(x, 1), oracle(x, 1), atol=1e-9)
    assert np.allclose(s.derivative(x, 2), oracle(x, 2), atol=1e-8)
    assert s.derivative(2.0, 1) == 0.0


def test_continuity(random_psi):
    for mode in ["linear", "cubic"]:
        s = splines.SplineActivation(random_psi, a=-1.0, b=1.0, mode=mode)
        knots = s.grid[1:-1]
        left = s(knots - 1e-9)
        right = s(knots + 1e-9)
        assert np.allclose(left, right, atol=1e-6)


def test_per_column_values():
    psi = np.array([[0.0, 1.0], [1.0, 0.0]])
    x = np.array([[0.25, 0.25], [1.0, 0.0]])
    y = splines.spline_values(x, psi, 0.0, 1.0, "linear")
    assert np.allclose(y, [[0.25, 0.75], [1.0, 1.0]])


def test_invalid_spline():
    with pytest.raises(ConfigError):
        splines.SplineActivation([1.0], a=0.0, b=1.0)
    with pytest.raises(ConfigError):
        splines.SplineActivation([1.0, 2.0], a=1.0, b=1.0)
    with pytest.raises(ConfigError):
        splines.SplineActivation([1.0, 2.0], mode="quadratic")
    with pytest.raises(ConfigError):
        splines.SplineActivation.from_dict({"n_c": 3, "a": 0, "b": 1, "psi": [0, 1]})


def test_immutable(relu_spline_51):
    with pytest.raises(ValueError):
        relu_spline_51.psi[0] = 1.0
    s2 = relu_spline_51.with_psi(np.ones(51))
    assert relu_spline_51.psi[0] == 0.0
    assert s2.psi[0] == 1.0
    assert s2.same_grid(relu_spline_51)


def test_tanh_prefactor():
    assert splines.tanh_prefactor(1.0, 0.0) == 0.0
    assert splines.tanh_prefactor(2.0, 0.5) == pytest.approx(0.7615941559557649)
    assert splines.tanh_prefactor(1e4, 0.1) == pytest.approx(1.0)
    with pytest.raises(ConfigError):
        splines.tanh_prefactor(0.0, 1.0)
    with pytest.raises(ConfigError):
        splines.tanh_prefactor(-1.0, 1.0)


def test_resample_spline(relu_spline_51):
    s = splines.resample_spline(relu_spline_51, 11)
    assert s.n_c == 11
    x = np.linspace(-5.0, 5.0, 101)
    assert np.allclose(s(x), np.maximum(0.0, x), atol=1e-12)
