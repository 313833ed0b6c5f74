import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fraclayer.laplace import (
    CONTOUR_SCALE_MAX,
    LaplaceConvergenceError,
    TransformFn,
    conv_layer_transform,
    reac_layer0_transform_reduced,
    talbot_invert,
    talbot_invert_full,
)
from fraclayer.layers import _reac_layer0_ml, vstar_half_series
from fraclayer.specfun import mittag_leffler

ONE = TransformFn(lambda s: 1.0 / s, "1/s")
EXP = TransformFn(lambda s: 1.0 / (s + 1.0), "1/(s+1)")
SQRT_T = TransformFn(lambda s: s**-1.5, "s^-3/2")


def test_standard_pairs():
    assert talbot_invert(ONE, 3.7) == pytest.approx(1.0, rel=1e-12)
    assert talbot_invert(EXP, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-12)
    assert talbot_invert(SQRT_T, 4.0) == pytest.approx(2.0 * math.sqrt(4.0 / math.pi), rel=1e-12)


@pytest.mark.parametrize("t", [1e-2, 0.1, 1.0, 10.0, 100.0, 1e3])
def test_accuracy_range(t):
    assert talbot_invert(SQRT_T, t) == pytest.approx(t**0.5 / math.gamma(1.5), rel=1e-8)
    # exp(-t) drops below the rounding level of an O(1) contour sum
    assert talbot_invert(EXP, t) == pytest.approx(math.exp(-t), rel=1e-8, abs=1e-14)


def test_diagnostics():
    inv = talbot_invert_full(EXP, 2.0)
    assert inv.nodes == 64
    assert abs(inv.imag_residue) <= 1e-8 * abs(inv.value)
    assert inv.refinement_change <= 1e-8 * abs(inv.value)
    assert inv.scale <= CONTOUR_SCALE_MAX


@pytest.mark.parametrize("t", [0.0, -1.0])
def test_rejects_nonpositive_t(t):
    with pytest.raises(ValueError):
        talbot_invert(ONE, t)


def test_rejects_too_few_nodes():
    with pytest.raises(ValueError):
        talbot_invert(ONE, 1.0, 8)


def test_nonconvergence_is_detected():
    # not analytic anywhere: refinement cannot settle
    rough = TransformFn(lambda s: np.abs(s.imag) / s**2, "rough")
    with pytest.raises(LaplaceConvergenceError):
        talbot_invert(rough, 1.0)
    assert np.isfinite(talbot_invert(rough, 1.0, check=False))


def test_pole_near_contour_is_detected():
    # exp(3t) lies outside the contract; the contour grazes the pole
    with pytest.raises(LaplaceConvergenceError):
        talbot_invert(TransformFn(lambda s: 1.0 / (s - 3.0)), 1.0)


@pytest.mark.parametrize("t", [0.05, 0.5, 3.0, 40.0, 700.0])
def test_m_refinement(t):
    for fn in (SQRT_T, conv_layer_transform(0.5, -0.3), reac_layer0_transform_reduced(0.5)):
        a = talbot_invert(fn, t, 64)
        b = talbot_invert(fn, t, 128)
        assert abs(a - b) <= 1e-8 * abs(b)


@given(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0), st.floats(0.05, 50.0))
def test_linearity(a, b, t):
    f, g = SQRT_T, EXP
    combo = TransformFn(lambda s: a * f(s) + b * g(s))
    lhs = talbot_invert(combo, t, check=False)
    rhs = a * talbot_invert(f, t, check=False) + b * talbot_invert(g, t, check=False)
    assert abs(lhs - rhs) <= 1e-13 * (abs(a) * t**0.5 + abs(b) + 1.0)


# layer transforms --------------------------------------------------------------


def test_conv_transform_value_at_one():
    assert conv_layer_transform(0.5, 0.0)(1.0) == pytest.approx(1.0)


@pytest.mark.parametrize("theta", [-1.0, 0.3])
def test_conv_transform_initial_value(theta):
    fn = conv_layer_transform(0.5, theta)
    s = 1e12 * np.exp(1j * np.array([0.0, 1.0, -2.5]))
    assert np.allclose(s * fn(s), 1.0, rtol=1e-5)


@pytest.mark.parametrize("theta", [-1.0, -0.1, 0.0, 0.5])
@pytest.mark.parametrize("xi", [0.1, 0.5, 1.0, 2.0, 5.0, 10.0])
def test_conv_transform_oracle(theta, xi):
    fn = conv_layer_transform(0.5, theta)
    vstar = xi * mittag_leffler(0.5, 2.0, -math.sqrt(xi))
    ref = 1.0 + theta * vstar
    got = talbot_invert(fn, xi)
    assert abs(got - ref) <= 1e-6 * max(abs(ref), 1.0)


def test_conv_transform_series_cross_check():
    # theta = -0.1, xi = 1 against the power series route
    got = talbot_invert(conv_layer_transform(0.5, -0.1), 1.0)
    assert got == pytest.approx(1.0 - 0.1 * vstar_half_series(1.0, 60), abs=1e-6)


def test_conv_transform_rejects_alpha():
    for alpha in (0.0, 1.0, -0.2):
        with pytest.raises(ValueError):
            conv_layer_transform(alpha, 0.0)


def test_reac_transform_value_at_one():
    assert reac_layer0_transform_reduced(0.5)(1.0) == pytest.approx(2.0 / 3.0)


def test_reac_transform_tail():
    got = talbot_invert(reac_layer0_transform_reduced(0.5), 1e4)
    assert got * math.sqrt(math.pi * 1e4) == pytest.approx(1.0, rel=1e-2)


def test_reac_transform_initial_value():
    assert talbot_invert(reac_layer0_transform_reduced(0.5), 1e-6) == pytest.approx(1.0, abs=1e-2)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
def test_reac_transform_matches_ml_route(alpha):
    # dual oracle in the overlap window
    for xi in (2.0, 4.0, 8.0):
        got = talbot_invert(reac_layer0_transform_reduced(alpha), xi)
        assert got == pytest.approx(_reac_layer0_ml(xi, alpha), rel=1e-7)


def test_reac_general_guard_is_continuous():
    fn = reac_layer0_transform_reduced(0.3)
    s = 1.0 + np.array([-2e-6, -5e-7, 0.0, 5e-7, 2e-6, 1e-6j, 3e-6j])
    v = fn(s)
    assert np.all(np.isfinite(v))
    assert np.allclose(v, v[2], rtol=5e-6)
    assert v[2] == pytest.approx(1.0 / 1.7)


def test_reac_general_matches_cancelled_form():
    s = np.array([0.3, 2.0, 5.0 + 4.0j, -3.0 + 0.1j, 0.01 - 0.2j])
    near_half = reac_layer0_transform_reduced(0.5 + 1e-12)
    half = reac_layer0_transform_reduced(0.5)
    assert np.allclose(near_half(s), half(s), rtol=1e-10)
