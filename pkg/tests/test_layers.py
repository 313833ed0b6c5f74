import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fraclayer.layers import (
    LayerContext,
    RegimeAgreementError,
    classical_conv_layer,
    conv_layer_correction,
    conv_layer_correction_general,
    conv_layer_limit,
    fit_theta_conv,
    fit_theta_conv_general,
    mu_reac,
    reac_layer0,
    reac_layer1_model,
    reduced_solution,
    vstar_half_closed,
    vstar_half_series,
)
from fraclayer import layers
from fraclayer.specfun import erfc, mittag_leffler
from fraclayer.verify import exp_fit_misfit

# frozen 60-digit mpmath values (erfc closed form, high-precision ML series)
VSTAR_MP = {1.0: 0.55596274325131957831, 4.0: 1.5121540105015308917, 30.0: 5.2817563258113255574,
            1e4: 111.84355832333424682, 1e8: 11282.791727374083812}
V0_MP = {0.5: 0.73178647552380408906, 1.0: 0.59323879913782398811, 4.0: 0.30863733028686500174,
         10.0: 0.18691682880017552294, 100.0: 0.056700943668263608306, 1000.0: 0.017850161748539067595}


def test_reduced_solution():
    assert reduced_solution(1.0) == 0.0
    assert reduced_solution(0.0) == -1.0
    assert reduced_solution(0.5) == -0.5


def test_classical_layer():
    assert classical_conv_layer(0.0, 0.01) == 1.0
    assert classical_conv_layer(1.0, 0.01) == 0.0
    assert classical_conv_layer(0.05, 0.01) == pytest.approx(math.exp(-5.0), rel=1e-12)
    # no overflow or nan for tiny eps
    assert classical_conv_layer(0.5, 1e-5) == 0.0
    e = 0.5
    direct = (math.exp(-0.3 / e) - math.exp(-1 / e)) / (1 - math.exp(-1 / e))
    assert classical_conv_layer(0.3, e) == pytest.approx(direct, rel=1e-14)


# V* ------------------------------------------------------------------------


@pytest.mark.parametrize("xi", sorted(VSTAR_MP))
def test_vstar_closed_against_mpmath(xi):
    assert vstar_half_closed(xi) == pytest.approx(VSTAR_MP[xi], rel=1e-13)


def test_vstar_examples():
    assert vstar_half_series(0.0, 5) == 0.0
    assert vstar_half_closed(0.0) == 0.0
    assert vstar_half_series(1.0, 50) == pytest.approx(vstar_half_closed(1.0), abs=1e-12)
    assert vstar_half_closed(1.0) == pytest.approx(math.e * erfc(1.0) + 2 / math.sqrt(math.pi) - 1, rel=1e-14)
    assert vstar_half_series(4.0, 60) == pytest.approx(4.0 * mittag_leffler(0.5, 2.0, -2.0), abs=1e-10)
    assert vstar_half_closed(1e8) == pytest.approx(2e4 / math.sqrt(math.pi) - 1.0, rel=1e-4)


def test_vstar_series_closed_equivalence():
    xi = np.linspace(0.0, 30.0, 300)
    s = vstar_half_series(xi, 200)
    c = vstar_half_closed(xi)
    assert np.max(np.abs(s - c) / (1.0 + np.abs(c))) <= 1e-8


def test_vstar_series_flag_and_range():
    v, ok = vstar_half_series(np.array([0.0, 2.0, 25.0]), 200, return_flag=True)
    assert ok.all()
    _, ok = vstar_half_series(25.0, 5, return_flag=True)
    assert not ok
    with pytest.raises(ValueError):
        vstar_half_series(30.5, 200)
    with pytest.raises(ValueError):
        vstar_half_series(-1.0, 10)


def test_vstar_ml_form():
    for xi in np.linspace(0.0, 25.0, 51):
        assert vstar_half_closed(xi) == pytest.approx(xi * mittag_leffler(0.5, 2.0, -math.sqrt(xi)), abs=1e-9)


@given(st.floats(0.0, 1e12))
def test_vstar_increasing_and_asymptotic(xi):
    v = vstar_half_closed(xi)
    assert v >= 0.0
    assert vstar_half_closed(xi * 1.1 + 1e-6) >= v
    if xi > 1e4:
        asym = 2 * math.sqrt(xi / math.pi) - 1 + 1 / math.sqrt(math.pi * xi)
        assert v == pytest.approx(asym, rel=1e-10)


# theta and the layer correction ----------------------------------------------


def test_theta_examples():
    assert fit_theta_conv(1e-4) / 1e-4 == pytest.approx(-0.88630546779820457394, rel=1e-12)
    assert fit_theta_conv(1e-4) / 1e-4 == pytest.approx(-math.sqrt(math.pi) / 2, rel=1e-3)
    assert fit_theta_conv(1e-2) == pytest.approx(-1 / VSTAR_MP[1e4], rel=1e-13)
    eps = np.logspace(-1, -8, 15)
    th = np.array([fit_theta_conv(e) for e in eps])
    assert np.all(th < 0) and np.all(np.diff(np.abs(th)) < 0)


def test_theta_general_matches_half():
    for eps in (0.3, 0.05, 1e-2):
        assert fit_theta_conv_general(eps, 0.5) == pytest.approx(fit_theta_conv(eps), rel=1e-8)


def test_correction_examples():
    for eps in (0.5, 1e-2, 1e-4):
        assert conv_layer_correction(0.0, eps) == 1.0
        assert conv_layer_correction(1.0, eps) == 0.0
    assert conv_layer_correction(0.25, 1e-4) == pytest.approx(0.5, abs=1e-3)
    assert conv_layer_correction(0.25, 1e-4) == pytest.approx(0.50004430777272540615, rel=1e-12)
    with pytest.raises(ValueError):
        conv_layer_correction(1.5, 1e-2)


@given(st.floats(0.0, 1.0), st.floats(1e-6, 0.9))
def test_correction_in_unit_interval(x, eps):
    v = conv_layer_correction(x, eps)
    assert 0.0 <= v <= 1.0


def test_limit_values():
    assert conv_layer_limit(0.0) == 1.0
    assert conv_layer_limit(1.0) == 0.0
    assert conv_layer_limit(0.25) == 0.5


@pytest.mark.parametrize("x0", [0.04, 0.25, 0.64])
def test_limit_law(x0):
    dev = [abs(conv_layer_correction(x0, e) - conv_layer_limit(x0)) for e in (1e-1, 1e-2, 1e-3, 1e-4)]
    assert all(a > b for a, b in zip(dev, dev[1:]))
    for e, d in zip((1e-3, 1e-4), dev[2:]):
        assert d <= 0.886 * e * (1 - math.sqrt(x0)) * 1.5


def test_non_exponential_layer():
    assert exp_fit_misfit(1e-4) > 0.05


def test_correction_general_alpha():
    x = np.array([0.0, 0.1, 0.5, 1.0])
    half = conv_layer_correction_general(x, 1e-2, 0.5)
    assert half == pytest.approx(conv_layer_correction(x, 1e-2), abs=1e-8)
    other = conv_layer_correction_general(x, 1e-2, 0.3)
    assert other[0] == 1.0 and other[-1] == 0.0
    assert np.all(np.diff(other) < 0)


def test_layer_context():
    ctx = LayerContext(0.5, 1e-2)
    assert ctx.stretch_conv == 2.0
    assert ctx.stretch_reac == pytest.approx(2 / 3)
    assert ctx.xi_conv(1.0) == pytest.approx(1e4)
    assert ctx.theta == fit_theta_conv(1e-2)
    assert ctx.mu == mu_reac(1e-2, 0.5)
    for alpha, eps in ((0.5, 0.0), (0.5, 1.0), (1.0, 0.1), (-0.1, 0.1)):
        with pytest.raises(ValueError):
            LayerContext(alpha, eps)


# reaction layers --------------------------------------------------------------


@pytest.mark.parametrize("xi", sorted(V0_MP))
def test_reac_layer0_against_mpmath(xi):
    assert reac_layer0(xi, 0.5) == pytest.approx(V0_MP[xi], rel=1e-8)


def test_reac_layer0_examples():
    assert reac_layer0(0.0, 0.5) == 1.0
    assert reac_layer0(1e4, 0.5) == pytest.approx(1 / math.sqrt(math.pi * 1e4), rel=1e-2)
    assert layers._reac_layer0_ml(4.0, 0.5) == pytest.approx(layers._reac_layer0_transform(4.0, 0.5), rel=1e-5)


@pytest.mark.parametrize("xi", np.logspace(2, 4, 9))
def test_reac_layer0_decay(xi):
    assert 0.99 <= reac_layer0(xi, 0.5) * math.sqrt(math.pi * xi) <= 1.01


def test_reac_layer0_two_term_tail():
    xi = 300.0
    tail = 1 / math.sqrt(math.pi * xi) + xi**-1.5 / (2 * math.sqrt(math.pi))
    assert reac_layer0(xi, 0.5) == pytest.approx(tail, rel=1e-4)


@pytest.mark.parametrize("alpha", [0.2, 0.5, 0.8])
def test_reac_layer0_monotone_bounded(alpha):
    xi = np.logspace(-2, 4, 40)
    v = reac_layer0(xi, alpha)
    assert np.all(np.diff(v) < 0) and np.all(v > 0)
    scaled = v * xi ** (1 - alpha)
    assert np.max(scaled[-10:]) < 2 * np.min(scaled[-10:])


def test_reac_layer0_agreement_guard(monkeypatch):
    monkeypatch.setattr(layers, "_reac_layer0_transform", lambda xi, alpha: 0.0)
    with pytest.raises(RegimeAgreementError):
        reac_layer0(5.0, 0.5)


def test_mu_examples():
    mu6 = mu_reac(1e-6, 0.5)
    assert mu6 * 1e-6 ** (-1 / 3) * math.sqrt(math.pi) == pytest.approx(1.0, abs=1e-2)
    assert mu_reac(1e-3, 0.5) / mu6 == pytest.approx(10.0, rel=0.05)
    near_one = mu_reac(1 - 1e-12, 0.5)
    assert 0 < near_one < 1
    assert near_one == pytest.approx(reac_layer0(1.0, 0.5), rel=1e-9)


def test_layer1_model():
    mu = 0.3
    assert reac_layer1_model(1.0, 1e-2, 0.5, mu) == pytest.approx(1 - mu)
    w = 1e-2 ** (2 / 3)
    assert reac_layer1_model(1 - w, 1e-2, 0.5, 0.0) == pytest.approx(math.exp(-1.0))
    assert reac_layer1_model(0.0, 1e-2, 0.5, 0.0) == pytest.approx(math.exp(-1e-2 ** (-2 / 3)), rel=1e-12)
    assert reac_layer1_model(0.0, 1e-2, 0.5, 0.0) == pytest.approx(4.4e-10, rel=0.02)
    x = np.linspace(0, 1, 11)
    assert np.all(np.diff(reac_layer1_model(x, 1e-2, 0.5, mu)) > 0)
