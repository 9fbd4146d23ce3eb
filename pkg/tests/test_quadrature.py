import math

import numpy as np
import pytest

from momentkit.errors import QuadratureError
from momentkit.quadrature import _G7_W, _K15_W, _K15_X, exp_sinh, gauss_kronrod, tanh_sinh


def test_kronrod_weights_sum_to_interval_length():
    assert _K15_W.sum() == pytest.approx(2.0, abs=1e-15)
    assert _G7_W.sum() == pytest.approx(2.0, abs=1e-15)
    assert np.all(np.diff(_K15_X) > 0)


@pytest.mark.parametrize("degree", range(0, 23))
def test_kronrod_rule_exact_for_polynomials(degree):
    exact = (1 - (-1) ** (degree + 1)) / (degree + 1)
    assert _K15_W @ _K15_X**degree == pytest.approx(exact, abs=1e-14)


@pytest.mark.parametrize("degree", range(0, 14))
def test_gauss_rule_exact_for_polynomials(degree):
    exact = (1 - (-1) ** (degree + 1)) / (degree + 1)
    assert _G7_W @ _K15_X**degree == pytest.approx(exact, abs=1e-14)


def test_gauss_kronrod_batch():
    ks = np.arange(5)
    val, err = gauss_kronrod(lambda t: t[:, None] ** ks[None, :], 0.0, 1.0)
    np.testing.assert_allclose(val, 1.0 / (ks + 1), rtol=0, atol=1e-15)
    assert err < 1e-13


def test_gauss_kronrod_near_pole_with_breakpoint():
    # int_0^1 dt / ((t - 0.5)^2 + 1e-6) = 2 * atan(500) / 1e-3
    val, _ = gauss_kronrod(lambda t: 1.0 / ((t - 0.5) ** 2 + 1e-6), 0.0, 1.0, tol=1e-10, breakpoints=[0.5])
    assert val[0] == pytest.approx(2e3 * math.atan(500.0), rel=1e-13)


def test_gauss_kronrod_gives_up_with_estimate():
    with pytest.raises(QuadratureError) as info:
        gauss_kronrod(lambda t: np.sin(1e4 * t) ** 2, 0.0, 1.0, tol=1e-15, max_intervals=16)
    assert info.value.estimate > 0


def test_tanh_sinh_endpoint_singularity():
    val, _ = tanh_sinh(lambda t: 1.0 / np.sqrt(t), 0.0, 1.0)
    assert val[0] == pytest.approx(2.0, abs=1e-12)
    val, _ = tanh_sinh(lambda t: np.log(t), 0.0, 1.0)
    assert val[0] == pytest.approx(-1.0, abs=1e-12)


def test_exp_sinh_gamma_integrals():
    for a in (0.5, 2.0, 7.5):
        val, _ = exp_sinh(lambda u: u ** (a - 1) * np.exp(-u), 0.0)
        assert val[0] == pytest.approx(math.gamma(a), rel=1e-12)
