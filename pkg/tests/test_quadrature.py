import math

import numpy as np
import pytest
from scipy.special import erf

from gdnls.quadrature import (
    QuadratureError,
    QuadratureResult,
    cumulative_integral,
    integrate_halfline,
)


@pytest.mark.parametrize(
    "func, expect",
    [
        (lambda x: np.exp(-x), 1.0),
        (lambda x: 1.0 / (1.0 + x**2), math.pi / 2.0),
        (lambda x: np.exp(-(x**2)), math.sqrt(math.pi) / 2.0),
        (lambda x: x**2 * np.exp(-x), 2.0),
    ],
)
def test_halfline_known_integrals(func, expect):
    res = integrate_halfline(func)
    assert res.value == pytest.approx(expect, rel=1e-10)
    assert res.error_estimate < 1e-8
    assert res.evaluations > 0


def test_halfline_sech_like_kernel():
    # integral of 1/cosh over (0, inf) is pi/2
    res = integrate_halfline(lambda x: 2.0 * np.exp(-x) / (1.0 + np.exp(-2.0 * x)))
    assert res.value == pytest.approx(math.pi / 2.0, rel=1e-10)


def test_halfline_sqrt_sech_frozen_oracle():
    # reference 2.622057554292 from an independent 10^6-point composite
    # Simpson rule on [0, 60]
    res = integrate_halfline(lambda x: (2.0 * np.exp(-x) / (1.0 + np.exp(-2.0 * x))) ** 0.5)
    assert res.value == pytest.approx(2.622057554292, abs=1e-8)


def test_halfline_raises_on_divergent_integrand():
    with pytest.raises(QuadratureError):
        integrate_halfline(lambda x: 1.0 / (1.0 + x))


def test_result_validation():
    with pytest.raises(ValueError):
        QuadratureResult(1.0, -1e-3, 10)
    with pytest.raises(ValueError):
        QuadratureResult(1.0, 0.0, 0)


def test_cumulative_integral_gaussian_erf_oracle():
    x = np.linspace(-20.0, 20.0, 801)
    got = cumulative_integral(lambda y: np.exp(-(y**2)), x)
    expect = math.sqrt(math.pi) / 2.0 * (erf(x) + 1.0)
    np.testing.assert_allclose(got, expect, atol=1e-12)


def test_cumulative_integral_sech_squared_oracle():
    # running integral of sech^2 from -inf is tanh(x) + 1
    x = np.linspace(-30.0, 30.0, 1201)
    got = cumulative_integral(lambda y: 1.0 / np.cosh(y) ** 2, x)
    np.testing.assert_allclose(got, np.tanh(x) + 1.0, atol=1e-12)


def test_cumulative_integral_starts_near_zero():
    x = np.linspace(-50.0, 50.0, 401)
    got = cumulative_integral(lambda y: np.exp(-(y**2)), x)
    assert abs(got[0]) < 1e-13
    assert np.all(np.diff(got) >= -1e-15)
