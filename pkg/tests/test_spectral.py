"""Oracle tests for the Fourier-side operators.

The reference values are closed forms for Gaussians: with
f = exp(-a x^2) one has fhat(xi) = sqrt(pi/a) exp(-xi^2/(4a)), hence

    ||D^s f||_{L^2}^2 = Gamma(s + 1/2) (2a)^{s - 1/2}.
"""

import math

import numpy as np
import pytest

from gdnls.grid import ComplexField, GridSpec, Trajectory
from gdnls.spectral import (
    DEFAULT_Q_GRID,
    MixedNormSpec,
    evaluate_interpolant,
    fourier_transform_samples,
    fractional_derivative,
    free_propagate,
    l2_norm,
    lebesgue_norm,
    mixed_norm,
    rescale,
    sobolev_norm,
    spatial_derivative,
    xt_norm,
)

GRID = GridSpec(1024, 64.0)


def gaussian(a=1.0, grid=GRID):
    return ComplexField(grid, np.exp(-a * grid.x**2).astype(complex))


def homogeneous_oracle(a, s):
    """||D^s exp(-a x^2)||_{L^2}, continuum closed form."""
    return math.sqrt(math.gamma(s + 0.5) * (2.0 * a) ** (s - 0.5))


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_l2_norm_gaussian_oracle(a):
    f = gaussian(a)
    assert l2_norm(f) == pytest.approx((math.pi / (2 * a)) ** 0.25, rel=1e-12)


@pytest.mark.parametrize("p", [1.0, 2.0, 4.0, 6.0])
def test_lebesgue_norm_gaussian_oracle(p):
    # ||exp(-a x^2)||_p^p = sqrt(pi / (p a))
    f = gaussian(1.0)
    assert lebesgue_norm(f, p) == pytest.approx(
        (math.pi / p) ** (0.5 / p), rel=1e-12
    )


def test_sup_norm_is_exact_max():
    f = gaussian(1.0)
    assert lebesgue_norm(f, np.inf) == np.abs(f.values).max()


@pytest.mark.parametrize("s", [0.25, 0.5, 1.0, 1.5])
@pytest.mark.parametrize("a", [0.5, 1.0])
def test_homogeneous_sobolev_gaussian_oracle(s, a):
    f = gaussian(a)
    assert sobolev_norm(f, s, homogeneous=True) == pytest.approx(
        homogeneous_oracle(a, s), rel=1e-10
    )


def test_half_derivative_of_unit_gaussian_is_one():
    # Gamma(1) * (2 * 1/2)^0 = 1 exactly
    f = gaussian(0.5)
    assert sobolev_norm(f, 0.5, homogeneous=True) == pytest.approx(1.0, rel=1e-10)


def test_inhomogeneous_h1_matches_l2_plus_gradient():
    f = gaussian(1.0)
    expect = math.sqrt(
        homogeneous_oracle(1.0, 0.0) ** 2 + homogeneous_oracle(1.0, 1.0) ** 2
    )
    assert sobolev_norm(f, 1.0) == pytest.approx(expect, rel=1e-10)


def test_sobolev_zero_order_is_l2():
    f = gaussian(2.0)
    assert sobolev_norm(f, 0.0, homogeneous=True) == pytest.approx(l2_norm(f), rel=1e-13)


@pytest.mark.parametrize("s", [-2.5, 4.5])
def test_sobolev_order_range_enforced(s):
    with pytest.raises(ValueError):
        sobolev_norm(gaussian(), s)


def test_fractional_derivative_matches_first_derivative_in_norm():
    f = gaussian(1.0)
    assert l2_norm(fractional_derivative(f, 1.0)) == pytest.approx(
        l2_norm(spatial_derivative(f)), rel=1e-12
    )


def test_fractional_derivative_rejects_negative_order():
    with pytest.raises(ValueError):
        fractional_derivative(gaussian(), -0.5)


def test_fourier_transform_samples_gaussian_oracle():
    f = gaussian(1.0)
    xi = np.linspace(-3.0, 3.0, 17)
    got = fourier_transform_samples(f, xi)
    expect = math.sqrt(math.pi) * np.exp(-(xi**2) / 4.0)
    np.testing.assert_allclose(got, expect, rtol=1e-12, atol=1e-12)


def test_free_propagation_gaussian_oracle():
    a, t = 1.0, 0.7
    u = free_propagate(gaussian(a), t)
    b = 1.0 + 4.0j * a * t
    expect = np.exp(-a * GRID.x**2 / b) / np.sqrt(b)
    np.testing.assert_allclose(u.values, expect, atol=1e-12)


def test_free_propagation_is_unitary():
    f = gaussian(1.0)
    for t in (0.1, 1.0, 10.0):
        assert l2_norm(free_propagate(f, t)) == pytest.approx(l2_norm(f), rel=1e-13)


def test_free_propagation_group_property():
    f = gaussian(1.0)
    u = free_propagate(free_propagate(f, 0.3), 0.4)
    v = free_propagate(f, 0.7)
    np.testing.assert_allclose(u.values, v.values, atol=1e-13)


def test_evaluate_interpolant_reproduces_samples():
    f = gaussian(1.0)
    np.testing.assert_allclose(
        evaluate_interpolant(f, GRID.x), f.values, atol=1e-12
    )


@pytest.mark.parametrize("lam", [0.5, 2.0])
@pytest.mark.parametrize("sigma", [1.0, 2.0])
def test_rescale_gaussian_pointwise(lam, sigma):
    f = gaussian(1.0)
    g = rescale(f, lam, sigma)
    expect = lam ** (1.0 / (2.0 * sigma)) * np.exp(-((lam * GRID.x) ** 2))
    np.testing.assert_allclose(g.values, expect, atol=1e-10)


def test_rescale_validation():
    with pytest.raises(ValueError):
        rescale(gaussian(), 8.0, 1.0)
    with pytest.raises(ValueError):
        rescale(gaussian(), 1.0, -2.0)


def test_rescale_warns_without_edge_decay():
    wide = ComplexField(GRID, np.exp(-1e-4 * GRID.x**2).astype(complex))
    with pytest.warns(UserWarning):
        rescale(wide, 2.0, 1.0)


# ---------------------------------------------------------------------------
# mixed space-time norms


def constant_trajectory(f, t_end=2.0, n=5):
    times = np.linspace(0.0, t_end, n)
    return Trajectory(f.grid, times, tuple(f for _ in times))


def test_mixed_norm_time_outer_constant_trajectory():
    # L^q_t L^r_x of a time-constant field is T^{1/q} ||f||_r
    f = gaussian(1.0)
    traj = constant_trajectory(f, t_end=2.0)
    spec = MixedNormSpec("time", 4.0, 2.0)
    assert mixed_norm(traj, spec) == pytest.approx(
        2.0**0.25 * l2_norm(f), rel=1e-12
    )


def test_mixed_norm_space_outer_constant_trajectory():
    # L^r_x L^q_t with q = inf collapses to the plain spatial norm
    f = gaussian(1.0)
    traj = constant_trajectory(f)
    spec = MixedNormSpec("space", 4.0, np.inf)
    assert mixed_norm(traj, spec) == pytest.approx(lebesgue_norm(f, 4.0), rel=1e-12)


def test_mixed_norm_sup_sup_is_global_max():
    f = gaussian(1.0)
    traj = constant_trajectory(f)
    spec = MixedNormSpec("space", np.inf, np.inf)
    assert mixed_norm(traj, spec) == pytest.approx(1.0, rel=1e-13)


def test_mixed_norm_needs_two_snapshots():
    f = gaussian(1.0)
    traj = Trajectory(f.grid, np.array([0.0]), (f,))
    with pytest.raises(ValueError):
        mixed_norm(traj, MixedNormSpec("time", 2.0, 2.0))


def test_mixed_norm_spec_validation():
    with pytest.raises(ValueError):
        MixedNormSpec("frequency", 2.0, 2.0)
    with pytest.raises(ValueError):
        MixedNormSpec("time", 0.5, 2.0)
    with pytest.raises(ValueError):
        MixedNormSpec("time", 2.0, 2.0, derivative_order=-1.0)


def test_xt_norm_bounds_and_validation():
    f = gaussian(1.0)
    traj = constant_trajectory(f)
    val = xt_norm(traj, 0.5)
    assert np.isfinite(val) and val > 0
    # each of the seven terms is nonnegative, so the sum dominates term 1
    assert val >= sobolev_norm(f, 0.5)
    with pytest.raises(ValueError):
        xt_norm(traj, 0.3)
    with pytest.raises(ValueError):
        xt_norm(traj, 0.5, q_grid=(2.0,))


def test_xt_norm_monotone_under_horizon_extension():
    f = gaussian(1.0)
    short = constant_trajectory(f, t_end=1.0, n=5)
    long = constant_trajectory(f, t_end=2.0, n=9)
    assert xt_norm(long, 0.5) >= xt_norm(short, 0.5)


def test_default_q_grid_within_range():
    assert min(DEFAULT_Q_GRID) >= 4.0 and max(DEFAULT_Q_GRID) <= 16.0


# ---------------------------------------------------------------------------
# property tests

from hypothesis import given, settings  # noqa: E402
from hypothesis import strategies as st  # noqa: E402

modulated = st.builds(
    lambda a, v, x0: ComplexField(
        GRID, np.exp(-a * (GRID.x - x0) ** 2 + 1j * v * GRID.x)
    ),
    a=st.floats(0.2, 4.0),
    v=st.floats(-5.0, 5.0),
    x0=st.floats(-5.0, 5.0),
)


@settings(max_examples=25, deadline=None)
@given(f=modulated, t=st.floats(-5.0, 5.0))
def test_free_propagation_unitary_property(f, t):
    assert l2_norm(free_propagate(f, t)) == pytest.approx(l2_norm(f), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(f=modulated)
def test_parseval_property(f):
    # physical Riemann sum equals the normalized Fourier-side sum
    fhat = np.fft.fft(f.values)
    fourier_side = GRID.box_length / GRID.n_points**2 * np.sum(np.abs(fhat) ** 2)
    assert l2_norm(f) ** 2 == pytest.approx(fourier_side, rel=1e-12)


@settings(max_examples=10, deadline=None)
@given(f=modulated, lam=st.floats(0.5, 2.0), sigma=st.floats(1.0, 3.0))
def test_critical_norm_scaling_property(f, lam, sigma):
    s_c = 0.5 - 0.5 / sigma
    if s_c <= 0:
        return
    base = sobolev_norm(f, s_c, homogeneous=True)
    scaled = sobolev_norm(rescale(f, lam, sigma), s_c, homogeneous=True)
    assert scaled == pytest.approx(base, rel=1e-6)
