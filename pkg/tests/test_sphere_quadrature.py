import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from radial_synth import radial_ops as ro
from radial_synth.sphere_quadrature import build_rule, sphere_average

from oracles import gegenbauer_average, sphere_moment


@given(dim=st.integers(2, 9), order=st.integers(1, 200))
def test_weights_are_a_probability(dim, order):
    rule = build_rule(dim, order)
    assert abs(rule.weights.sum() - 1.0) <= 1e-14
    assert np.all(rule.weights > 0)
    assert np.all((rule.nodes > 0) & (rule.nodes < np.pi))
    assert rule(lambda t: np.ones_like(t)) == rule.weights.sum()


@pytest.mark.parametrize("order", [1, 2, 7, 64])
def test_odd_moment_vanishes(order):
    assert abs(build_rule(3, order)(np.cos)) <= 1e-15


def test_circle_cos_squared():
    assert build_rule(2, 64)(lambda t: np.cos(t) ** 2) == pytest.approx(0.5, abs=1e-14)


def test_normalization_n4():
    assert build_rule(4, 64)(lambda t: np.ones_like(t)) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("dim", [2, 3, 4, 5, 8])
def test_even_moments(dim):
    rule = build_rule(dim, 64)
    for k in range(0, 12):
        assert rule(lambda t: np.cos(t) ** (2 * k)).real == pytest.approx(sphere_moment(dim, k), abs=1e-13)


@pytest.mark.parametrize("dim", [2, 3, 6])
def test_matches_gauss_jacobi_in_cos(dim):
    # smooth non-polynomial integrand, independent rule family
    g = lambda c: np.exp(1.3 * c) * np.cos(3 * c)  # noqa: E731
    ours = build_rule(dim, 64)(lambda t: g(np.cos(t)))
    assert ours == pytest.approx(gegenbauer_average(g, dim, order=100), abs=1e-14)


def test_rejects_dimension_one():
    with pytest.raises(ValueError, match="unsupported dimension"):
        build_rule(1, 16)
    with pytest.raises(ValueError):
        build_rule(3, 0)


def test_average_around_origin_and_zero_shift():
    f = ro.gaussian(3, 0.8)
    rule = build_rule(3)
    assert sphere_average(rule, f, 0.0, 1.7) == pytest.approx(f(1.7), rel=1e-15)
    assert sphere_average(rule, f, 1.7, 0.0) == pytest.approx(f(1.7), rel=1e-15)


def test_circle_average_of_r_squared():
    f = ro.polynomial(2, [0, 0, 1])
    assert sphere_average(build_rule(2, 64), f, 1.0, 1.0) == pytest.approx(2.0, abs=1e-14)
    # hand integral (1/pi) int (2 + 2cos) = 2
    hand, _ = integrate.quad(lambda t: (2 + 2 * np.cos(t)) / np.pi, 0, np.pi)
    assert hand == pytest.approx(2.0)


@given(rho=st.floats(0, 4), r=st.floats(0, 4), dim=st.integers(2, 5))
def test_symmetric_in_rho_and_r(rho, r, dim):
    f = ro.gaussian(dim)
    rule = build_rule(dim)
    assert sphere_average(rule, f, rho, r) == sphere_average(rule, f, r, rho)


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_order_doubling_converged(dim):
    f = ro.gaussian(dim)
    rho, r = np.meshgrid(np.linspace(0, 4, 9), np.linspace(0, 4, 9))
    a = sphere_average(build_rule(dim, 32), f, rho, r)
    b = sphere_average(build_rule(dim, 64), f, rho, r)
    assert np.max(np.abs(a - b)) <= 1e-12


def test_support_gap_is_exactly_zero():
    f = ro.bump(3, 1.0)
    rule = build_rule(3)
    # [|rho - r|, rho + r] = [2.5, 3.5] misses [0, 1]
    assert sphere_average(rule, f, 3.0, 0.5) == 0.0
    assert sphere_average(rule, f, 0.6, 0.5) != 0.0


def test_broadcasts_over_base_radii():
    f = ro.gaussian(2)
    rule = build_rule(2)
    rho = np.linspace(0, 3, 5)
    vec = sphere_average(rule, f, rho, 1.2)
    assert vec.shape == (5,)
    assert vec[3] == sphere_average(rule, f, rho[3], 1.2)
