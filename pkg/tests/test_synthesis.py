import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from radial_synth import radial_ops as ro
from radial_synth.bessel_core import SphericalFunction
from radial_synth.synthesis import (
    ConditioningError,
    SynthesisProblem,
    build_dictionary,
    collocation_radii,
    fit,
    fourier_bessel_spectrum,
    parse_spectrum,
    profile_zeros,
)

from oracles import FIT_SUP_ERROR

R = 3.0


def _problem(target, spectrum, **kw):
    return SynthesisProblem(target.dim, R, target, spectrum, **kw)


def test_zero_eigenvalue_is_constant_column():
    d = build_dictionary(_problem(ro.gaussian(2), [0.0]))
    assert np.all(d.matrix[:, 0] == 1.0)


def test_profile_zeros_n2_are_classical():
    assert np.allclose(profile_zeros(2, 6), special.jn_zeros(0, 6), atol=1e-13, rtol=0)


def test_profile_zeros_n3_are_multiples_of_pi():
    assert np.allclose(profile_zeros(3, 5), np.pi * np.arange(1, 6), atol=1e-13, rtol=0)


def test_neumann_spectrum_uses_derivative_zeros():
    lam = np.array(fourier_bessel_spectrum(2, R, 5, "neumann"))
    z = np.concatenate([[0.0], special.jn_zeros(1, 4)])
    assert np.allclose(lam, -(z / R) ** 2, atol=1e-12, rtol=0)


def test_dirichlet_columns_vanish_at_boundary():
    spec = fourier_bessel_spectrum(3, R, 4, "dirichlet")
    d = build_dictionary(_problem(ro.gaussian(3), spec))
    assert np.max(np.abs(d.matrix[-1])) <= 1e-12


def test_parse_spectrum_forms():
    assert parse_spectrum("auto:modes=3", 2, R) == fourier_bessel_spectrum(2, R, 3)
    assert parse_spectrum("auto:modes=3,bc=dirichlet", 2, R) == fourier_bessel_spectrum(2, R, 3, "dirichlet")
    assert parse_spectrum([1, [0, 2], "1+1i"], 2, R) == (1, 2j, 1 + 1j)
    with pytest.raises(ValueError):
        parse_spectrum("modes=3", 2, R)


def test_collocation_radii():
    x = collocation_radii(R, 9)
    assert x[0] == 0.0 and x[-1] == pytest.approx(R, abs=1e-15)
    assert np.all(np.diff(x) > 0)


def test_dictionary_size():
    p = _problem(ro.gaussian(2), [-1, -2, -3], max_degree=1)
    d = build_dictionary(p)
    assert p.n_columns == 6 and d.matrix.shape == (48, 6)
    assert np.allclose(np.max(np.abs(d.matrix), axis=0), 1.0, rtol=0, atol=1e-15)


def test_problem_validation():
    g = ro.gaussian(2)
    with pytest.raises(ValueError):
        SynthesisProblem(3, R, g, [0.0])
    with pytest.raises(ValueError):
        _problem(g, [])
    with pytest.raises(ValueError):
        _problem(g, [0.0, -1.0], collocation=1)
    with pytest.raises(ValueError):
        _problem(g, [0.0], ridge=-1.0)


def test_exact_spherical_target():
    spec = fourier_bessel_spectrum(2, R, 6)
    target = ro.spherical(SphericalFunction(spec[3], 2))
    res = fit(_problem(target, spec))
    assert res.sup_error <= 1e-10
    raw = res.raw_coefficients
    assert abs(raw[3] - 1) <= 1e-8
    assert np.max(np.abs(np.delete(raw, 3))) <= 1e-8


def test_monomial_target_needs_degree_one():
    spec = (-1.0, -2.5, 0.5 + 1j)
    target = ro.monomial(SphericalFunction(-2.5, 3).monomial(1))
    assert fit(_problem(target, spec, max_degree=1)).sup_error <= 1e-9
    assert fit(_problem(target, spec, max_degree=0)).sup_error > 1e-3


def test_gaussian_error_decreases_with_modes():
    target = ro.gaussian(2, 1.0)
    errs = [fit(_problem(target, parse_spectrum(f"auto:modes={m}", 2, R))).sup_error for m in (4, 8, 16)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] == pytest.approx(FIT_SUP_ERROR[16], rel=0.1)


def test_residual_monotone_under_nested_spectra():
    target = ro.gaussian(2, 1.0)
    full = fourier_bessel_spectrum(2, R, 8)
    res = [fit(_problem(target, full[:m], collocation=64)).collocation_residual for m in (2, 4, 6, 8)]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(res, res[1:]))


@settings(max_examples=20)
@given(c=st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False), min_size=4, max_size=4))
def test_reproduces_dictionary_combinations(c):
    spec = fourier_bessel_spectrum(3, R, 4)
    gens = [ro.spherical(SphericalFunction(lam, 3)) for lam in spec]
    target = ro.RadialFunction(lambda r: sum(ci * g(r) for ci, g in zip(c, gens)), 3, ("combo",))
    res = fit(_problem(target, spec))
    size = 1 + max(abs(x) for x in c)
    assert res.sup_error <= 1e-10 * size
    assert np.max(np.abs(res.raw_coefficients - np.array(c))) <= 1e-6 * size


def test_column_order_does_not_matter():
    target = ro.bump(2, 2.5)
    spec = fourier_bessel_spectrum(2, R, 6)
    perm = [4, 0, 5, 2, 1, 3]
    a = fit(_problem(target, spec))
    b = fit(_problem(target, [spec[i] for i in perm]))
    assert np.max(np.abs(a.dense_fit - b.dense_fit)) <= 1e-12
    assert np.allclose(a.raw_coefficients[perm], b.raw_coefficients, atol=1e-10, rtol=0)


def test_duplicate_spectrum_with_zero_ridge_raises():
    with pytest.raises(ConditioningError, match="rank deficient"):
        fit(_problem(ro.gaussian(2), [-1.0, -1.0, -4.0], ridge=0.0))


def test_duplicate_spectrum_auto_ridge():
    res = fit(_problem(ro.gaussian(2), [-1.0, -1.0, -4.0]))
    assert res.ridge > 0
    assert np.isfinite(res.sup_error)


def test_fit_is_deterministic():
    p = _problem(ro.gaussian(2), fourier_bessel_spectrum(2, R, 5))
    a, b = fit(p), fit(p)
    assert json.dumps(a.to_json()) == json.dumps(b.to_json())
    assert a.residual_csv() == b.residual_csv()


def test_report_shapes():
    res = fit(_problem(ro.gaussian(2), fourier_bessel_spectrum(2, R, 3)))
    out = res.to_json()
    assert len(out["coefficients"]) == 3 and out["n_dense"] == res.dense_radii.size
    assert res.l2_error <= res.sup_error
    lines = res.residual_csv().splitlines()
    assert lines[0] == "radius,target_re,target_im,fit_re,fit_im,residual"
    assert len(lines) == res.dense_radii.size + 1
