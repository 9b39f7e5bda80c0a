"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""
import subprocess
import sys

import numpy as np

from radial_synth import checks
from radial_synth import measure_algebra as ma
from radial_synth import radial_ops as ro
from radial_synth.bessel_core import SphericalFunction, eval_spherical, laplacian_residual
from radial_synth.config import RunConfig
from radial_synth.sphere_quadrature import build_rule
from radial_synth.synthesis import SynthesisProblem, fit, fourier_bessel_spectrum, parse_spectrum

from oracles import FIT_SUP_ERROR, SPHERE_LIFT_RESIDUAL_N2, j0_exact, sinhc_profile

CFG = RunConfig()
C2_LAMBDAS = (2.0, -1.0, 1 + 1j)
C2_GRID = np.linspace(0.1, 5.0, 50)


def test_c01_normalization(criterion):
    vals = [eval_spherical(SphericalFunction(lam, n), 0.0)
            for lam in (0, -1, 2, 1 + 1j, -9) for n in (2, 3, 4, 5)]
    ok = all(v == 1.0 for v in vals)
    assert criterion(1, "J_lam(0) == 1 exactly", ok, f"{len(vals)} cases")


def test_c02_closed_form_n3(criterion):
    worst = 0.0
    for lam in C2_LAMBDAS:
        got = eval_spherical(SphericalFunction(lam, 3), C2_GRID)
        want = np.array([sinhc_profile(lam, r) for r in C2_GRID])
        worst = max(worst, float(np.max(np.abs(got - want) / (1 + np.abs(want)))))
    assert criterion(2, "n=3 sinh closed form, rel 1e-10", worst <= 1e-10, f"max {worst:.2e}")


def test_c03_classical_j0(criterion):
    r = np.linspace(0.0, 5.0, 51)
    worst = 0.0
    for kappa in (1.0, 2.4048):
        got = eval_spherical(SphericalFunction(-kappa**2, 2), r)
        want = np.array([j0_exact(kappa * x) for x in r])
        worst = max(worst, float(np.max(np.abs(got - want))))
    assert criterion(3, "n=2 vs independent J0 series, abs 1e-12", worst <= 1e-12, f"max {worst:.2e}")


def test_c04_product_formula(criterion):
    worst = 0.0
    for n in (2, 3, 4):
        rule = build_rule(n, 64)
        for lam in (-1.0, 2.0, 1 + 1j):
            s = SphericalFunction(lam, n)
            for rho in (0.5, 1.0, 2.0):
                for r in (0.5, 1.0, 2.0):
                    worst = max(worst, ro.check_product_formula(s, rho, r, rule))
    assert criterion(4, "product formula, 1e-8", worst <= 1e-8, f"max {worst:.2e}")


def test_c05_laplacian(criterion):
    worst, ratios = 0.0, []
    for lam in C2_LAMBDAS:
        s = SphericalFunction(lam, 3)
        for r in C2_GRID:
            coarse = laplacian_residual(s, float(r), 1e-3)
            fine = laplacian_residual(s, float(r), 5e-4)
            worst = max(worst, coarse)
            ratios.append(coarse / fine)
    lo, hi = min(ratios), max(ratios)
    ok = worst <= 1e-5 and 12 <= lo and hi <= 20
    assert criterion(5, "laplacian residual 1e-5, Richardson in [12, 20]", ok,
                     f"max {worst:.2e}, ratio {lo:.4f}..{hi:.4f}")


def test_c06_monomial_degrees(criterion):
    rep = checks.monomial(CFG)
    cases = rep["cases"]
    assert len({tuple(c["radii"]) for c in cases}) == 2
    degrees_ok = all(c["degree"] == c["expected"] for c in cases)
    witness = min(c["witness"] for c in cases)
    ok = degrees_ok and witness >= 1e-3
    assert criterion(6, "monomial degree 0 for J, 1 for dJ", ok, f"{len(cases)} cases, min witness {witness:.3e}")


def test_c07_commutativity(criterion):
    rep = checks.commutativity(CFG, dims=(2, 3), radii=(0.8, 1.7, 2.5), lengths=(2, 3))
    worst = rep["max_residual"]
    assert criterion(7, "word order irrelevant, 1e-9", worst <= 1e-9, f"{len(rep['cases'])} words, max {worst:.2e}")


def test_c08_eigenfunction(criterion):
    rep = checks.eigenfunction(CFG, dims=(2, 3, 4), lambdas=(-1.0, 2.0, 1 + 1j), rs=(0.5, 1.0, 2.0))
    worst = rep["max_residual"]
    assert criterion(8, "delta_r * J = J(r) J, 1e-8", worst <= 1e-8, f"max {worst:.2e}")


def test_c09_lift(criterion):
    axis = max(
        ma.homomorphism_residual(checks.LIFT_MU3, checks.LIFT_NU3, ro.gaussian(n), "axis", build_rule(n, 64))
        for n in (2, 3)
    )
    one = ma.LineMeasure(((1.0, 1.0),))
    rule = build_rule(2, 64)
    f = ro.gaussian(2, 1.0)
    sphere = ma.homomorphism_residual(one, one, f, "sphere", rule)
    axis_one = ma.homomorphism_residual(one, one, f, "axis", rule)
    print(f"lift mu=nu=delta_1, n=2: axis {axis_one:.3e}  sphere {sphere:.10f}")
    ok = axis <= 1e-14 and abs(sphere - SPHERE_LIFT_RESIDUAL_N2) <= 1e-6 and sphere > 0.01
    assert criterion(9, "axis lift exact, sphere lift fails by the oracle amount", ok,
                     f"axis {axis:.1e}, sphere {sphere:.6f} vs {SPHERE_LIFT_RESIDUAL_N2:.6f}")


def test_c10_synthesis(criterion):
    target = ro.gaussian(2, 1.0)
    errs = {m: fit(SynthesisProblem(2, 3.0, target, parse_spectrum(f"auto:modes={m}", 2, 3.0))).sup_error
            for m in (4, 8, 16)}
    decreasing = errs[4] > errs[8] > errs[16]
    rel = abs(errs[16] - FIT_SUP_ERROR[16]) / FIT_SUP_ERROR[16]

    spec = fourier_bessel_spectrum(2, 3.0, 5)
    rng = np.random.default_rng(CFG.seed)
    c = rng.normal(size=10) + 1j * rng.normal(size=10)
    gens = [s.monomial(m) for s in (SphericalFunction(lam, 2) for lam in spec) for m in (0, 1)]
    combo = ro.RadialFunction(lambda r: sum(ci * ro.monomial(g)(r) for ci, g in zip(c, gens)), 2, ("combo",))
    span = fit(SynthesisProblem(2, 3.0, combo, spec, max_degree=1)).sup_error

    ok = decreasing and rel <= 0.1 and span <= 1e-9
    detail = (f"sup {errs[4]:.3e} > {errs[8]:.3e} > {errs[16]:.3e}, "
              f"16-mode off oracle by {rel:.1e}, span {span:.1e}")
    assert criterion(10, "synthesis improves with modes, matches oracle, reproduces span", ok, detail)


def test_c11_determinism(criterion):
    cmd = [sys.executable, "-m", "radial_synth", "check", "all", "--seed", "5"]
    a = subprocess.run(cmd, capture_output=True, check=False)
    b = subprocess.run(cmd, capture_output=True, check=False)
    ok = a.returncode == 0 and a.stdout == b.stdout and len(a.stdout) > 0
    assert criterion(11, "check all twice, same seed, identical bytes", ok, f"{len(a.stdout)} bytes")
