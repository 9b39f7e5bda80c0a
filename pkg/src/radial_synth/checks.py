"""Residual suites behind ``radial-synth check``.

Every suite returns a plain dict report: ``check``, ``passed`` (``None``
where the suite only reports), ``tolerance``, ``max_residual`` and a list of
flat ``cases``. Reports contain no timing or host data, so a fixed config
and seed give byte-identical JSON.
"""
from __future__ import annotations

import itertools

import numpy as np

from . import measure_algebra as ma
from . import radial_ops as ro
from .bessel_core import SphericalFunction, eval_spherical, laplacian_residual
from .config import RunConfig, parse_grid
from .sphere_quadrature import build_rule

DEFAULT_DIMS = (2, 3, 4)
DEFAULT_LAMBDAS = (-1.0, 2.0, 1 + 1j)
DEFAULT_RADII = (0.5, 1.0, 2.0)
DEFAULT_WORD_RADII = (0.8, 1.7, 2.5)

# 3-atom measures for the exact (axis) lift check
LIFT_MU3 = ma.LineMeasure(((0.3, 1.0), (-1.2, 0.5 - 0.25j), (2.0, -0.75)))
LIFT_NU3 = ma.LineMeasure(((0.8, 2.0), (-0.4, 1j), (1.5, 0.3)))


def _c(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _spherical(cfg: RunConfig, lam, dim) -> SphericalFunction:
    return SphericalFunction(lam, dim, cfg.series_tol, cfg.max_terms)


def _report(name, tol, cases, key="residual", gated=True, extra=None):
    worst = max((c[key] for c in cases), default=0.0)
    rep = {
        "check": name,
        "tolerance": tol,
        "max_residual": worst,
        "passed": bool(all(c.get("ok", True) for c in cases)) if gated else None,
        "cases": cases,
    }
    if extra:
        rep.update(extra)
    return rep


def product_formula(cfg: RunConfig, dims=DEFAULT_DIMS, lambdas=DEFAULT_LAMBDAS,
                    rhos=DEFAULT_RADII, rs=DEFAULT_RADII) -> dict:
    tol = cfg.tol("product-formula")
    cases = []
    for n in dims:
        rule = build_rule(n, cfg.quad_order)
        for lam in lambdas:
            s = _spherical(cfg, lam, n)
            for rho in rhos:
                for r in rs:
                    res = ro.check_product_formula(s, rho, r, rule)
                    cases.append({"dim": n, "lambda": _c(lam), "rho": rho, "r": r,
                                  "residual": res, "ok": res <= tol})
    return _report("product-formula", tol, cases)


def laplacian(cfg: RunConfig, dims=(3,), lambdas=DEFAULT_LAMBDAS, radii=None, h=None) -> dict:
    tol = cfg.tol("laplacian")
    h = cfg.laplacian_h if h is None else h
    radii = parse_grid(cfg.laplacian_grid) if radii is None else radii
    lo, hi = cfg.richardson_band
    cases = []
    for n in dims:
        for lam in lambdas:
            s = _spherical(cfg, lam, n)
            for r in radii:
                coarse = laplacian_residual(s, float(r), h)
                fine = laplacian_residual(s, float(r), h / 2)
                # an exactly-solved case (lam = 0) has no truncation error to compare
                ratio = coarse / fine if fine > 1e-25 else None
                ok = coarse <= tol and (ratio is None or lo <= ratio <= hi)
                cases.append({"dim": n, "lambda": _c(lam), "r": float(r), "h": h,
                              "residual": coarse, "residual_half_h": fine,
                              "richardson_ratio": ratio, "ok": ok})
    return _report("laplacian", tol, cases, extra={"richardson_band": [lo, hi]})


def monomial(cfg: RunConfig, degrees=(0, 1), dims=(2, 3), lambdas=(-1.0, 1 + 1j), grid=None) -> dict:
    """Degree of ``d^m/dlam^m J_lam`` against ``J_lam``, on default and seeded random radii."""
    tol = cfg.tol("monomial")
    grid = parse_grid(cfg.grid) if grid is None else grid
    rng = np.random.default_rng(cfg.seed)
    radius_sets = [ro.DEFAULT_DIFFERENCE_RADII, ro.random_radii(rng, 2)]
    cases = []
    for n in dims:
        rule = build_rule(n, cfg.quad_order)
        for lam in lambdas:
            s = _spherical(cfg, lam, n)
            for m in degrees:
                f = ro.monomial(s.monomial(m))
                for radii in radius_sets:
                    case = {"dim": n, "lambda": _c(lam), "expected": m, "radii": list(radii)}
                    trace = {}
                    try:
                        deg = ro.monomial_degree(f, s, max_deg=m, radii=radii, grid=grid, tol=tol,
                                                 rule=rule, depth_cap=cfg.depth_cap, trace=trace)
                    except ro.DegreeError as exc:
                        deg = None
                        case["error"] = str(exc)
                    case.update({"degree": deg, "witness": trace.get(m), "residual": trace.get(m + 1, float("inf")),
                                 "ok": deg == m})
                    cases.append(case)
    return _report("monomial", tol, cases)


def commutativity(cfg: RunConfig, dims=(2, 3), radii=DEFAULT_WORD_RADII, lengths=(2, 3), sigma=1.0) -> dict:
    tol = cfg.tol("commutativity")
    cases = []
    for n in dims:
        rule = build_rule(n, cfg.quad_order)
        f = ro.gaussian(n, sigma)
        for k in lengths:
            for word in itertools.product(radii, repeat=k):
                base = ma.pair(ma.RadialMeasureExpr(((1.0, word),)), f, rule, cfg.depth_cap)
                res = 0.0
                for perm in set(itertools.permutations(word)):
                    v = ma.pair(ma.RadialMeasureExpr(((1.0, perm),)), f, rule, cfg.depth_cap)
                    res = max(res, abs(v - base))
                cases.append({"dim": n, "word": list(word), "residual": res, "ok": res <= tol})
    return _report("commutativity", tol, cases)


def eigenfunction(cfg: RunConfig, dims=(2, 3, 4), lambdas=DEFAULT_LAMBDAS, rs=DEFAULT_RADII, grid=None) -> dict:
    """``delta_r^# * J_lam = J_lam(r) J_lam`` on the grid."""
    tol = cfg.tol("eigenfunction")
    grid = parse_grid(cfg.grid) if grid is None else grid
    cases = []
    for n in dims:
        rule = build_rule(n, cfg.quad_order)
        for lam in lambdas:
            s = _spherical(cfg, lam, n)
            f = ro.spherical(s)
            for r in rs:
                g = ma.act_on_function(ma.atom(r), f, rule, cfg.depth_cap)
                res = float(np.max(np.abs(g.on_grid(grid) - eval_spherical(s, r) * f.on_grid(grid))))
                cases.append({"dim": n, "lambda": _c(lam), "r": r, "residual": res, "ok": res <= tol})
    return _report("eigenfunction", tol, cases)


def lift(cfg: RunConfig, mu=None, nu=None, dims=(2,), sigma=1.0) -> dict:
    """Homomorphism residuals under both semantics, side by side.

    Only the axis reading is gated; the sphere reading is reported as data.
    """
    tol = cfg.tol("lift-axis")
    one = ma.LineMeasure(((1.0, 1.0),))
    pairs = [(mu or one, nu or one)]
    if mu is None and nu is None:
        pairs.append((LIFT_MU3, LIFT_NU3))
    cases = []
    for n in dims:
        rule = build_rule(n, cfg.quad_order)
        f = ro.gaussian(n, sigma)
        for a, b in pairs:
            axis = ma.homomorphism_residual(a, b, f, "axis", rule, cfg.depth_cap)
            sphere = ma.homomorphism_residual(a, b, f, "sphere", rule, cfg.depth_cap)
            cases.append({"dim": n, "mu": a.to_json()["atoms"], "nu": b.to_json()["atoms"],
                          "axis_residual": axis, "sphere_residual": sphere,
                          "residual": axis, "ok": axis <= tol})
    return _report("lift", tol, cases, extra={"gated_semantics": "axis"})


SUITES = {
    "product-formula": product_formula,
    "laplacian": laplacian,
    "monomial": monomial,
    "commutativity": commutativity,
    "eigenfunction": eigenfunction,
    "lift": lift,
}


def run_all(cfg: RunConfig) -> dict:
    reports = [fn(cfg) for fn in SUITES.values()]
    return {"check": "all", "passed": all(r["passed"] is not False for r in reports), "reports": reports}
