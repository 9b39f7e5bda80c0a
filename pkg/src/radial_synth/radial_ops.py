"""Radial functions on R^n and the translation calculus acting on them.

A :class:`RadialFunction` is stored through its profile ``f0`` on [0, inf);
only ``|r|`` is ever passed to the profile, so evenness holds by
construction. Translation by a sphere of radius ``r`` and the modified
spherical differences ``D_{s;r} = delta_r^# - s(r) delta_e`` produce new,
lazily evaluated radial functions whose nesting depth is capped.
"""
from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .bessel_core import MonomialGenerator, SphericalFunction, eval_monomial, eval_spherical
from .sphere_quadrature import SphereAverageRule, build_rule, sphere_average

__all__ = [
    "RadialFunction",
    "SphericalDifference",
    "DepthCapExceeded",
    "DegreeError",
    "DegreeExceeded",
    "IllConditioned",
    "DEFAULT_DEPTH_CAP",
    "DEFAULT_DIFFERENCE_RADII",
    "DEFAULT_DEGREE_TOL",
    "default_grid",
    "gaussian",
    "bump",
    "polynomial",
    "spherical",
    "monomial",
    "sampled",
    "read_profile_csv",
    "translate",
    "k_translate",
    "apply_difference",
    "check_product_formula",
    "difference_sups",
    "monomial_degree",
    "random_radii",
]

DEFAULT_DEPTH_CAP = 3
DEFAULT_DIFFERENCE_RADII = (0.7, 1.3)
DEFAULT_DEGREE_TOL = 1e-7


def default_grid() -> np.ndarray:
    return np.linspace(0.0, 4.0, 33)


class DepthCapExceeded(ValueError):
    pass


class DegreeError(ArithmeticError):
    pass


class DegreeExceeded(DegreeError):
    """No degree up to ``max_deg`` annihilates the function."""


class IllConditioned(DegreeError):
    """A level of compositions landed between tol and 10*tol."""


@dataclass(frozen=True, eq=False)
class RadialFunction:
    """K-radial function on R^dim given by its profile on [0, inf).

    ``profile`` receives arrays of nonnegative radii (any shape) and returns
    values of the same shape. ``provenance`` is a nested tuple naming how the
    function was built; ``depth`` counts stacked translation operators.
    """

    profile: Callable[[np.ndarray], np.ndarray]
    dim: int
    provenance: tuple
    depth: int = 0
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def __call__(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        out = np.asarray(self.profile(r), dtype=complex)
        if out.ndim == 0:
            return complex(out)
        return out

    def on_grid(self, grid) -> np.ndarray:
        """Values on ``grid``, computed once per distinct grid."""
        grid = np.ascontiguousarray(grid, dtype=float)
        key = grid.tobytes()
        vals = self._memo.get(key)
        if vals is None:
            vals = np.atleast_1d(self(grid))
            vals.setflags(write=False)
            # write-once; a racing duplicate fill stores identical values
            self._memo.setdefault(key, vals)
        return vals

    def __repr__(self):
        return f"RadialFunction(dim={self.dim}, depth={self.depth}, provenance={self.provenance!r})"


def _check_dim(dim):
    if int(dim) != dim or dim < 2:
        raise ValueError(f"dim must be an integer >= 2, got {dim!r}")
    return int(dim)


def gaussian(dim: int, sigma: float = 1.0) -> RadialFunction:
    """``exp(-r^2 / sigma^2)``."""
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    inv = 1.0 / (sigma * sigma)
    return RadialFunction(lambda r: np.exp(-inv * r * r), _check_dim(dim), ("builtin", "gaussian", (("sigma", sigma),)))


def bump(dim: int, radius: float = 1.0) -> RadialFunction:
    """Smooth bump ``exp(1 - 1/(1 - (r/a)^2))`` supported on [0, a), value 1 at 0."""
    if not radius > 0:
        raise ValueError("radius must be positive")

    def profile(r):
        u = (r / radius) ** 2
        inside = u < 1.0
        out = np.zeros(np.shape(r))
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside]))
        return out

    return RadialFunction(profile, _check_dim(dim), ("builtin", "bump", (("radius", radius),)))


def polynomial(dim: int, coeffs) -> RadialFunction:
    """``sum_k c_k r^k`` with coefficients in increasing degree."""
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("coeffs must be a nonempty 1-d sequence")
    rev = c[::-1].copy()
    return RadialFunction(
        lambda r: np.polyval(rev, r),
        _check_dim(dim),
        ("builtin", "polynomial", (("coeffs", tuple(complex(x) for x in c)),)),
    )


def spherical(s: SphericalFunction) -> RadialFunction:
    return RadialFunction(lambda r: eval_spherical(s, r), s.dim, ("builtin", "spherical", (("lam", s.lam),)))


def monomial(g: MonomialGenerator) -> RadialFunction:
    return RadialFunction(
        lambda r: eval_monomial(g, r),
        g.dim,
        ("builtin", "monomial", (("lam", g.lam), ("degree", g.degree))),
    )


def sampled(dim: int, radii, values, interpolation: str = "linear", fill_value=None) -> RadialFunction:
    """Profile interpolated from samples on strictly increasing radii >= 0.

    Radii beyond the last sample return ``fill_value``; with the default
    ``None`` they raise, since translations routinely push radii outward.
    """
    x = np.asarray(radii, dtype=float)
    y = np.asarray(values, dtype=complex)
    if x.ndim != 1 or x.shape != y.shape or x.size < 2:
        raise ValueError("need matching 1-d radii/values with at least two samples")
    if x[0] < 0 or np.any(np.diff(x) <= 0):
        raise ValueError("sample radii must be nonnegative and strictly increasing")
    if interpolation == "linear":
        interp = lambda r: np.interp(r, x, y.real) + 1j * np.interp(r, x, y.imag)  # noqa: E731
    elif interpolation == "cubic":
        # zero slope at the origin keeps the extension to R^n smooth
        bc = ((1, 0.0), "not-a-knot") if x[0] == 0 else "not-a-knot"
        spline = CubicSpline(x, y, bc_type=bc)
        interp = spline
    else:
        raise ValueError(f"unknown interpolation {interpolation!r}; use 'linear' or 'cubic'")
    lo, hi = x[0], x[-1]

    def profile(r):
        r = np.asarray(r, dtype=float)
        outside = (r < lo) | (r > hi)
        if outside.any() and fill_value is None:
            raise ValueError(f"radius outside sampled range [{lo}, {hi}]")
        out = np.asarray(interp(np.clip(r, lo, hi)), dtype=complex)
        if outside.any():
            out = np.where(outside, complex(fill_value), out)
        return out

    return RadialFunction(
        profile,
        _check_dim(dim),
        ("sampled", interpolation, (float(lo), float(hi), int(x.size))),
    )


def read_profile_csv(path, dim: int, interpolation: str = "linear", fill_value=None) -> RadialFunction:
    """Read ``radius,re[,im]`` rows (header lines that do not parse are skipped)."""
    radii, vals = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            row = [c.strip() for c in row if c.strip()]
            if not row:
                continue
            try:
                nums = [float(c) for c in row]
            except ValueError:
                if radii:
                    raise
                continue
            if len(nums) not in (2, 3):
                raise ValueError(f"expected 2 or 3 columns, got {len(nums)}")
            radii.append(nums[0])
            vals.append(complex(nums[1], nums[2] if len(nums) == 3 else 0.0))
    return sampled(dim, radii, vals, interpolation, fill_value)


def _rule_for(f: RadialFunction, rule: SphereAverageRule | None) -> SphereAverageRule:
    if rule is None:
        return build_rule(f.dim)
    if rule.dim != f.dim:
        raise ValueError(f"rule is for n={rule.dim} but function lives on n={f.dim}")
    return rule


def _compose(f: RadialFunction, profile, op: tuple, depth_cap: int) -> RadialFunction:
    depth = f.depth + 1
    if depth > depth_cap:
        raise DepthCapExceeded(f"operator depth {depth} exceeds cap {depth_cap}")
    return RadialFunction(profile, f.dim, ("composed", op, f.provenance), depth)


def k_translate(f: RadialFunction, rho_base, r_trans, rule: SphereAverageRule | None = None):
    """``(tau_y f)(x)`` for ``|x| = rho_base``, ``|y| = r_trans``."""
    return sphere_average(_rule_for(f, rule), f, rho_base, r_trans)


def translate(f: RadialFunction, r: float, rule=None, depth_cap: int = DEFAULT_DEPTH_CAP) -> RadialFunction:
    """The radial function ``rho -> k_translate(f, rho, r)``."""
    rule = _rule_for(f, rule)
    r = abs(float(r))
    return _compose(f, lambda rho: sphere_average(rule, f, rho, r), ("translate", r, rule.order), depth_cap)


@dataclass(frozen=True)
class SphericalDifference:
    """``D_{s;y} = delta_|y|^# - s(|y|) delta_e``; only the radius matters here."""

    s: SphericalFunction
    rho: float

    def __post_init__(self):
        object.__setattr__(self, "rho", abs(float(self.rho)))

    @property
    def scale(self) -> complex:
        return eval_spherical(self.s, self.rho)


def apply_difference(d: SphericalDifference, f: RadialFunction, rule=None,
                     depth_cap: int = DEFAULT_DEPTH_CAP) -> RadialFunction:
    rule = _rule_for(f, rule)
    if d.s.dim != f.dim:
        raise ValueError("difference and function live in different dimensions")
    c = d.scale
    r = d.rho

    def profile(rho):
        return sphere_average(rule, f, rho, r) - c * f(rho)

    return _compose(f, profile, ("difference", d.s.lam, r, rule.order), depth_cap)


def check_product_formula(s: SphericalFunction, rho: float, r: float, rule=None) -> float:
    """``|int_K J(x + k y) dw(k) - J(|x|) J(|y|)|``."""
    f = spherical(s)
    lhs = k_translate(f, rho, r, rule)
    return abs(lhs - eval_spherical(s, rho) * eval_spherical(s, r))


def random_radii(rng: np.random.Generator, count: int = 2, low: float = 0.4, high: float = 1.9):
    """Sorted distinct random difference radii from a seeded generator."""
    radii = np.sort(rng.uniform(low, high, size=count))
    return tuple(float(x) for x in radii)


def difference_sups(f: RadialFunction, s: SphericalFunction, level: int, radii, grid=None, rule=None,
                    depth_cap: int = DEFAULT_DEPTH_CAP) -> dict:
    """Sup-norm on ``grid`` of every ``level``-fold composition of differences.

    The difference operators commute, so one composition per multiset of
    radii is enough. Keys are the radius tuples.
    """
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    rule = _rule_for(f, rule)
    if level == 0:
        return {(): float(np.max(np.abs(f.on_grid(grid))))}
    cache = {(): f}
    out = {}
    for combo in itertools.combinations_with_replacement(radii, level):
        g = f
        for j in range(len(combo)):
            key = combo[: j + 1]
            if key not in cache:
                cache[key] = apply_difference(SphericalDifference(s, combo[j]), cache[combo[:j]], rule, depth_cap)
            g = cache[key]
        out[combo] = float(np.max(np.abs(g.on_grid(grid))))
    return out


def monomial_degree(f: RadialFunction, s: SphericalFunction, max_deg: int = 2,
                    radii=DEFAULT_DIFFERENCE_RADII, grid=None, tol: float = DEFAULT_DEGREE_TOL,
                    rule=None, depth_cap: int = DEFAULT_DEPTH_CAP, trace: dict | None = None) -> int:
    """Least m such that every (m+1)-fold difference composition kills ``f``.

    The degree is only reported when some m-fold composition stays above
    ``10 * tol``, so the answer is exact rather than an upper bound. If
    ``trace`` is given it receives the worst sup-norm found at each level.
    """
    trace = {} if trace is None else trace
    radii = tuple(float(r) for r in radii)
    if not radii or any(r <= 0 for r in radii) or len(set(radii)) != len(radii):
        raise ValueError("radii must be nonempty, distinct and positive")
    prev = trace[0] = max(difference_sups(f, s, 0, radii, grid, rule, depth_cap).values())
    if prev <= tol:
        raise DegreeError("the zero function has no degree")
    for m in range(max_deg + 1):
        if m + 1 > depth_cap:
            raise DegreeExceeded(f"verifying degree {m} needs depth {m + 1} > depth cap {depth_cap}")
        cur = trace[m + 1] = max(difference_sups(f, s, m + 1, radii, grid, rule, depth_cap).values())
        if tol < cur <= 10 * tol:
            raise IllConditioned(f"level {m + 1} compositions have sup {cur:.3e}, between tol and 10*tol")
        if cur <= tol:
            if prev <= 10 * tol:
                raise IllConditioned(f"level {m} witness {prev:.3e} is not above 10*tol")
            return m
        prev = cur
    raise DegreeExceeded(f"no degree <= {max_deg} annihilates the function")
