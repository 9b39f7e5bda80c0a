"""Spherical functions of (R^n, SO(n)) and their lambda-derivatives.

The spherical function with eigenvalue ``lam`` is the radial profile

    J_lam(r) = Gamma(n/2) * sum_k lam^k / (k! Gamma(k + n/2)) * (r/2)^(2k)

and the degree-m monomial generator is its m-th derivative in ``lam``.
Both are evaluated term by term from the ratio recurrence, so Gamma never
has to be called and ``J_lam(0) == 1`` holds exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numba
import numpy as np

__all__ = [
    "SeriesBudgetExceeded",
    "SphericalFunction",
    "MonomialGenerator",
    "eval_spherical",
    "eval_monomial",
    "eval_series_mp",
    "laplacian_residual",
    "richardson_ratio",
    "CANCELLATION_LIMIT",
]

# Ratio sum|t_k| / max(1, |sum|) above which the double-precision sum is
# redone in mpmath. 1024 * eps keeps the absolute error near 1e-13.
CANCELLATION_LIMIT = 1024.0


class SeriesBudgetExceeded(ArithmeticError):
    """The power series did not meet its stopping rule within ``max_terms``."""

    def __init__(self, lam, dim, radius, last_term, max_terms):
        self.lam = lam
        self.dim = dim
        self.radius = radius
        self.last_term = last_term
        self.max_terms = max_terms
        super().__init__(
            f"series budget exceeded: lam={lam}, n={dim}, r={radius}, "
            f"|last term|={last_term:.3e} after {max_terms} terms"
        )


@dataclass(frozen=True)
class SphericalFunction:
    """Spherical function ``x -> J_lam(|x|)`` on R^dim."""

    lam: complex
    dim: int
    series_tol: float = 1e-16
    max_terms: int = 200

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        if int(self.dim) != self.dim or self.dim < 2:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim!r}")
        object.__setattr__(self, "dim", int(self.dim))
        if not self.series_tol > 0:
            raise ValueError("series_tol must be positive")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")

    def __call__(self, r):
        return eval_spherical(self, r)

    def monomial(self, degree: int) -> "MonomialGenerator":
        return MonomialGenerator(self, degree)


@dataclass(frozen=True)
class MonomialGenerator:
    """``r -> d^m/dlam^m J_lam(r)``, a spherical monomial of degree m."""

    base: SphericalFunction
    degree: int

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise ValueError(f"degree must be a nonnegative integer, got {self.degree!r}")
        object.__setattr__(self, "degree", int(self.degree))

    @property
    def lam(self) -> complex:
        return self.base.lam

    @property
    def dim(self) -> int:
        return self.base.dim

    def __call__(self, r):
        return eval_monomial(self, r)


@numba.njit(cache=True)
def _series_kernel(lam, half_n, m, r, tol, max_terms, out, abs_sum, last, ok):
    # Term k (k >= m) is lam^(k-m) q^k / ((k-m)! (n/2)_k) with q = (r/2)^2.
    lam_abs = abs(lam)
    tol2 = tol * tol
    for i in range(r.size):
        q = 0.25 * r[i] * r[i]
        lead = 1.0
        for j in range(m):
            lead *= q / (j + half_n)
        t = complex(lead, 0.0)
        t_abs = lead
        s = 0j
        a = 0.0
        lq = lam * q
        aq = lam_abs * q
        done = False
        k = m
        while k < m + max_terms:
            s += t
            a += t_abs
            denom = (k + 1 - m) * (k + half_n)
            # stop only past the hump: tail ratio bound below 1/2
            if t_abs * t_abs <= tol2 * (s.real * s.real + s.imag * s.imag) and aq < 0.5 * denom:
                done = True
                break
            t = t * lq / denom
            t_abs = t_abs * aq / denom
            k += 1
        out[i] = s
        abs_sum[i] = a
        last[i] = t_abs
        ok[i] = done


def eval_series_mp(lam, dim, degree, r, dps=30, max_terms=400):
    """Evaluate the degree-``degree`` series at one radius in ``dps`` digits.

    Returns an ``mpmath.mpc``; the caller owns conversion back to floats.
    """
    with mpmath.workdps(dps):
        lam_mp = mpmath.mpc(lam)
        r_mp = abs(mpmath.mpf(r))
        q = r_mp * r_mp / 4
        half_n = mpmath.mpf(dim) / 2
        t = mpmath.mpc(1)
        for j in range(degree):
            t *= q / (j + half_n)
        s = mpmath.mpc(0)
        eps = mpmath.mpf(10) ** (-dps)
        aq = abs(lam_mp) * q
        for k in range(degree, degree + max_terms):
            s += t
            denom = (k + 1 - degree) * (k + half_n)
            if abs(t) <= eps * abs(s) and aq < denom / 2:
                return +s
            t = t * lam_mp * q / denom
        raise SeriesBudgetExceeded(complex(lam), dim, float(r), float(abs(t)), max_terms)


def _evaluate(lam: complex, dim: int, degree: int, r, tol: float, max_terms: int):
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    flat = np.abs(np.ravel(r_arr))
    if not np.all(np.isfinite(flat)):
        raise ValueError("radii must be finite")
    out = np.empty(flat.size, dtype=complex)
    abs_sum = np.empty(flat.size)
    last = np.empty(flat.size)
    ok = np.empty(flat.size, dtype=np.bool_)
    _series_kernel(complex(lam), 0.5 * dim, degree, flat, tol, max_terms, out, abs_sum, last, ok)
    if not ok.all():
        i = int(np.argmin(ok))
        raise SeriesBudgetExceeded(lam, dim, float(flat[i]), float(last[i]), max_terms)

    lossy = np.flatnonzero(abs_sum > CANCELLATION_LIMIT * np.maximum(1.0, np.abs(out)))
    for i in lossy:
        digits = math.log10(abs_sum[i] / max(1.0, abs(out[i])))
        out[i] = complex(eval_series_mp(lam, dim, degree, flat[i], dps=20 + math.ceil(digits)))

    if scalar:
        return complex(out[0])
    return out.reshape(r_arr.shape)


def eval_spherical(s: SphericalFunction, r):
    """``J_lam(|r|)`` for a scalar or array of radii."""
    return _evaluate(s.lam, s.dim, 0, r, s.series_tol, s.max_terms)


def eval_monomial(g: MonomialGenerator, r):
    """``d^m/dlam^m J_lam(|r|)``, the series differentiated term by term."""
    b = g.base
    return _evaluate(b.lam, b.dim, g.degree, r, b.series_tol, b.max_terms)


_D1 = (1, -8, 0, 8, -1)
_D2 = (-1, 16, -30, 16, -1)


def laplacian_residual(s: SphericalFunction, r: float, h: float, dps: int = 30) -> float:
    """``|phi'' + (n-1)/r phi' - lam phi|`` with fourth-order central differences.

    The stencil values are taken in ``dps``-digit arithmetic. In doubles the
    rounding error of the second difference (about eps/h^2) swamps the h^4
    truncation error for any useful step.
    """
    if not (h > 0 and r > 2 * h):
        raise ValueError("need r > 2h > 0")
    with mpmath.workdps(dps):
        rm = mpmath.mpf(r)
        hm = mpmath.mpf(h)
        vals = [eval_series_mp(s.lam, s.dim, 0, rm + j * hm, dps=dps) for j in (-2, -1, 0, 1, 2)]
        d1 = sum(c * v for c, v in zip(_D1, vals)) / (12 * hm)
        d2 = sum(c * v for c, v in zip(_D2, vals)) / (12 * hm * hm)
        res = d2 + (s.dim - 1) / rm * d1 - mpmath.mpc(s.lam) * vals[2]
        return float(abs(res))


def richardson_ratio(s: SphericalFunction, r: float, h: float, dps: int = 30) -> float:
    """residual(h) / residual(h/2); close to 16 for the fourth-order stencil."""
    fine = laplacian_residual(s, r, h / 2, dps)
    coarse = laplacian_residual(s, r, h, dps)
    if fine == 0.0:
        return math.nan
    return coarse / fine
