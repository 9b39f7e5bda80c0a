"""Least-squares synthesis of radial functions from spherical monomials.

The dictionary has one column ``d^m/dlam^m J_lam`` per spectrum entry and
degree ``m = 0..max_degree``, sampled at Chebyshev-Lobatto radii on [0, R]
and scaled to unit max-norm. Fit quality is measured on an independent
equispaced grid four times denser than the collocation set.
"""
from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import solve_triangular
from scipy.optimize import brentq

from .bessel_core import MonomialGenerator, SphericalFunction, eval_monomial, eval_spherical
from .radial_ops import RadialFunction

__all__ = [
    "ConditioningError",
    "SynthesisProblem",
    "Dictionary",
    "FitResult",
    "profile_zeros",
    "fourier_bessel_spectrum",
    "collocation_radii",
    "build_dictionary",
    "fit",
    "parse_spectrum",
]

COLLOCATION_FACTOR = 8
DENSE_FACTOR = 4
AUTO_RIDGE_FACTOR = 1e-12


class ConditioningError(np.linalg.LinAlgError):
    pass


@dataclass(frozen=True)
class SynthesisProblem:
    dim: int
    radius: float
    target: RadialFunction
    spectrum: tuple
    max_degree: int = 0
    collocation: int | None = None  # None -> 8 x dictionary size
    ridge: float | None = None  # None -> 0, falling back to a tiny ridge if rank deficient

    def __post_init__(self):
        object.__setattr__(self, "spectrum", tuple(complex(x) for x in self.spectrum))
        if self.dim < 2:
            raise ValueError("dim must be >= 2")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.target.dim != self.dim:
            raise ValueError(f"target lives on n={self.target.dim}, problem on n={self.dim}")
        if not self.spectrum:
            raise ValueError("spectrum is empty")
        if self.max_degree < 0:
            raise ValueError("max_degree must be >= 0")
        if self.ridge is not None and self.ridge < 0:
            raise ValueError("ridge must be >= 0")
        if self.collocation is not None and self.collocation < self.n_columns:
            raise ValueError(f"collocation ({self.collocation}) < dictionary size ({self.n_columns})")

    @property
    def n_columns(self) -> int:
        return len(self.spectrum) * (self.max_degree + 1)

    @property
    def n_collocation(self) -> int:
        return self.collocation if self.collocation is not None else COLLOCATION_FACTOR * self.n_columns


def profile_zeros(dim: int, count: int, step: float = 0.25) -> np.ndarray:
    """First ``count`` positive zeros of the profile ``J_{-1}`` on R^dim."""
    s = SphericalFunction(-1.0, dim)
    g = lambda x: eval_spherical(s, x).real  # noqa: E731
    zeros = []
    a = step
    fa = g(a)
    while len(zeros) < count:
        b = a + step
        fb = g(b)
        if fa == 0.0:
            zeros.append(a)
        elif fa * fb < 0:
            zeros.append(brentq(g, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps))
        a, fa = b, fb
    return np.array(zeros[:count])


def fourier_bessel_spectrum(dim: int, radius: float, modes: int, boundary: str = "neumann") -> tuple:
    """``lam_j = -(z_j / R)^2`` for the first ``modes`` Fourier-Bessel modes on the ball.

    ``dirichlet`` takes the zeros of the profile itself, so every column
    vanishes at R. ``neumann`` takes the critical points, starting with
    z = 0 (the constant); since ``d/dr J_lam = (lam r / n) J_lam`` in
    dimension n + 2, those are the profile zeros in dimension n + 2.
    """
    if modes < 1:
        raise ValueError("modes must be >= 1")
    if boundary == "dirichlet":
        z = profile_zeros(dim, modes)
    elif boundary == "neumann":
        z = np.concatenate([[0.0], profile_zeros(dim + 2, modes - 1)])
    else:
        raise ValueError(f"boundary must be 'neumann' or 'dirichlet', got {boundary!r}")
    return tuple(complex(-(zj / radius) ** 2) for zj in z)


_AUTO = re.compile(r"^auto:modes=(\d+)(?:,bc=(neumann|dirichlet))?$")


def parse_spectrum(spec, dim: int, radius: float) -> tuple:
    """A list of eigenvalues, or ``"auto:modes=k[,bc=neumann|dirichlet]"``."""
    if isinstance(spec, str):
        m = _AUTO.match(spec.strip())
        if not m:
            raise ValueError(f"bad spectrum spec {spec!r}; expected 'auto:modes=k' or a list")
        return fourier_bessel_spectrum(dim, radius, int(m.group(1)), m.group(2) or "neumann")
    out = []
    for x in spec:
        if isinstance(x, (list, tuple)):
            out.append(complex(float(x[0]), float(x[1])))
        elif isinstance(x, str):
            out.append(complex(x.replace("i", "j").replace(" ", "")))
        else:
            out.append(complex(x))
    return tuple(out)


def collocation_radii(radius: float, count: int) -> np.ndarray:
    """Chebyshev-Lobatto points mapped to [0, R], endpoints included."""
    if count == 1:
        return np.array([0.0])
    k = np.arange(count)
    return 0.5 * radius * (1.0 - np.cos(np.pi * k / (count - 1)))


@dataclass(frozen=True, eq=False)
class Dictionary:
    generators: tuple  # MonomialGenerator per column
    radii: np.ndarray
    matrix: np.ndarray  # scaled columns
    scales: np.ndarray  # column j of matrix = raw column j * scales[j]

    def evaluate(self, r) -> np.ndarray:
        """Scaled columns at arbitrary radii."""
        r = np.asarray(r, dtype=float)
        cols = [eval_monomial(g, r) for g in self.generators]
        return np.stack(cols, axis=-1) * self.scales


def build_dictionary(p: SynthesisProblem) -> Dictionary:
    gens = tuple(
        MonomialGenerator(SphericalFunction(lam, p.dim), m)
        for lam in p.spectrum
        for m in range(p.max_degree + 1)
    )
    radii = collocation_radii(p.radius, p.n_collocation)
    raw = np.stack([eval_monomial(g, radii) for g in gens], axis=1)
    peak = np.max(np.abs(raw), axis=0)
    scales = np.where(peak > 0, 1.0 / np.where(peak > 0, peak, 1.0), 1.0)
    return Dictionary(gens, radii, raw * scales, scales)


@dataclass(frozen=True, eq=False)
class FitResult:
    coefficients: np.ndarray  # on the scaled columns
    scales: np.ndarray
    generators: tuple
    sup_error: float
    l2_error: float  # RMS over the dense grid
    collocation_residual: float  # ||A c - b||_2 over the collocation set
    condition_estimate: float
    ridge: float
    dense_radii: np.ndarray = field(repr=False)
    dense_target: np.ndarray = field(repr=False)
    dense_fit: np.ndarray = field(repr=False)

    @property
    def raw_coefficients(self) -> np.ndarray:
        """Coefficients on the unscaled monomials."""
        return self.coefficients * self.scales

    def to_json(self) -> dict:
        return {
            "columns": [
                {"lambda": [g.lam.real, g.lam.imag], "degree": g.degree} for g in self.generators
            ],
            "coefficients": [[float(c.real), float(c.imag)] for c in self.coefficients],
            "scales": [float(s) for s in self.scales],
            "sup_error": float(self.sup_error),
            "l2_error": float(self.l2_error),
            "collocation_residual": float(self.collocation_residual),
            "condition_estimate": float(self.condition_estimate),
            "ridge": float(self.ridge),
            "n_dense": int(self.dense_radii.size),
        }

    def residual_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["radius", "target_re", "target_im", "fit_re", "fit_im", "residual"])
        for r, t, f in zip(self.dense_radii, self.dense_target, self.dense_fit):
            row = (r, t.real, t.imag, f.real, f.imag, abs(f - t))
            w.writerow([repr(float(x)) for x in row])
        return buf.getvalue()


def _solve(a: np.ndarray, b: np.ndarray, ridge: float) -> np.ndarray:
    if ridge > 0:
        m = a.shape[1]
        a = np.vstack([a, np.sqrt(ridge) * np.eye(m)])
        b = np.concatenate([b, np.zeros(m, dtype=b.dtype)])
    q, r = np.linalg.qr(a)
    return solve_triangular(r, q.conj().T @ b)


def fit(p: SynthesisProblem, dictionary: Dictionary | None = None) -> FitResult:
    """Minimize ``|A c - b|^2 + ridge |c|^2`` over the collocation radii."""
    d = build_dictionary(p) if dictionary is None else dictionary
    a = d.matrix
    b = np.asarray(p.target(d.radii), dtype=complex)
    sv = np.linalg.svd(a, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    deficient = sv[-1] <= sv[0] * max(a.shape) * np.finfo(float).eps

    if p.ridge is None:
        ridge = AUTO_RIDGE_FACTOR * float(sv[0]) if deficient else 0.0
    else:
        ridge = float(p.ridge)
        if deficient and ridge == 0.0:
            raise ConditioningError(
                f"dictionary is rank deficient (condition ~{cond:.3e}); "
                "use a ridge > 0 or remove duplicate spectrum entries"
            )
    coef = _solve(a, b, ridge)
    colloc_res = float(np.linalg.norm(a @ coef - b))

    dense = np.linspace(0.0, p.radius, DENSE_FACTOR * a.shape[0])
    target = np.asarray(p.target(dense), dtype=complex)
    approx = d.evaluate(dense) @ coef
    err = np.abs(approx - target)
    return FitResult(
        coefficients=coef,
        scales=d.scales,
        generators=d.generators,
        sup_error=float(err.max()),
        l2_error=float(np.sqrt(np.mean(err**2))),
        collocation_residual=colloc_res,
        condition_estimate=cond,
        ridge=ridge,
        dense_radii=dense,
        dense_target=target,
        dense_fit=approx,
    )
