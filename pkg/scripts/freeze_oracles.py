"""Compute the golden values frozen into the test suite.

Nothing here imports radial_synth: every number comes from closed forms,
scipy quadrature, scipy Bessel routines or exact rational arithmetic.

    python scripts/freeze_oracles.py
"""
import math
from fractions import Fraction

import mpmath
import numpy as np
from scipy import integrate, special


def j0_exact(x: float, terms: int = 80) -> float:
    """Classical J0 by its alternating series summed in exact rationals."""
    q = Fraction(x) ** 2 / 4
    total = Fraction(0)
    term = Fraction(1)
    for k in range(terms):
        total += term
        term = -term * q / ((k + 1) ** 2)
    return float(total)


def gegenbauer_average(g, dim, order=512):
    """(1/Z) int_{-1}^{1} g(t) (1-t^2)^((n-3)/2) dt by Gauss-Jacobi in t = cos(theta)."""
    a = 0.5 * (dim - 3)
    t, w = special.roots_jacobi(order, a, a)
    return np.dot(w, g(t)) / w.sum()


def gaussian_translate_n2():
    # (1/pi) int_0^pi exp(-(2 + 2 cos th)) dth = e^-2 I0(2)
    closed = math.exp(-2) * special.i0(2.0)
    quad, _ = integrate.quad(lambda th: math.exp(-(2 + 2 * math.cos(th))) / math.pi, 0, math.pi, epsabs=1e-15)
    return closed, quad


def sphere_lift_residual_n2():
    f0 = lambda t: np.exp(-t * t)  # noqa: E731
    pair_word = gegenbauer_average(lambda c: f0(np.sqrt(2 + 2 * c)), 2)
    return abs(f0(2.0) - pair_word), abs(math.exp(-4) - math.exp(-2) * special.i0(2.0))


def product_formula_n3(lam=1 + 1j, rho=2.0, r=1.5):
    k = np.sqrt(complex(lam))
    prof = lambda t: np.where(t == 0, 1.0, np.sinh(k * t) / np.where(t == 0, 1.0, k * t))  # noqa: E731
    avg = gegenbauer_average(lambda c: prof(np.sqrt(rho**2 + r**2 + 2 * rho * r * c)), 3)
    return abs(avg - prof(np.array(rho)) * prof(np.array(r)))


def synthesis_gaussian_n2(modes=16, radius=3.0, dps=50):
    """Neumann Fourier-Bessel least squares via normal equations in mpmath."""
    z = np.concatenate([[0.0], special.jn_zeros(1, modes - 1)])
    n_col = 8 * modes
    k = np.arange(n_col)
    x = 0.5 * radius * (1 - np.cos(np.pi * k / (n_col - 1)))
    dense = np.linspace(0.0, radius, 4 * n_col)
    with mpmath.workdps(dps):
        a = mpmath.matrix([[mpmath.besselj(0, mpmath.mpf(zj) * mpmath.mpf(xi) / radius) for zj in z] for xi in x])
        b = mpmath.matrix([mpmath.exp(-mpmath.mpf(xi) ** 2) for xi in x])
        c = mpmath.lu_solve(a.T * a, a.T * b)
        err = 0
        for xi in dense:
            fit = sum(c[j] * mpmath.besselj(0, mpmath.mpf(z[j]) * mpmath.mpf(xi) / radius) for j in range(modes))
            err = max(err, abs(fit - mpmath.exp(-mpmath.mpf(xi) ** 2)))
        return float(err)


if __name__ == "__main__":
    print("J0 exact at kappa*r = 2.4048*5:", repr(j0_exact(2.4048 * 5)))
    closed, quad = gaussian_translate_n2()
    print("gaussian translate n=2 rho=r=1: closed", repr(closed), "quad", repr(quad))
    res, res_closed = sphere_lift_residual_n2()
    print("sphere lift residual n=2: order-512", repr(res), "closed", repr(res_closed))
    print("product formula residual n=3 lam=1+i (oracle side)", repr(product_formula_n3()))
    for m in (4, 8, 16):
        print(f"synthesis sup error, {m} Neumann modes:", repr(synthesis_gaussian_n2(m)))
