"""Normalized Haar average over SO(n) orbits as a one-dimensional rule.

For radial ``f`` and ``|x| = rho``, ``|y| = r``,

    int_K f(x + k y) dw(k) = (1/Z_n) int_0^pi f0(sqrt(rho^2 + r^2 + 2 rho r cos t)) sin^(n-2) t dt

Nodes are Gauss-Legendre in the angle t on [0, pi]; the sin^(n-2) factor is
folded into the weights, which are then renormalized to sum to one. Working
in t rather than cos t keeps the n = 2 endpoint singularity out of the rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["SphereAverageRule", "build_rule", "sphere_average", "DEFAULT_ORDER"]

DEFAULT_ORDER = 64


@dataclass(frozen=True, eq=False)
class SphereAverageRule:
    dim: int
    order: int
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def cos_nodes(self) -> np.ndarray:
        return np.cos(self.nodes)

    def __call__(self, g) -> complex:
        """Average an angular integrand ``g(theta)``."""
        return complex(_weighted_sum(np.asarray(g(self.nodes), dtype=complex), self.weights))

    def __repr__(self):
        return f"SphereAverageRule(dim={self.dim}, order={self.order})"


def _weighted_sum(vals: np.ndarray, w: np.ndarray):
    # Row-wise real reductions: a value never depends on the batch it came
    # in, and a constant integrand returns exactly w.sum().
    return (vals.real * w).sum(axis=-1) + 1j * (vals.imag * w).sum(axis=-1)


@lru_cache(maxsize=64)
def build_rule(dim: int, order: int = DEFAULT_ORDER) -> SphereAverageRule:
    if int(dim) != dim or dim < 2:
        raise ValueError(f"unsupported dimension {dim!r}: SO(n) averages need n >= 2")
    if int(order) != order or order < 1:
        raise ValueError(f"order must be a positive integer, got {order!r}")
    x, w = np.polynomial.legendre.leggauss(int(order))
    theta = 0.5 * np.pi * (x + 1.0)
    w = w * np.sin(theta) ** (dim - 2)
    w = w / w.sum()
    theta.setflags(write=False)
    w.setflags(write=False)
    return SphereAverageRule(int(dim), int(order), theta, w)


def sphere_average(rule: SphereAverageRule, f0, rho, r):
    """Average of radial ``f0`` over the sphere of radius ``r`` centred at distance ``rho``.

    ``rho`` and ``r`` may be arrays (broadcast together); ``f0`` must accept
    arrays of radii of any shape.
    """
    rho = np.abs(np.asarray(rho, dtype=float))
    r = np.abs(np.asarray(r, dtype=float))
    rho, r = np.broadcast_arrays(rho, r)
    c = rule.cos_nodes
    sq = rho[..., None] ** 2 + r[..., None] ** 2 + 2.0 * rho[..., None] * r[..., None] * c
    # cancellation near rho == r, cos = -1 can dip a hair below zero
    t = np.sqrt(np.maximum(sq, 0.0))
    vals = np.asarray(f0(t), dtype=complex)
    out = _weighted_sum(vals, rule.weights)
    if out.ndim == 0:
        return complex(out)
    return out
