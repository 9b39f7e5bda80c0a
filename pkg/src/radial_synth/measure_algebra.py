"""Finite radial measures as formal words of sphere atoms.

A :class:`RadialMeasureExpr` is ``sum_j w_j delta_{r_j1}^# * ... * delta_{r_jk}^#``.
The convolution of sphere atoms is never materialized as a density; only its
pairings with radial functions are computed, by iterated sphere averages.

:class:`LineMeasure` is a finitely supported measure on the real line, and
:func:`lift` carries it to R^n under one of two readings of the product:

* ``axis``: pair through ``f0`` on the line, multiply by 1-d convolution
  (atoms add). The homomorphism identity holds exactly.
* ``sphere``: ``delta_t -> delta_|t|^#`` with word concatenation, the
  convolution of K-radial measures. The identity fails for atoms.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

import numpy as np

from .radial_ops import DEFAULT_DEPTH_CAP, DepthCapExceeded, RadialFunction, _rule_for, translate

__all__ = [
    "RadialMeasureExpr",
    "LineMeasure",
    "AxisFunctional",
    "delta_e",
    "atom",
    "pair",
    "convolve",
    "act_on_function",
    "lift",
    "homomorphism_residual",
    "SEMANTICS",
]

SEMANTICS = ("axis", "sphere")


def _wire_complex(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def _from_wire(w) -> complex:
    if isinstance(w, (list, tuple)):
        re, im = w
        return complex(float(re), float(im))
    return complex(w)


@dataclass(frozen=True)
class RadialMeasureExpr:
    terms: tuple  # ((weight, (r1, r2, ...)), ...); empty word is delta_e

    def __post_init__(self):
        terms = []
        for w, word in self.terms:
            word = tuple(float(r) for r in word)
            if any(r < 0 or not np.isfinite(r) for r in word):
                raise ValueError("atom radii must be finite and >= 0")
            terms.append((complex(w), word))
        object.__setattr__(self, "terms", tuple(terms))

    @property
    def max_word_length(self) -> int:
        return max((len(word) for _, word in self.terms), default=0)

    def total_weight(self) -> complex:
        return sum((w for w, _ in self.terms), 0j)

    def __add__(self, other: "RadialMeasureExpr") -> "RadialMeasureExpr":
        return RadialMeasureExpr(self.terms + other.terms)

    def __sub__(self, other: "RadialMeasureExpr") -> "RadialMeasureExpr":
        return self + other.scaled(-1)

    def scaled(self, c) -> "RadialMeasureExpr":
        return RadialMeasureExpr(tuple((c * w, word) for w, word in self.terms))

    def to_json(self) -> dict:
        return {"terms": [{"w": _wire_complex(w), "word": list(word)} for w, word in self.terms]}

    @classmethod
    def from_json(cls, data) -> "RadialMeasureExpr":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple((_from_wire(t["w"]), tuple(t["word"])) for t in data["terms"]))


def delta_e() -> RadialMeasureExpr:
    return RadialMeasureExpr(((1.0, ()),))


def atom(r: float, weight=1.0) -> RadialMeasureExpr:
    """``weight * delta_r^#``, the normalized surface measure on the sphere of radius r."""
    return RadialMeasureExpr(((weight, (abs(float(r)),)),))


def _check_depth(mu: RadialMeasureExpr, depth_cap: int):
    if mu.max_word_length > depth_cap:
        raise DepthCapExceeded(f"word length {mu.max_word_length} exceeds depth cap {depth_cap}")


def _pair_word(word, f: RadialFunction, rule) -> complex:
    # Walk outward from the origin: the first atom lands on the sphere |x| = r1
    # exactly, each further atom spreads every point over the rule's nodes.
    if not word:
        return complex(f(0.0))
    pts = np.array([word[0]])
    wts = np.array([1.0])
    c = rule.cos_nodes
    for r in word[1:]:
        sq = pts[:, None] ** 2 + r * r + 2.0 * r * pts[:, None] * c
        pts = np.sqrt(np.maximum(sq, 0.0)).ravel()
        wts = (wts[:, None] * rule.weights).ravel()
    return complex(np.dot(wts, np.asarray(f(pts), dtype=complex)))


def pair(mu: RadialMeasureExpr, f: RadialFunction, rule=None, depth_cap: int = DEFAULT_DEPTH_CAP) -> complex:
    """``<mu, f>`` by iterated sphere averages, summed over terms."""
    _check_depth(mu, depth_cap)
    rule = _rule_for(f, rule)
    return sum((w * _pair_word(word, f, rule) for w, word in mu.terms), 0j)


def convolve(mu: RadialMeasureExpr, nu: RadialMeasureExpr, depth_cap: int = DEFAULT_DEPTH_CAP) -> RadialMeasureExpr:
    """Bilinear word concatenation."""
    out = RadialMeasureExpr(tuple((a * b, wa + wb) for a, wa in mu.terms for b, wb in nu.terms))
    _check_depth(out, depth_cap)
    return out


def act_on_function(mu: RadialMeasureExpr, f: RadialFunction, rule=None,
                    depth_cap: int = DEFAULT_DEPTH_CAP) -> RadialFunction:
    """``mu * f``: each word translates ``f`` radius by radius, then terms are summed."""
    _check_depth(mu, depth_cap)
    rule = _rule_for(f, rule)
    chains = []
    for w, word in mu.terms:
        g = f
        for r in word:
            g = translate(g, r, rule, depth_cap)
        chains.append((w, g))

    def profile(rho):
        out = np.zeros(np.shape(rho), dtype=complex)
        for w, g in chains:
            out = out + w * g(rho)
        return out

    depth = max(g.depth for _, g in chains) if chains else f.depth
    op = ("measure", tuple((w, word) for w, word in mu.terms), rule.order)
    return RadialFunction(profile, f.dim, ("composed", op, f.provenance), depth)


@dataclass(frozen=True)
class LineMeasure:
    atoms: tuple  # ((t, w), ...)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple((float(t), complex(w)) for t, w in self.atoms))

    def pair(self, g) -> complex:
        return sum((w * complex(g(t)) for t, w in self.atoms), 0j)

    def convolve(self, other: "LineMeasure") -> "LineMeasure":
        return LineMeasure(tuple((s + t, a * b) for s, a in self.atoms for t, b in other.atoms))

    def to_json(self) -> dict:
        return {"atoms": [{"t": t, "w": _wire_complex(w)} for t, w in self.atoms]}

    @classmethod
    def from_json(cls, data) -> "LineMeasure":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple((a["t"], _from_wire(a["w"])) for a in data["atoms"]))


@dataclass(frozen=True)
class AxisFunctional:
    """``f -> <nu, f0>`` for a line measure ``nu``; products convolve on the line."""

    line: LineMeasure

    def pair(self, f: RadialFunction, rule=None) -> complex:
        return self.line.pair(f)

    def __mul__(self, other: "AxisFunctional") -> "AxisFunctional":
        return AxisFunctional(self.line.convolve(other.line))


Lifted = Union[AxisFunctional, RadialMeasureExpr]


def lift(mu: LineMeasure, semantics: str) -> Lifted:
    if semantics == "axis":
        return AxisFunctional(mu)
    if semantics == "sphere":
        return RadialMeasureExpr(tuple((w, (abs(t),) if t != 0 else ()) for t, w in mu.atoms))
    raise ValueError(f"semantics must be one of {SEMANTICS}, got {semantics!r}")


def _lifted_product(a: Lifted, b: Lifted, depth_cap: int) -> Lifted:
    if isinstance(a, AxisFunctional):
        return a * b
    return convolve(a, b, depth_cap)


def _lifted_pair(m: Lifted, f: RadialFunction, rule, depth_cap: int) -> complex:
    if isinstance(m, AxisFunctional):
        return m.pair(f)
    return pair(m, f, rule, depth_cap)


def homomorphism_residual(mu: LineMeasure, nu: LineMeasure, f: RadialFunction, semantics: str,
                          rule=None, depth_cap: int = DEFAULT_DEPTH_CAP) -> float:
    """``|<lift(mu*nu), f> - <lift(mu)*lift(nu), f>|``."""
    lhs = _lifted_pair(lift(mu.convolve(nu), semantics), f, rule, depth_cap)
    rhs = _lifted_pair(_lifted_product(lift(mu, semantics), lift(nu, semantics), depth_cap), f, rule, depth_cap)
    return abs(lhs - rhs)
