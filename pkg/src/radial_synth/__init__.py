"""Spherical analysis and synthesis on the Gelfand pair (R^n, SO(n))."""
from .bessel_core import (
    MonomialGenerator,
    SeriesBudgetExceeded,
    SphericalFunction,
    eval_monomial,
    eval_spherical,
    laplacian_residual,
)
from .config import RunConfig
from .measure_algebra import LineMeasure, RadialMeasureExpr, act_on_function, convolve, lift, pair
from .radial_ops import RadialFunction, SphericalDifference, apply_difference, k_translate, monomial_degree
from .sphere_quadrature import SphereAverageRule, build_rule, sphere_average
from .synthesis import FitResult, SynthesisProblem, build_dictionary, fit

__version__ = "0.1.0"
