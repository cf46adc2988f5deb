"""Coefficients ``A`` of ``f'' + A f = 0`` in the unit disc with prescribed zero sequences."""

from .analytic import AnalyticFunction, PathSpec, growth_norm, schwarzian
from .blaschke import BlaschkeProduct
from .builder import CoefficientBundle, build_coefficient, corona_coefficient, zero_free_example
from .carleson import AreaMeasureSpec, PointMeasure, invariant_constant_area, invariant_constant_point
from .geometry import DiscGrid, automorphism, cayley, make_grid, pseudo_distance
from .oscillation import (
    OdeState,
    conformal_transport,
    count_zeros,
    integrate,
    normality_diagnostic,
    second_solution,
    theorem1_bound,
    transport_solution,
    verify_prescribed_zeros,
)
from .sequences import LatticeParams, PointSequence, seip_lattice, seip_lattice_truncated

__version__ = "0.1.0"

__all__ = [
    "AnalyticFunction",
    "AreaMeasureSpec",
    "BlaschkeProduct",
    "CoefficientBundle",
    "DiscGrid",
    "LatticeParams",
    "OdeState",
    "PathSpec",
    "PointMeasure",
    "PointSequence",
    "automorphism",
    "build_coefficient",
    "cayley",
    "conformal_transport",
    "corona_coefficient",
    "count_zeros",
    "growth_norm",
    "integrate",
    "invariant_constant_area",
    "invariant_constant_point",
    "make_grid",
    "normality_diagnostic",
    "pseudo_distance",
    "schwarzian",
    "second_solution",
    "seip_lattice",
    "seip_lattice_truncated",
    "theorem1_bound",
    "transport_solution",
    "verify_prescribed_zeros",
    "zero_free_example",
]
