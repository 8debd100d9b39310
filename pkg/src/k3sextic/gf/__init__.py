"""GF(25) arithmetic, polynomials, Groebner bases and linear algebra."""

from . import field
from .field import gf
from .groebner import (
    INFINITE,
    IdealGB,
    buchberger,
    ideal_power_plus_F,
    normal_form_F,
    quotient_dimension,
    surface_equation,
)
from .linalg import InconsistentSystem, kernel, rank, rref, solve, solve_linear_gf
from .poly import AFFINE, HOMOG, PLANE, Poly, parse_poly

__all__ = [
    "field", "gf", "INFINITE", "IdealGB", "buchberger", "ideal_power_plus_F",
    "normal_form_F", "quotient_dimension", "surface_equation", "InconsistentSystem",
    "kernel", "rank", "rref", "solve", "solve_linear_gf", "AFFINE", "HOMOG", "PLANE",
    "Poly", "parse_poly",
]
