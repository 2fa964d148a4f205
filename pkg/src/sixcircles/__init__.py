"""Chains of circles inscribed in the angles of triangles and convex polygons."""

from .chain import (
    AngleCircle, ChainRecord, Choice, Policy, SignCase, Tangency, Termination,
    circle_from_radius, circle_from_u, next_u, run_chain, step,
)
from .errors import SixCirclesError
from .pldynamics import PLMapParams, composite_params, fixed_point, orbit
from .polygon import ConvexPolygon, divergence_rate, polygon_chain
from .triangle import Triangle, triangle_from_sides

__version__ = "0.1.0"

__all__ = [
    "AngleCircle", "ChainRecord", "Choice", "ConvexPolygon", "PLMapParams", "Policy", "SignCase",
    "SixCirclesError", "Tangency", "Termination", "Triangle", "circle_from_radius", "circle_from_u",
    "composite_params", "divergence_rate", "fixed_point", "next_u", "orbit", "polygon_chain",
    "run_chain", "step", "triangle_from_sides",
]
