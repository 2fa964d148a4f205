"""Triangle model: sides, half-angles, beta-angles, edge couplings, embedding.

Indices are 1-based throughout: side ``i`` is opposite vertex ``i`` and a chain
walks the vertices in the cyclic order 1 -> 2 -> 3 -> 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real

from .errors import NonPositiveSide, TriangleInequalityViolated

Point = tuple[float, float]


def _exact(x: Real) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _unit(dx: float, dy: float) -> Point:
    n = math.hypot(dx, dy)
    return dx / n, dy / n


@dataclass(frozen=True)
class Triangle:
    """Immutable triangle with every derived quantity computed at construction.

    Use :func:`triangle_from_sides` rather than calling this directly.
    """

    sides: tuple[float, float, float]
    p: float
    tangent_lengths: tuple[float, float, float]
    tan_half: tuple[float, float, float]
    half_angles: tuple[float, float, float]
    betas: tuple[float, float, float]
    couplings: tuple[float, float, float]
    vertices: tuple[Point, Point, Point]
    _bisectors: tuple[Point, Point, Point] = field(repr=False, compare=False)

    n = 3

    # chain-walking helpers shared with ConvexPolygon

    def next_vertex(self, i: int) -> int:
        return i % 3 + 1

    def prev_vertex(self, i: int) -> int:
        return (i + 1) % 3 + 1

    def out_side(self, i: int) -> int:
        """Index of the side joining vertex ``i`` to the next vertex."""
        return self.prev_vertex(i)

    def out_length(self, i: int) -> float:
        return self.sides[self.out_side(i) - 1]

    def in_length(self, i: int) -> float:
        return self.sides[self.next_vertex(i) - 1]

    def out_coupling(self, i: int) -> float:
        return self.couplings[self.out_side(i) - 1]

    def out_beta(self, i: int) -> float:
        """Beta of the side crossed when stepping from vertex ``i``."""
        return self.betas[self.out_side(i) - 1]

    def vertex(self, i: int) -> Point:
        return self.vertices[i - 1]

    def bisector(self, i: int) -> Point:
        return self._bisectors[i - 1]

    def tan_alpha(self, i: int) -> float:
        return self.tan_half[i - 1]

    def sin_alpha(self, i: int) -> float:
        t = self.tan_half[i - 1]
        return t / math.sqrt(1.0 + t * t)

    @property
    def inradius(self) -> float:
        t1, t2, t3 = self.tangent_lengths
        return math.sqrt(t1 * t2 * t3 / self.p)


def triangle_from_sides(a1: Real, a2: Real, a3: Real) -> Triangle:
    """Build a :class:`Triangle` from its side lengths.

    The triangle inequality is checked exactly on the inputs (floats are
    compared through their exact binary value), with no tolerance.
    """
    exact = [_exact(a) for a in (a1, a2, a3)]
    for i, a in enumerate(exact, 1):
        if a <= 0:
            raise NonPositiveSide(f"side a{i}={float(a)!r} must be positive")
    total = sum(exact)
    for i, a in enumerate(exact, 1):
        if 2 * a >= total:
            raise TriangleInequalityViolated(
                f"side a{i}={float(a)!r} is not shorter than the sum of the other two"
            )

    a = tuple(float(x) for x in exact)
    p = float(total / 2)
    # incircle tangent lengths, formed from exact inputs to dodge cancellation
    T = tuple(float((total - 2 * x) / 2) for x in exact)
    tan_half = tuple(
        math.sqrt(T[(i + 1) % 3] * T[(i + 2) % 3] / (p * T[i])) for i in range(3)
    )
    half_angles = tuple(math.atan(t) for t in tan_half)
    # sin(beta) = sqrt(a/p), cos(beta) = sqrt(T/p)
    betas = tuple(math.atan2(math.sqrt(a[i]), math.sqrt(T[i])) for i in range(3))
    couplings = tuple(
        math.sqrt(tan_half[(k + 1) % 3] * tan_half[(k + 2) % 3]) for k in range(3)
    )

    a1f, a2f, a3f = a
    x3 = (a3f * a3f + a2f * a2f - a1f * a1f) / (2.0 * a3f)
    area = math.sqrt(p * T[0] * T[1] * T[2])
    verts = ((0.0, 0.0), (a3f, 0.0), (x3, 2.0 * area / a3f))

    bis = []
    for i in range(3):
        px, py = verts[i]
        nx, ny = _unit(verts[(i + 1) % 3][0] - px, verts[(i + 1) % 3][1] - py)
        qx, qy = _unit(verts[(i + 2) % 3][0] - px, verts[(i + 2) % 3][1] - py)
        bis.append(_unit(nx + qx, ny + qy))

    return Triangle(
        sides=a,
        p=p,
        tangent_lengths=T,
        tan_half=tan_half,
        half_angles=half_angles,
        betas=betas,
        couplings=couplings,
        vertices=verts,
        _bisectors=tuple(bis),
    )


def coupling_identity_residual(tri: Triangle, k: int) -> float:
    """``1 - tan(alpha_i) tan(alpha_j) - a_k / p`` for the two vertices i, j on side k."""
    i, j = (k % 3) + 1, ((k + 1) % 3) + 1
    return 1.0 - tri.tan_half[i - 1] * tri.tan_half[j - 1] - tri.sides[k - 1] / tri.p


def beta_inequality_margin(tri: Triangle) -> float:
    """Sum of the two smaller betas minus the largest; always positive."""
    b1, b2, b3 = sorted(tri.betas)
    return (b1 + b2) - b3
