"""Circle chains in convex n-gons.

Edge ``i`` joins vertex ``i`` to vertex ``i + 1`` (cyclically, 1-based). The
one-edge tangency relation is the same as for triangles, so stepping reuses
:func:`sixcircles.chain.next_u`; for n > 3 the couplings no longer satisfy
``1 - e**2 = s/p`` and no angle-coordinate reduction exists.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from . import chain
from .chain import AngleCircle, ChainRecord, Choice, Policy, SignCase
from .errors import NegativeRoot, NotConvex, OrbitTerminated, RadicandNegative
from .triangle import Point, Triangle


@dataclass(frozen=True)
class ConvexPolygon:
    vertices: tuple[Point, ...]
    edge_lengths: tuple[float, ...] = field(init=False)
    tan_half: tuple[float, ...] = field(init=False)
    half_angles: tuple[float, ...] = field(init=False)
    edge_couplings: tuple[float, ...] = field(init=False)
    _bisectors: tuple[Point, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        n = len(verts)
        if n < 3:
            raise NotConvex("a polygon needs at least 3 vertices")
        lengths, tans, bis = [], [], []
        for i in range(n):
            (px, py), (nx, ny), (qx, qy) = verts[i], verts[(i + 1) % n], verts[i - 1]
            ax, ay, bx, by = nx - px, ny - py, qx - px, qy - py
            la, lb = math.hypot(ax, ay), math.hypot(bx, by)
            cross = ax * by - ay * bx
            if cross <= 0:
                raise NotConvex(f"vertices must be strictly convex and counterclockwise (vertex {i + 1})")
            lengths.append(la)
            # tan of half the interior angle: sin(th) / (1 + cos(th))
            tans.append(cross / (la * lb + ax * bx + ay * by))
            wx, wy = ax / la + bx / lb, ay / la + by / lb
            w = math.hypot(wx, wy)
            bis.append((wx / w, wy / w))
        set_ = object.__setattr__
        set_(self, "vertices", verts)
        set_(self, "edge_lengths", tuple(lengths))
        set_(self, "tan_half", tuple(tans))
        set_(self, "half_angles", tuple(math.atan(t) for t in tans))
        set_(self, "edge_couplings", tuple(math.sqrt(tans[i] * tans[(i + 1) % n]) for i in range(n)))
        set_(self, "_bisectors", tuple(bis))

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def p(self) -> float:
        return 0.5 * sum(self.edge_lengths)

    def next_vertex(self, i: int) -> int:
        return i % self.n + 1

    def prev_vertex(self, i: int) -> int:
        return (i - 2) % self.n + 1

    def out_length(self, i: int) -> float:
        return self.edge_lengths[i - 1]

    def in_length(self, i: int) -> float:
        return self.edge_lengths[self.prev_vertex(i) - 1]

    def out_coupling(self, i: int) -> float:
        return self.edge_couplings[i - 1]

    def vertex(self, i: int) -> Point:
        return self.vertices[i - 1]

    def bisector(self, i: int) -> Point:
        return self._bisectors[i - 1]

    def tan_alpha(self, i: int) -> float:
        return self.tan_half[i - 1]

    def sin_alpha(self, i: int) -> float:
        t = self.tan_half[i - 1]
        return t / math.sqrt(1.0 + t * t)


def polygon_from_triangle(tri: Triangle) -> ConvexPolygon:
    return ConvexPolygon(tri.vertices)


def parallelogram(side1: float, side2: float, angle: float) -> ConvexPolygon:
    """Parallelogram with the given sides and interior angle (radians) at vertex 1."""
    c, s = math.cos(angle), math.sin(angle)
    return ConvexPolygon(((0.0, 0.0), (side1, 0.0), (side1 + side2 * c, side2 * s), (side2 * c, side2 * s)))


def regular_polygon(n: int, side: float = 1.0) -> ConvexPolygon:
    R = side / (2.0 * math.sin(math.pi / n))
    return ConvexPolygon(tuple(
        (R * math.cos(2 * math.pi * k / n - math.pi / 2), R * math.sin(2 * math.pi * k / n - math.pi / 2))
        for k in range(n)
    ))


def random_convex_polygon(n: int, rng: random.Random, jitter: float = 0.3) -> ConvexPolygon:
    """Random strictly convex n-gon: perturbed points on a circle, resampled until convex."""
    while True:
        angles = sorted(rng.uniform(0.0, 2.0 * math.pi) for _ in range(n))
        pts = tuple(
            ((1.0 + rng.uniform(-jitter, jitter)) * math.cos(t), (1.0 + rng.uniform(-jitter, jitter)) * math.sin(t))
            for t in angles
        )
        try:
            return ConvexPolygon(pts)
        except NotConvex:
            continue


def polygon_step(poly: ConvexPolygon, vertex: int, u: float, choice: Choice = Choice.SMALLER
                 ) -> tuple[float, SignCase]:
    return chain.next_u(poly, vertex, u, choice)


def polygon_chain(poly: ConvexPolygon, initial: AngleCircle, policy: Policy = Policy.smaller(),
                  max_steps: int = chain.DEFAULT_MAX_STEPS, tol: float = chain.CYCLE_TOL) -> ChainRecord:
    """Chain in a polygon; cycles are only reported at multiples of ``n`` steps."""
    return chain.run_chain(poly, initial, policy, max_steps, tol)


def divergence_rate(shape, u0: float, delta0: float = 1e-9, steps: int = 1000,
                    start_vertex: int = 1, choice: Choice = Choice.SMALLER) -> float:
    """Mean exponential separation rate of two nearby orbits in ``u``.

    The perturbed orbit is pulled back to distance ``delta0`` after every
    step (Benettin renormalization), so the result is the average of
    ``log(|du_k| / delta0)``.
    """
    u, w, v = u0, u0 + delta0, start_vertex
    total = 0.0
    for k in range(steps):
        try:
            u_next, _ = chain.next_u(shape, v, u, choice)
            w_next, _ = chain.next_u(shape, v, w, choice)
        except (RadicandNegative, NegativeRoot) as exc:
            raise OrbitTerminated(f"orbit ended after {k} steps: {exc}") from exc
        d = w_next - u_next
        total += math.log(max(abs(d), 1e-300) / delta0)
        u = u_next
        w = u_next + math.copysign(delta0, d) if u_next >= delta0 else u_next + delta0
        v = shape.next_vertex(v)
    return total / steps
