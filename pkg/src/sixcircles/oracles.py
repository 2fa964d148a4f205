"""Independent reference solvers used as ground truth by the tests.

None of these touch the closed-form root formulas or the angle-coordinate
reduction: tangency is solved in Cartesian coordinates by bisection, the
piecewise-linear orbit is re-implemented over rationals, and the Malfatti
radii come from a fixed-point solve of the Cartesian three-step map.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .chain import AngleCircle, Choice, circle_from_radius
from .errors import MaxIterExceeded, NoConvergence, NoRoot
from .pldynamics import OrbitReport
from .triangle import Triangle

_BISECT_ITERS = 200


def _center(shape, vertex: int, r: float) -> tuple[float, float]:
    (px, py), (wx, wy) = shape.vertex(vertex), shape.bisector(vertex)
    d = r / shape.sin_alpha(vertex)
    return px + d * wx, py + d * wy


def _bisect(g, lo: float, hi: float) -> float:
    glo = g(lo)
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        gm = g(mid)
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def brute_force_next_circle(shape, from_circle: AngleCircle, choice: Choice = Choice.SMALLER) -> float:
    """Radius of the next circle, found by sliding its center along the bisector.

    ``g(r) = |center(r) - c| - (r + r_from)`` is convex in ``r``; its two
    zeros are the two externally tangent circles.
    """
    j = shape.next_vertex(from_circle.vertex)
    cx, cy = from_circle.center
    r0 = from_circle.radius
    (wx, wy) = shape.bisector(j)
    inv_sin = 1.0 / shape.sin_alpha(j)

    def g(r):
        x, y = _center(shape, j, r)
        return math.hypot(x - cx, y - cy) - r - r0

    def dg(r):
        x, y = _center(shape, j, r)
        d = math.hypot(x - cx, y - cy)
        if d == 0.0:
            return -1.0
        return ((x - cx) * wx + (y - cy) * wy) * inv_sin / d - 1.0

    hi = max(getattr(shape, "p", 1.0), r0, 1.0)
    while dg(hi) <= 0:
        hi *= 2.0
        if hi > 1e12:
            raise NoRoot("tangency function never turns upward")
    r_min = 0.0 if dg(0.0) >= 0 else _bisect(dg, 0.0, hi)
    if g(r_min) > 0:
        raise NoRoot(f"no circle at vertex {j} touches the circle at vertex {from_circle.vertex}")
    if choice is Choice.SMALLER:
        if g(0.0) <= 0:
            return 0.0
        return _bisect(g, 0.0, r_min)
    top = max(2.0 * r_min, 1.0)
    while g(top) <= 0:
        top *= 2.0
    return _bisect(g, r_min, top)


def _f(a: Fraction, b: Fraction, x: Fraction) -> Fraction:
    return abs(abs(abs(x - 1) - a) - b)


def exact_rational_orbit(a, b, x0, max_iter: int = 1_000_000) -> OrbitReport:
    """Exact orbit of ``|||x - 1| - a| - b|`` until it lands in ``[b - a, 1]``."""
    a, b, x = Fraction(a), Fraction(b), Fraction(x0)
    lo, hi = b - a, Fraction(1)
    traj = [x]
    n = 0
    while not (lo <= x <= hi):
        if n >= max_iter:
            raise MaxIterExceeded(f"no landing within {max_iter} iterates")
        x = _f(a, b, x)
        traj.append(x)
        n += 1
    y = _f(a, b, x)
    traj.append(y)
    if y == x:
        cycle, period = (x,), 1
    else:
        cycle, period = (x, y), 2
        traj.append(_f(a, b, y))
    labels = []
    for v in traj:
        if lo <= v <= hi:
            labels.append("I2")
        elif v < lo:
            labels.append("I1")
        else:
            labels.append("I3" if v <= b else "AboveB")
    return OrbitReport(traj[0], traj, n, period, cycle, labels)


def _three_steps(tri: Triangle, r: float) -> float:
    c = circle_from_radius(tri, 1, r)
    for _ in range(3):
        nxt = brute_force_next_circle(tri, c, Choice.SMALLER)
        c = circle_from_radius(tri, tri.next_vertex(c.vertex), nxt)
    return c.radius


def brute_force_malfatti(tri: Triangle, tol: float = 1e-15, max_iter: int = 200
                         ) -> tuple[float, float, float]:
    """Radii of three pairwise tangent circles, one in each angle.

    Plain iteration of the three-step map does not converge (on the relevant
    range it is an involution), so the fixed point of ``r -> H(r)`` is found
    by bisection on ``H(r) - r``, which is positive at ``r = 0`` and negative
    once the tangent length approaches the semiperimeter.
    """
    lo = 0.0
    # u**2 = p*sin(phi)**2 with phi halfway between the largest beta and pi/2
    phi_hi = 0.5 * (max(tri.betas) + 0.5 * math.pi)
    hi = tri.p * math.sin(phi_hi) ** 2 * tri.tan_alpha(1)
    if _three_steps(tri, hi) - hi >= 0:
        raise NoConvergence("fixed-point residual does not change sign")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol * max(hi, 1.0):
            break
        if _three_steps(tri, mid) - mid > 0:
            lo = mid
        else:
            hi = mid
    else:
        raise NoConvergence("bisection cap reached")
    r1 = 0.5 * (lo + hi)
    c1 = circle_from_radius(tri, 1, r1)
    r2 = brute_force_next_circle(tri, c1, Choice.SMALLER)
    r3 = brute_force_next_circle(tri, circle_from_radius(tri, 2, r2), Choice.SMALLER)
    return r1, r2, r3
