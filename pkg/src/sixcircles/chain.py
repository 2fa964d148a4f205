"""Chains of circles inscribed in the angles of a triangle (or convex polygon).

A circle inscribed in the angle at vertex ``i`` is described by its tangent
length ``t`` (distance from the vertex to either tangency point) or by
``u = sqrt(t)``. Stepping to the next vertex solves

    u**2 +/- 2*e*u*u_next + u_next**2 = s

where ``s`` is the length of the shared edge and ``e`` its coupling. The
functions here accept any shape exposing the vertex-walking helpers of
:class:`~sixcircles.triangle.Triangle` (``ConvexPolygon`` does too).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import DegenerateCircle, NegativeRoot, RadicandNegative
from .triangle import Point, Triangle

# relative slack for values that are zero up to rounding
_SNAP = 1e-12
DEFAULT_MAX_STEPS = 10_000
CYCLE_TOL = 1e-9


class Choice(enum.Enum):
    SMALLER = "smaller"
    LARGER = "larger"


class SignCase(enum.Enum):
    PLUS_ON_SIDE = "plus"
    MINUS_ON_EXTENSION = "minus"


class Tangency(enum.Enum):
    ON_SIDE = "side"
    ON_EXTENSION = "extension"


class Termination(enum.Enum):
    MAX_STEPS = "max_steps"
    CYCLE_DETECTED = "cycle_detected"
    NOT_CONSTRUCTIBLE = "not_constructible"
    DEGENERATE_CIRCLE = "degenerate_circle"


class Constructibility(enum.Enum):
    OK = "ok"
    NEXT_TOUCHES_OPPOSITE_SIDE = "next_touches_opposite_side"
    NOT_CONSTRUCTIBLE = "not_constructible"


@dataclass(frozen=True)
class AngleCircle:
    """A circle inscribed in the angle at ``vertex``.

    ``tangency`` and ``touch_points`` are ordered (outgoing edge, incoming
    edge): the outgoing edge joins ``vertex`` to the next vertex of the chain.
    """

    vertex: int
    radius: float
    t: float
    u: float
    center: Point
    tangency: tuple[Tangency, Tangency]
    touch_points: tuple[Point, Point]

    @property
    def degenerate(self) -> bool:
        return self.radius == 0.0

    def on_some_side(self) -> bool:
        return Tangency.ON_SIDE in self.tangency


def _edge_unit(shape, i: int, j: int) -> Point:
    (px, py), (qx, qy) = shape.vertex(i), shape.vertex(j)
    d = math.hypot(qx - px, qy - py)
    return (qx - px) / d, (qy - py) / d


def circle_from_u(shape, vertex: int, u: float) -> AngleCircle:
    if u < 0:
        raise ValueError(f"u must be non-negative, got {u!r}")
    t = u * u
    tan_a = shape.tan_alpha(vertex)
    r = t * tan_a
    # distance from vertex to center: r / sin(alpha) = t / cos(alpha)
    d = t * math.sqrt(1.0 + tan_a * tan_a)
    (px, py), (wx, wy) = shape.vertex(vertex), shape.bisector(vertex)
    ox, oy = _edge_unit(shape, vertex, shape.next_vertex(vertex))
    ix, iy = _edge_unit(shape, vertex, shape.prev_vertex(vertex))
    return AngleCircle(
        vertex=vertex,
        radius=r,
        t=t,
        u=u,
        center=(px + d * wx, py + d * wy),
        tangency=(
            Tangency.ON_SIDE if t <= shape.out_length(vertex) else Tangency.ON_EXTENSION,
            Tangency.ON_SIDE if t <= shape.in_length(vertex) else Tangency.ON_EXTENSION,
        ),
        touch_points=((px + t * ox, py + t * oy), (px + t * ix, py + t * iy)),
    )


def circle_from_radius(shape, vertex: int, r: float) -> AngleCircle:
    """Circle of radius ``r`` inscribed in the angle at ``vertex``."""
    if r < 0:
        raise ValueError(f"radius must be non-negative, got {r!r}")
    circle = circle_from_u(shape, vertex, math.sqrt(r / shape.tan_alpha(vertex)))
    # keep the caller's radius verbatim rather than the u**2*tan round trip
    return AngleCircle(
        circle.vertex, float(r), circle.t, circle.u, circle.center,
        circle.tangency, circle.touch_points,
    )


def tangent_segment_length(r1: float, r2: float) -> float:
    """Length of the common external tangent of two externally tangent circles."""
    return 2.0 * math.sqrt(r1 * r2)


def next_u(shape, from_vertex: int, u: float, choice: Choice = Choice.SMALLER
           ) -> tuple[float, SignCase]:
    """Solve for the next circle's ``u`` and report which tangency equation holds.

    The smaller circle satisfies the ``+`` equation while the current tangency
    point on the shared edge lies on the segment (``u**2 <= s``), the ``-``
    equation otherwise. The larger circle always satisfies the ``-`` equation.
    """
    if u < 0:
        raise ValueError(f"u must be non-negative, got {u!r}")
    s = shape.out_length(from_vertex)
    e = shape.out_coupling(from_vertex)
    uu = u * u
    rad = s - (1.0 - e * e) * uu
    if rad < 0:
        if rad < -_SNAP * s:
            raise RadicandNegative(
                f"no circle at vertex {shape.next_vertex(from_vertex)} is tangent "
                f"to the circle at vertex {from_vertex} (radicand {rad:.3e})"
            )
        rad = 0.0
    root = math.sqrt(rad)
    if choice is Choice.LARGER:
        return e * u + root, SignCase.MINUS_ON_EXTENSION
    denom = root + e * u
    if denom == 0.0:
        raise NegativeRoot(f"tangency equation has no admissible root at u={u!r}")
    # rationalized forms of -e*u + root and e*u - root; no cancellation
    if uu <= s:
        nxt, case = (s - uu) / denom, SignCase.PLUS_ON_SIDE
    else:
        nxt, case = (uu - s) / denom, SignCase.MINUS_ON_EXTENSION
    if nxt < 0:
        raise NegativeRoot(f"selected root {nxt!r} is negative")
    if nxt <= _SNAP * math.sqrt(s):
        nxt = 0.0
    return nxt, case


def previous_u_larger(shape, to_vertex: int, u_next: float, case: SignCase) -> float:
    """Invert a smaller-choice step: recover the predecessor's ``u``.

    Going backwards the larger of the two candidate circles is taken, which
    is what makes the forward map non-injective.
    """
    from_vertex = shape.prev_vertex(to_vertex)
    s = shape.out_length(from_vertex)
    e = shape.out_coupling(from_vertex)
    root = math.sqrt(max(s - (1.0 - e * e) * u_next * u_next, 0.0))
    if case is SignCase.PLUS_ON_SIDE:
        return -e * u_next + root
    return e * u_next + root


def _advance(shape, current: AngleCircle, choice: Choice) -> tuple[AngleCircle, SignCase]:
    if current.degenerate:
        raise DegenerateCircle(f"cannot continue from a point circle at vertex {current.vertex}")
    u, case = next_u(shape, current.vertex, current.u, choice)
    return circle_from_u(shape, shape.next_vertex(current.vertex), u), case


def step(shape, current: AngleCircle, choice: Choice = Choice.SMALLER) -> AngleCircle:
    """Next circle of the chain, inscribed in the following angle."""
    if shape.n == 3 and constructibility_check(shape, current) is Constructibility.NOT_CONSTRUCTIBLE:
        raise RadicandNegative(
            f"circle at vertex {current.vertex} misses the opposite side; no next circle"
        )
    return _advance(shape, current, choice)[0]


def tangency_equation_residual(shape, c1: AngleCircle, c2: AngleCircle, case: SignCase) -> float:
    """``r1 cot a1 +/- 2 sqrt(r1 r2) + r2 cot a2 - s`` for consecutive circles."""
    sign = 1.0 if case is SignCase.PLUS_ON_SIDE else -1.0
    lhs = (c1.radius / shape.tan_alpha(c1.vertex)
           + sign * tangent_segment_length(c1.radius, c2.radius)
           + c2.radius / shape.tan_alpha(c2.vertex))
    return lhs - shape.out_length(c1.vertex)


def _segment_distance(pt: Point, a: Point, b: Point) -> float:
    (x, y), (ax, ay), (bx, by) = pt, a, b
    dx, dy = bx - ax, by - ay
    h = ((x - ax) * dx + (y - ay) * dy) / (dx * dx + dy * dy)
    h = min(1.0, max(0.0, h))
    return math.hypot(x - ax - h * dx, y - ay - h * dy)


def constructibility_check(tri: Triangle, circle: AngleCircle) -> Constructibility:
    """Whether a circle touching both extensions still admits a next circle.

    Such a circle is only usable if it reaches the opposite side, in which
    case the next circle touches that side.
    """
    if circle.on_some_side():
        return Constructibility.OK
    i = circle.vertex
    dist = _segment_distance(circle.center, tri.vertex(tri.next_vertex(i)),
                             tri.vertex(tri.prev_vertex(i)))
    if dist > circle.radius * (1.0 + _SNAP):
        return Constructibility.NOT_CONSTRUCTIBLE
    return Constructibility.NEXT_TOUCHES_OPPOSITE_SIDE


# -- policies ----------------------------------------------------------------

_RANDOM_CHUNK = 1024


@dataclass(frozen=True)
class Policy:
    """How to pick between the two tangent circles at each step.

    ``scripted`` plays its choices in order and then falls back to the
    smaller circle. ``random`` tosses a fair coin from a PCG64 stream keyed by
    ``(seed, stream)``; independent streams never interact.
    """

    kind: str
    seed: Optional[int] = None
    stream: Optional[int] = None
    script: tuple[Choice, ...] = ()

    @classmethod
    def smaller(cls) -> "Policy":
        return cls("smaller")

    @classmethod
    def larger(cls) -> "Policy":
        return cls("larger")

    @classmethod
    def random(cls, seed: int, stream: Optional[int] = None) -> "Policy":
        return cls("random", seed=seed, stream=stream)

    @classmethod
    def scripted(cls, choices: Iterable[Choice | str]) -> "Policy":
        return cls("scripted", script=tuple(Choice(c) if isinstance(c, str) else c for c in choices))

    def chooser(self) -> Callable[[], Choice]:
        if self.kind == "smaller":
            return lambda: Choice.SMALLER
        if self.kind == "larger":
            return lambda: Choice.LARGER
        if self.kind == "scripted":
            it = iter(self.script)
            return lambda: next(it, Choice.SMALLER)
        if self.kind == "random":
            return _coin(self.seed, self.stream)
        raise ValueError(f"unknown policy kind {self.kind!r}")


def _coin(seed: Optional[int], stream: Optional[int]) -> Callable[[], Choice]:
    key = () if stream is None else (stream,)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=key)))
    bits: list[int] = []

    def draw() -> Choice:
        if not bits:
            bits.extend(rng.integers(0, 2, size=_RANDOM_CHUNK).tolist()[::-1])
        return Choice.LARGER if bits.pop() else Choice.SMALLER

    return draw


# -- cycle detection ---------------------------------------------------------


class CycleDetector:
    """Online first-revisit detection in (vertex, u) space.

    States are bucketed on ``round(u / tol)`` so each insertion is O(1).
    ``add`` returns ``(pre_period, period)`` the first time a state lies
    within ``tol`` of an earlier state at the same vertex.
    """

    def __init__(self, tol: float = CYCLE_TOL):
        self.tol = tol
        self._buckets: dict[tuple[int, int], list[tuple[int, float]]] = {}

    def add(self, index: int, vertex: int, u: float) -> Optional[tuple[int, int]]:
        key = round(u / self.tol)
        best = None
        for k in (key - 1, key, key + 1):
            for j, v in self._buckets.get((vertex, k), ()):
                if abs(v - u) <= self.tol and (best is None or j < best):
                    best = j
        self._buckets.setdefault((vertex, key), []).append((index, u))
        if best is None:
            return None
        return best - 1, index - best


def detect_periodicity(vertices: Sequence[int], us: Sequence[float], tol: float = CYCLE_TOL
                       ) -> Optional[tuple[int, int]]:
    """Pre-period and period of a recorded chain, or None if it never repeats.

    Indices are 1-based chain positions: the result ``(m, q)`` means circle
    ``m + 1 + q`` coincides with circle ``m + 1``.
    """
    det = CycleDetector(tol)
    for n, (v, u) in enumerate(zip(vertices, us), 1):
        hit = det.add(n, v, u)
        if hit is not None:
            return hit
    return None


# -- chains ------------------------------------------------------------------


class ChainStep(NamedTuple):
    index: int
    circle: AngleCircle
    choice: Optional[Choice]
    sign_case: Optional[SignCase]


@dataclass
class ChainRecord:
    """Trajectory of one chain. ``steps[0]`` is the initial circle."""

    shape: object
    steps: list[ChainStep] = field(default_factory=list)
    termination: Termination = Termination.MAX_STEPS
    pre_period: Optional[int] = None
    period: Optional[int] = None
    message: str = ""

    @property
    def circles(self) -> list[AngleCircle]:
        return [s.circle for s in self.steps]

    @property
    def us(self) -> list[float]:
        return [s.circle.u for s in self.steps]

    @property
    def vertices(self) -> list[int]:
        return [s.circle.vertex for s in self.steps]

    def phis(self) -> list[Optional[float]]:
        """Angle coordinate ``arcsin(u / sqrt(p))`` per circle (triangles only)."""
        root_p = math.sqrt(self.shape.p)
        return [math.asin(u / root_p) if u <= root_p else None for u in self.us]


def run_chain(shape, initial: AngleCircle, policy: Policy = Policy.smaller(),
              max_steps: int = DEFAULT_MAX_STEPS, tol: float = CYCLE_TOL,
              stop_on_cycle: bool = True) -> ChainRecord:
    """Build a chain of at most ``max_steps`` circles starting from ``initial``.

    Failures are reported through ``termination`` rather than raised.
    """
    rec = ChainRecord(shape, [ChainStep(1, initial, None, None)])
    det = CycleDetector(tol)
    det.add(1, initial.vertex, initial.u)
    choose = policy.chooser()
    is_triangle = shape.n == 3

    def blocked(c: AngleCircle) -> bool:
        return is_triangle and constructibility_check(shape, c) is Constructibility.NOT_CONSTRUCTIBLE

    if initial.degenerate:
        rec.termination = Termination.DEGENERATE_CIRCLE
        return rec
    if blocked(initial):
        rec.termination = Termination.NOT_CONSTRUCTIBLE
        rec.message = "initial circle does not reach the opposite side"
        return rec

    current = initial
    for index in range(2, max_steps + 1):
        choice = choose()
        try:
            current, case = _advance(shape, current, choice)
        except (RadicandNegative, NegativeRoot) as exc:
            rec.termination = Termination.NOT_CONSTRUCTIBLE
            rec.message = str(exc)
            return rec
        rec.steps.append(ChainStep(index, current, choice, case))
        if current.degenerate:
            rec.termination = Termination.DEGENERATE_CIRCLE
            return rec
        if rec.period is None:
            hit = det.add(index, current.vertex, current.u)
            if hit is not None:
                rec.pre_period, rec.period = hit
                rec.termination = Termination.CYCLE_DETECTED
                if stop_on_cycle:
                    return rec
        if blocked(current):
            rec.termination = Termination.NOT_CONSTRUCTIBLE
            rec.message = f"circle {index} does not reach the opposite side"
            return rec
    return rec
