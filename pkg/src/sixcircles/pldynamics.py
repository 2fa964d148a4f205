"""Angle coordinates and the piecewise-linear map they reduce to.

In the coordinate ``phi = arcsin(u / sqrt(p))`` one smaller-circle step is
``phi -> |phi - beta|`` with ``beta`` the beta-angle of the crossed side. Three
steps compose to ``f(x) = |||x - 1| - a| - b|`` once the betas are sorted and
scaled so the smallest is 1.

Sorting the betas can reverse the cyclic order a chain visits them in. For a
triangle whose chain meets the betas as (smallest, largest, middle) the
composite is ``|||x - 1| - b| - a|`` instead; every function taking
``reversed`` handles that orientation. Its periodic window is ``[0, 1 + a - b]``.

All map functions work on floats or on :class:`fractions.Fraction` values; the
latter give exact orbits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import DomainExceeded, InvalidParams, MaxIterExceeded
from .triangle import Triangle

Number = Union[float, Fraction]
FLOAT_TOL = 1e-9


def to_fraction(x) -> Fraction:
    """Exact rational for ``x``; floats are read through their shortest repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def phi_from_u(u: float, p: float) -> float:
    if u < 0 or u * u > p * (1 + 1e-12):
        raise DomainExceeded(f"u={u!r} outside [0, sqrt(p)] for p={p!r}")
    return math.asin(min(1.0, u / math.sqrt(p)))


def u_from_phi(phi: float, p: float) -> float:
    return math.sqrt(p) * math.sin(phi)


def step_map(phi: float, beta: float) -> float:
    return abs(phi - beta)


def beta_cycle(tri: Triangle, start_vertex: int) -> tuple[float, float, float]:
    """Betas in the order a chain starting at ``start_vertex`` crosses them."""
    out, v = [], start_vertex
    for _ in range(3):
        out.append(tri.out_beta(v))
        v = tri.next_vertex(v)
    return tuple(out)


def composite(tri: Triangle, start_vertex: int, phi: float) -> float:
    """Three smaller-circle steps in angle coordinates, unscaled."""
    for beta in beta_cycle(tri, start_vertex):
        phi = abs(phi - beta)
    return phi


def periodic_window(tri: Triangle, start_vertex: int) -> tuple[float, float]:
    """Unscaled interval of ``phi`` whose chains close up after six circles.

    On it every tangency lies on a side and the composite is
    ``phi -> c1 - c2 + c3 - phi``.
    """
    c1, c2, c3 = beta_cycle(tri, start_vertex)
    return max(0.0, c1 - c2, c3 - c2), min(c1, c3, c1 - c2 + c3)


def malfatti_phis(tri: Triangle) -> tuple[float, float, float]:
    """Angle coordinate of each circle of the 3-periodic (Malfatti) chain."""
    b = tri.betas
    return tuple((sum(b) - 2 * b[i]) / 2 for i in range(3))


def is_reversed(tri: Triangle) -> bool:
    """True when chains meet the sorted betas as (smallest, largest, middle)."""
    order = sorted(range(3), key=lambda k: (tri.betas[k], k))
    v = next(v for v in (1, 2, 3) if tri.out_side(v) == order[0] + 1)
    return tri.out_side(tri.next_vertex(v)) != order[1] + 1


def canonical_start(tri: Triangle) -> int:
    """Vertex whose outgoing side has the smallest beta."""
    order = sorted(range(3), key=lambda k: (tri.betas[k], k))
    return next(v for v in (1, 2, 3) if tri.out_side(v) == order[0] + 1)


@dataclass(frozen=True)
class PLMapParams:
    """Scaled parameters of ``f(x) = |||x - 1| - a| - b|`` with ``1 <= a <= b < a + 1``."""

    a: Number
    b: Number
    reversed: bool = False

    def __post_init__(self):
        if not (1 <= self.a <= self.b < self.a + 1):
            raise InvalidParams(f"need 1 <= a <= b < a + 1, got a={self.a!r}, b={self.b!r}")

    @classmethod
    def exact(cls, a, b, reversed: bool = False) -> "PLMapParams":
        return cls(to_fraction(a), to_fraction(b), reversed)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.a, Fraction) and isinstance(self.b, Fraction)

    def as_exact(self) -> "PLMapParams":
        return PLMapParams.exact(self.a, self.b, self.reversed)


def composite_params(tri: Triangle) -> PLMapParams:
    b1, b2, b3 = sorted(tri.betas)
    return PLMapParams(b2 / b1, b3 / b1, is_reversed(tri))


def f_eval(params: PLMapParams, x: Number) -> Number:
    a, b = params.a, params.b
    if params.reversed:
        a, b = b, a
    return abs(abs(abs(x - 1) - a) - b)


@dataclass(frozen=True)
class Interval:
    lo: Number
    hi: Number

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    @property
    def length(self) -> Number:
        return self.hi - self.lo


def intervals(params: PLMapParams) -> tuple[Interval, Interval, Interval]:
    """(I1, I2, I3) where I2 is the segment of 2-periodic points."""
    a, b = params.a, params.b
    if params.reversed:
        k = 1 + a - b
        return Interval(0 * k, 0 * k), Interval(0 * k, k), Interval(k, b)
    return Interval(0 * a, b - a), Interval(b - a, 1 + 0 * a), Interval(1 + 0 * a, b)


def fixed_point(params: PLMapParams) -> Number:
    """Unique fixed point of ``f``; the midpoint of the periodic window."""
    if params.reversed:
        return (1 + params.a - params.b) / 2
    return (1 + params.b - params.a) / 2


def classify(params: PLMapParams, x: Number, tol: Number = 0) -> str:
    """Interval label of ``x``. The periodic window wins at its endpoints."""
    i1, i2, i3 = intervals(params)
    if i2.lo - tol <= x <= i2.hi + tol:
        return "I2"
    if x < i2.lo:
        return "I1"
    return "I3" if x <= i3.hi else "AboveB"


@dataclass
class OrbitReport:
    x0: Number
    trajectory: list
    pre_period: int
    period: int
    cycle: tuple
    interval_trace: list[str] = field(default_factory=list)


def orbit(params: PLMapParams, x0, exact: bool = False, tol: float = FLOAT_TOL,
          max_iter: int = 100_000, keep: Optional[int] = None) -> OrbitReport:
    """Iterate ``f`` from ``x0`` until it enters the periodic window.

    With ``exact=True`` parameters and start are converted to rationals and
    no tolerance is used. ``keep`` extends the stored trajectory to at least
    that many iterates past ``x0``.
    """
    if exact:
        params, x, tol = params.as_exact(), to_fraction(x0), 0
    else:
        params = PLMapParams(float(params.a), float(params.b), params.reversed)
        x = float(x0)
    if x < 0:
        raise DomainExceeded(f"x0 must be non-negative, got {x0!r}")
    window = intervals(params)[1]
    traj = [x]
    n = 0
    while not (window.lo - tol <= x <= window.hi + tol):
        if n >= max_iter:
            raise MaxIterExceeded(f"orbit of {x0!r} did not reach the periodic window in {max_iter} steps")
        x = f_eval(params, x)
        traj.append(x)
        n += 1
    mid = fixed_point(params)
    if abs(x - mid) <= tol:
        period, cycle = 1, (x,)
    else:
        period, cycle = 2, (x, f_eval(params, x))
    target = max(n + period, keep or 0)
    while len(traj) <= target:
        traj.append(f_eval(params, traj[-1]))
    return OrbitReport(
        x0=traj[0],
        trajectory=traj,
        pre_period=n,
        period=period,
        cycle=cycle,
        interval_trace=[classify(params, v, tol) for v in traj],
    )


def preperiod_bound(params: PLMapParams, x0) -> int:
    """Upper bound on the pre-period of ``x0`` from the interval structure.

    Points above ``b`` fall by ``a + b + 1`` per step until they land in
    ``[0, b]``; inside, the window-side shift of ``1 + a - b`` per step (and,
    reversed, ``1 + b - a``) bounds the remaining count.
    """
    a, b = params.a, params.b
    total = a + b + 1
    descent = max(0, math.ceil((x0 - b) / total)) if x0 > b else 0
    if params.reversed:
        return descent + math.ceil((1 + b) / (1 + b - a)) + math.ceil((b - a) / (1 + a - b)) + 3
    return descent + math.ceil((b - 1) / (1 + a - b)) + 2


def chain_preperiod_bound(tri: Triangle, start_vertex: int, phi0: float) -> int:
    """Bound on a smaller-choice chain's pre-period, counted in circles."""
    params = composite_params(tri)
    beta_min = min(tri.betas)
    v, phi, offset = start_vertex, phi0, 0
    canon = canonical_start(tri)
    while v != canon:
        phi = abs(phi - tri.out_beta(v))
        v = tri.next_vertex(v)
        offset += 1
    return offset + 3 * preperiod_bound(params, phi / beta_min)
