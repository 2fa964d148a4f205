"""Long pre-period family and the random-choice Monte Carlo histogram."""

from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .chain import CycleDetector, Choice, next_u
from .errors import NegativeRoot, RadicandNegative
from .pldynamics import OrbitReport, PLMapParams, orbit, to_fraction
from .triangle import Triangle, triangle_from_sides

MC_MAX_STEPS = 1000


def long_preperiod_family(eps) -> OrbitReport:
    """Exact orbit of ``x0 = eps`` for ``a = 1, b = 2 - eps``."""
    eps = to_fraction(eps)
    if not 0 < eps < Fraction(1, 2):
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    return orbit(PLMapParams.exact(1, 2 - eps), eps, exact=True)


@dataclass
class Histogram:
    bins: dict[int, int]
    runs: int
    failures: int
    seed: int
    policy: str = "random"
    sides: tuple[float, float, float] = (3.0, 4.0, 5.0)
    periods: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {
            "bins": {str(k): v for k, v in sorted(self.bins.items())},
            "runs": self.runs,
            "failures": self.failures,
            "seed": self.seed,
            "policy": self.policy,
            "sides": list(self.sides),
            "periods": {str(k): v for k, v in sorted(self.periods.items())},
        }
        return json.dumps(doc, indent=2) + "\n"

    def to_csv(self) -> str:
        rows = ["pre_period,count"]
        rows += [f"{k},{v}" for k, v in sorted(self.bins.items())]
        return "\n".join(rows) + "\n"


def run_rng(seed: int, run: int) -> np.random.Generator:
    """Generator for one run, keyed by (master seed, run index) only."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(run,))))


def _single_run(tri: Triangle, seed: int, run: int, policy: str, max_steps: int,
                start_vertex: int) -> Optional[tuple[int, int]]:
    rng = run_rng(seed, run)
    phi0 = rng.uniform(0.0, min(tri.betas))
    coins = rng.integers(0, 2, size=max_steps)
    u, v = math.sqrt(tri.p) * math.sin(phi0), start_vertex
    det = CycleDetector()
    det.add(1, v, u)
    for n in range(2, max_steps + 1):
        if policy == "random":
            choice = Choice.LARGER if coins[n - 2] else Choice.SMALLER
        else:
            choice = Choice(policy)
        try:
            u, _ = next_u(tri, v, u, choice)
        except (RadicandNegative, NegativeRoot):
            return None
        if u == 0.0:
            return None
        v = tri.next_vertex(v)
        hit = det.add(n, v, u)
        if hit is not None:
            return hit
    return None


def _run_block(args) -> list[Optional[tuple[int, int]]]:
    sides, seed, lo, hi, policy, max_steps, start_vertex = args
    tri = triangle_from_sides(*sides)
    return [_single_run(tri, seed, k, policy, max_steps, start_vertex) for k in range(lo, hi)]


def monte_carlo(tri: Triangle, runs: int = 3000, seed: int = 0, policy: str = "random",
                max_steps: int = MC_MAX_STEPS, workers: int = 1, start_vertex: int = 1) -> Histogram:
    """Histogram of pre-periods over ``runs`` chains with random initial circles.

    Each run draws ``phi0`` uniformly in ``(0, min beta)`` and, for the random
    policy, a fair coin per step; chains that never revisit a state within
    ``max_steps`` circles count as failures. The result depends only on the
    arguments, not on ``workers``.
    """
    if policy not in ("random", "smaller", "larger"):
        raise ValueError(f"unknown policy {policy!r}")
    if workers <= 1:
        results = _run_block((tri.sides, seed, 0, runs, policy, max_steps, start_vertex))
    else:
        size = math.ceil(runs / workers)
        blocks = [(tri.sides, seed, lo, min(lo + size, runs), policy, max_steps, start_vertex)
                  for lo in range(0, runs, size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for block in pool.map(_run_block, blocks) for r in block]
    bins: Counter = Counter()
    periods: Counter = Counter()
    for hit in results:
        if hit is not None:
            bins[hit[0]] += 1
            periods[hit[1]] += 1
    return Histogram(
        bins=dict(sorted(bins.items())),
        runs=runs,
        failures=sum(hit is None for hit in results),
        seed=seed,
        policy=policy,
        sides=tri.sides,
        periods=dict(sorted(periods.items())),
    )
