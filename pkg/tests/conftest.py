import math
import random
import sys

import pytest

from sixcircles.errors import TriangleInequalityViolated
from sixcircles.triangle import triangle_from_sides


def random_triangles(count, seed, lo=0.1, hi=10.0):
    """Sides uniform in [lo, hi], rejection-sampled for the triangle inequality."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        sides = [rng.uniform(lo, hi) for _ in range(3)]
        try:
            out.append(triangle_from_sides(*sides))
        except TriangleInequalityViolated:
            continue
    return out


@pytest.fixture(scope="session")
def tri345():
    return triangle_from_sides(3, 4, 5)


@pytest.fixture(scope="session")
def equilateral():
    return triangle_from_sides(1, 1, 1)


@pytest.fixture(scope="session")
def sample_triangles():
    return random_triangles(1000, seed=20240101)


PHI0_345 = 0.3
U0_345 = math.sqrt(6.0) * math.sin(PHI0_345)
MALFATTI_EQ = (math.sqrt(3.0) - 1.0) / 4.0


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
