"""Versioned JSON scenario files.

Schema (version 1)::

    {
      "version": 1,
      "shape":   {"sides": [a1, a2, a3]}  or  {"vertices": [[x, y], ...]},
      "initial": {"vertex": 1, "phi0": 0.3}   (or "r0" / "u0" instead of "phi0"),
      "policy":  {"kind": "smaller" | "larger" | "random" | "scripted",
                  "seed": 0, "choices": ["smaller", "larger", ...]},
      "max_steps": 10000,
      "outputs": {"csv": "chain.csv", "json": "chain.json", "svg": "chain.svg"}
    }

``seed`` is only kept for the random policy and ``choices`` only for the
scripted one. Angles are radians.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .chain import AngleCircle, Choice, DEFAULT_MAX_STEPS, Policy, circle_from_radius, circle_from_u
from .errors import ScenarioError
from .polygon import ConvexPolygon
from .triangle import triangle_from_sides

VERSION = 1
INITIAL_KINDS = ("phi0", "r0", "u0")
POLICY_KINDS = ("smaller", "larger", "random", "scripted")


@dataclass(frozen=True)
class Scenario:
    sides: Optional[tuple[float, ...]] = None
    vertices: Optional[tuple[tuple[float, float], ...]] = None
    start_vertex: int = 1
    initial_kind: str = "phi0"
    initial_value: float = 0.0
    policy: str = "smaller"
    seed: Optional[int] = None
    choices: tuple[str, ...] = ()
    max_steps: int = DEFAULT_MAX_STEPS
    outputs: dict = field(default_factory=dict, hash=False)

    def __post_init__(self):
        if (self.sides is None) == (self.vertices is None):
            raise ScenarioError("exactly one of 'sides' or 'vertices' is required")
        if self.initial_kind not in INITIAL_KINDS:
            raise ScenarioError(f"initial condition must be one of {INITIAL_KINDS}")
        if self.policy not in POLICY_KINDS:
            raise ScenarioError(f"policy must be one of {POLICY_KINDS}, got {self.policy!r}")
        if self.policy == "random" and self.seed is None:
            raise ScenarioError("the random policy needs a seed")
        if self.initial_kind == "phi0" and self.vertices is not None:
            raise ScenarioError("phi0 is only defined for triangles; use r0 or u0")
        for c in self.choices:
            if c not in (Choice.SMALLER.value, Choice.LARGER.value):
                raise ScenarioError(f"unknown choice {c!r} in scripted policy")

    def shape(self):
        if self.sides is not None:
            if len(self.sides) != 3:
                raise ScenarioError("'sides' needs exactly three lengths")
            return triangle_from_sides(*self.sides)
        return ConvexPolygon(self.vertices)

    def initial_circle(self, shape) -> AngleCircle:
        if not 1 <= self.start_vertex <= shape.n:
            raise ScenarioError(f"start vertex must be in 1..{shape.n}")
        if self.initial_kind == "r0":
            return circle_from_radius(shape, self.start_vertex, self.initial_value)
        if self.initial_kind == "u0":
            return circle_from_u(shape, self.start_vertex, self.initial_value)
        if not 0 <= self.initial_value <= math.pi / 2:
            raise ScenarioError("phi0 must lie in [0, pi/2]")
        return circle_from_u(shape, self.start_vertex, math.sqrt(shape.p) * math.sin(self.initial_value))

    def make_policy(self) -> Policy:
        if self.policy == "random":
            return Policy.random(self.seed)
        if self.policy == "scripted":
            return Policy.scripted(self.choices)
        return Policy(self.policy)

    def to_dict(self) -> dict:
        shape = {"sides": list(self.sides)} if self.sides is not None else \
            {"vertices": [list(v) for v in self.vertices]}
        policy: dict = {"kind": self.policy}
        if self.policy == "random":
            policy["seed"] = self.seed
        if self.policy == "scripted":
            policy["choices"] = list(self.choices)
        return {
            "version": VERSION,
            "shape": shape,
            "initial": {"vertex": self.start_vertex, self.initial_kind: self.initial_value},
            "policy": policy,
            "max_steps": self.max_steps,
            "outputs": dict(sorted(self.outputs.items())),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Scenario":
        if doc.get("version") != VERSION:
            raise ScenarioError(f"unsupported scenario version {doc.get('version')!r}")
        try:
            shape = doc["shape"]
            initial = doc["initial"]
            policy = doc.get("policy", {"kind": "smaller"})
        except (KeyError, TypeError) as exc:
            raise ScenarioError(f"missing scenario field: {exc}") from None
        kinds = [k for k in INITIAL_KINDS if k in initial]
        if len(kinds) != 1:
            raise ScenarioError("initial needs exactly one of phi0, r0, u0")
        if ("sides" in shape) == ("vertices" in shape):
            raise ScenarioError("shape needs exactly one of 'sides' or 'vertices'")
        try:
            return cls._build(doc, shape, initial, policy, kinds[0])
        except (ValueError, TypeError) as exc:
            raise ScenarioError(f"malformed scenario: {exc}") from None

    @classmethod
    def _build(cls, doc: dict, shape: dict, initial: dict, policy: dict, kind: str) -> "Scenario":
        return cls(
            sides=tuple(float(a) for a in shape["sides"]) if "sides" in shape else None,
            vertices=tuple((float(x), float(y)) for x, y in shape["vertices"]) if "vertices" in shape else None,
            start_vertex=int(initial.get("vertex", 1)),
            initial_kind=kind,
            initial_value=float(initial[kind]),
            policy=policy.get("kind", "smaller"),
            seed=policy.get("seed"),
            choices=tuple(policy.get("choices", ())),
            max_steps=int(doc.get("max_steps", DEFAULT_MAX_STEPS)),
            outputs=dict(doc.get("outputs", {})),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def load_scenario(path) -> Scenario:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON ({exc})") from None
    return Scenario.from_dict(doc)


def save_scenario(scenario: Scenario, path) -> None:
    Path(path).write_text(scenario.dumps())
