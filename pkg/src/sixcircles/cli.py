"""Command-line driver: ``sixcircles <subcommand> ...``.

Exit codes: 0 on success, 1 on a domain error (one line on stderr), 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import experiments, oracles, pldynamics, polygon
from .chain import ChainRecord, circle_from_radius, run_chain
from .errors import SixCirclesError
from .scenario import Scenario, load_scenario, save_scenario
from .svg import render_svg
from .triangle import coupling_identity_residual, beta_inequality_margin, triangle_from_sides

CHAIN_COLUMNS = ["step", "vertex", "radius", "u", "phi", "sign_case", "choice", "center_x", "center_y"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _jsonable(x):
    if isinstance(x, Fraction):
        return _fmt(x)
    return x


def _floats(text: str, count: Optional[int] = None) -> list[float]:
    try:
        vals = [float(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise argparse.ArgumentTypeError(f"expected {count} numbers, got {len(vals)}")
    return vals


def _sides(text: str) -> list[float]:
    return _floats(text, 3)


def _vertices(text: str) -> list[tuple[float, float]]:
    pts = []
    for chunk in text.replace(";", " ").split():
        xy = _floats(chunk, 2)
        pts.append((xy[0], xy[1]))
    if len(pts) < 3:
        raise argparse.ArgumentTypeError("need at least three vertices 'x,y x,y x,y'")
    return pts


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


# -- triangle ----------------------------------------------------------------

def cmd_triangle(args) -> int:
    tri = triangle_from_sides(*args.sides)
    conv = math.degrees if args.degrees else (lambda x: x)
    doc = {
        "sides": list(tri.sides),
        "p": tri.p,
        "alpha": [conv(a) for a in tri.half_angles],
        "beta": [conv(b) for b in tri.betas],
        "e": list(tri.couplings),
        "T": list(tri.tangent_lengths),
        "vertices": [list(v) for v in tri.vertices],
        "coupling_identity_residuals": [coupling_identity_residual(tri, k) for k in (1, 2, 3)],
        "beta_margin": conv(beta_inequality_margin(tri)),
        "angle_unit": "degrees" if args.degrees else "radians",
    }
    if args.format == "json":
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        rows = [(k, tri.sides[k - 1], conv(tri.half_angles[k - 1]), conv(tri.betas[k - 1]),
                 tri.couplings[k - 1], tri.tangent_lengths[k - 1]) for k in (1, 2, 3)]
        _emit(_csv_text(["index", "side", "alpha", "beta", "e", "T"], rows), args.output)
    return 0


# -- chains ------------------------------------------------------------------

def _add_chain_flags(p: argparse.ArgumentParser, polygon_shapes: bool = False) -> None:
    p.add_argument("--scenario", help="JSON scenario file (version 1)")
    p.add_argument("--sides", type=_sides, help="triangle sides a1,a2,a3")
    if polygon_shapes:
        p.add_argument("--vertices", type=_vertices, help="convex polygon 'x,y x,y ...' counterclockwise")
        p.add_argument("--regular", type=int, metavar="N", help="regular N-gon with unit sides")
        p.add_argument("--parallelogram", type=lambda t: _floats(t, 3), metavar="S1,S2,ANGLE",
                       help="parallelogram side lengths and angle at vertex 1")
    init = p.add_mutually_exclusive_group()
    init.add_argument("--phi0", type=float, help="initial angle coordinate (triangles)")
    init.add_argument("--r0", type=float, help="initial radius")
    init.add_argument("--u0", type=float, help="initial sqrt tangent length")
    p.add_argument("--start-vertex", type=int, default=1)
    p.add_argument("--policy", choices=["smaller", "larger", "random", "scripted"], default="smaller")
    p.add_argument("--choices", default="", help="comma-separated smaller/larger for --policy scripted")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--degrees", action="store_true", help="phi0 and phi output in degrees")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output", help="write the report here instead of stdout")
    p.add_argument("--svg", help="also write an SVG drawing")
    p.add_argument("--save-scenario", help="write the effective scenario as JSON")


def _scenario_from_args(args, parser) -> Scenario:
    if args.scenario:
        sc = load_scenario(args.scenario)
        if args.max_steps is not None:
            sc = dataclasses.replace(sc, max_steps=args.max_steps)
        return sc
    vertices = getattr(args, "vertices", None)
    if getattr(args, "regular", None):
        vertices = polygon.regular_polygon(args.regular).vertices
    if getattr(args, "parallelogram", None):
        s1, s2, ang = args.parallelogram
        vertices = polygon.parallelogram(s1, s2, math.radians(ang) if args.degrees else ang).vertices
    if (args.sides is None) == (vertices is None):
        parser.error("give exactly one shape: --sides, --vertices, --regular or --parallelogram (or --scenario)")
    for kind in ("phi0", "r0", "u0"):
        value = getattr(args, kind)
        if value is not None:
            break
    else:
        parser.error("an initial condition is required: --phi0, --r0 or --u0")
    if kind == "phi0" and args.degrees:
        value = math.radians(value)
    if args.policy == "random" and args.seed is None:
        parser.error("--policy random requires --seed")
    choices = tuple(c.strip() for c in args.choices.split(",") if c.strip())
    if any(c not in ("smaller", "larger") for c in choices):
        parser.error("--choices accepts only 'smaller' and 'larger'")
    outputs = {}
    if args.output:
        outputs[args.format] = args.output
    if args.svg:
        outputs["svg"] = args.svg
    return Scenario(
        sides=tuple(args.sides) if args.sides is not None else None,
        vertices=tuple(vertices) if vertices is not None else None,
        start_vertex=args.start_vertex,
        initial_kind=kind,
        initial_value=value,
        policy=args.policy,
        seed=args.seed if args.policy == "random" else None,
        choices=choices,
        max_steps=args.max_steps if args.max_steps is not None else 10_000,
        outputs=outputs,
    )


def chain_rows(rec: ChainRecord, degrees: bool = False) -> list[list]:
    has_p = rec.shape.n == 3
    rows = []
    for s in rec.steps:
        c = s.circle
        phi = None
        if has_p and c.u * c.u <= rec.shape.p:
            phi = pldynamics.phi_from_u(c.u, rec.shape.p)
            if degrees:
                phi = math.degrees(phi)
        rows.append([s.index, c.vertex, c.radius, c.u, phi,
                     s.sign_case.value if s.sign_case else None,
                     s.choice.value if s.choice else None,
                     c.center[0], c.center[1]])
    return rows


def chain_report(rec: ChainRecord, sc: Scenario, degrees: bool = False) -> dict:
    return {
        "scenario": sc.to_dict(),
        "termination": rec.termination.value,
        "pre_period": rec.pre_period,
        "period": rec.period,
        "message": rec.message,
        "steps": [dict(zip(CHAIN_COLUMNS, row)) for row in chain_rows(rec, degrees)],
    }


def _run_scenario(sc: Scenario) -> ChainRecord:
    shape = sc.shape()
    return run_chain(shape, sc.initial_circle(shape), sc.make_policy(), sc.max_steps)


def _summary(rec: ChainRecord) -> str:
    return (f"termination={rec.termination.value}\n"
            f"pre_period={_fmt(rec.pre_period)}\n"
            f"period={_fmt(rec.period)}\n")


def cmd_chain(args, parser) -> int:
    sc = _scenario_from_args(args, parser)
    if args.save_scenario:
        save_scenario(sc, args.save_scenario)
    rec = _run_scenario(sc)
    if args.format == "json":
        _emit(json.dumps(chain_report(rec, sc, args.degrees), indent=2) + "\n", args.output)
    else:
        _emit(_csv_text(CHAIN_COLUMNS, chain_rows(rec, args.degrees)), args.output)
        (sys.stdout if args.output else sys.stderr).write(_summary(rec))
    if args.svg:
        Path(args.svg).write_text(render_svg(rec.shape, rec.circles))
    return 0


def cmd_ngon(args, parser) -> int:
    sc = _scenario_from_args(args, parser)
    if args.save_scenario:
        save_scenario(sc, args.save_scenario)
    rec = _run_scenario(sc)
    rate = None
    if args.divergence:
        rate = polygon.divergence_rate(rec.shape, rec.steps[0].circle.u, args.delta0,
                                       args.divergence, sc.start_vertex)
    if args.format == "json":
        doc = chain_report(rec, sc)
        doc["divergence_rate"] = rate
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        _emit(_csv_text(CHAIN_COLUMNS, chain_rows(rec)), args.output)
        summary = _summary(rec) + (f"divergence_rate={_fmt(rate)}\n" if rate is not None else "")
        (sys.stdout if args.output else sys.stderr).write(summary)
    if args.svg:
        Path(args.svg).write_text(render_svg(rec.shape, rec.circles))
    return 0


def cmd_render(args, parser) -> int:
    sc = _scenario_from_args(args, parser)
    rec = _run_scenario(sc)
    target = args.output or sc.outputs.get("svg")
    _emit(render_svg(rec.shape, rec.circles), target)
    return 0


# -- piecewise-linear map ----------------------------------------------------

def cmd_plmap(args) -> int:
    exact = args.mode == "exact"
    a, b = (args.a, args.b) if exact else (float(args.a), float(args.b))
    params = pldynamics.PLMapParams(a, b, args.reversed)
    x0 = args.x0 if exact else float(args.x0)
    rep = pldynamics.orbit(params, x0, exact=exact, keep=args.steps, max_iter=args.max_iter)
    traj = rep.trajectory[: max(args.steps, rep.pre_period + rep.period) + 1]
    if args.format == "json":
        doc = {
            "a": _jsonable(a), "b": _jsonable(b), "reversed": args.reversed, "mode": args.mode,
            "x0": _jsonable(rep.x0), "pre_period": rep.pre_period, "period": rep.period,
            "cycle": [_jsonable(c) for c in rep.cycle],
            "fixed_point": _jsonable(pldynamics.fixed_point(params if not exact else params.as_exact())),
            "bound": pldynamics.preperiod_bound(params, x0),
            "trajectory": [{"n": n, "x": _jsonable(x), "interval": lab}
                           for n, (x, lab) in enumerate(zip(traj, rep.interval_trace))],
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.output)
    else:
        rows = [(n, x, lab) for n, (x, lab) in enumerate(zip(traj, rep.interval_trace))]
        _emit(_csv_text(["n", "x", "interval"], rows), args.output)
        (sys.stdout if args.output else sys.stderr).write(
            f"pre_period={rep.pre_period}\nperiod={rep.period}\n"
            f"cycle={' '.join(_fmt(c) for c in rep.cycle)}\n")
    return 0


# -- Monte Carlo -------------------------------------------------------------

def cmd_mc(args) -> int:
    tri = triangle_from_sides(*args.sides)
    hist = experiments.monte_carlo(tri, args.runs, args.seed, args.policy, args.max_steps, args.workers,
                                   args.start_vertex)
    _emit(hist.to_json() if args.format == "json" else hist.to_csv(), args.output)
    return 0


# -- Malfatti ----------------------------------------------------------------

def cmd_malfatti(args) -> int:
    tri = triangle_from_sides(*args.sides)
    radii = oracles.brute_force_malfatti(tri)
    circles = [circle_from_radius(tri, i, r) for i, r in enumerate(radii, 1)]
    residuals = []
    for i in range(3):
        c1, c2 = circles[i], circles[(i + 1) % 3]
        d = math.dist(c1.center, c2.center)
        residuals.append(d - (c1.radius + c2.radius))
    phis = pldynamics.malfatti_phis(tri)
    doc = {
        "sides": list(tri.sides),
        "radii": list(radii),
        "phi": list(phis),
        "radii_from_phi": [tri.p * math.sin(phis[i]) ** 2 * tri.tan_half[i] for i in range(3)],
        "tangency_residuals": residuals,
        "scaled_fixed_point": pldynamics.fixed_point(pldynamics.composite_params(tri)),
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.output)
    if args.svg:
        Path(args.svg).write_text(render_svg(tri, circles))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sixcircles", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("triangle", help="derived quantities of a triangle")
    p.add_argument("--sides", type=_sides, required=True)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--degrees", action="store_true")
    p.add_argument("--output")

    p = sub.add_parser("chain", help="chain of circles in a triangle")
    _add_chain_flags(p)

    p = sub.add_parser("ngon", help="chain of circles in a convex polygon")
    _add_chain_flags(p, polygon_shapes=True)
    p.add_argument("--divergence", type=int, metavar="STEPS", default=0,
                   help="also estimate the divergence rate over STEPS steps")
    p.add_argument("--delta0", type=float, default=1e-9)

    p = sub.add_parser("render", help="SVG drawing of a chain")
    _add_chain_flags(p, polygon_shapes=True)

    p = sub.add_parser("plmap", help="orbit of |||x-1|-a|-b|")
    p.add_argument("--a", type=_rational, required=True)
    p.add_argument("--b", type=_rational, required=True)
    p.add_argument("--x0", type=_rational, required=True)
    p.add_argument("--steps", type=int, default=0, help="iterates to print (at least up to the cycle)")
    p.add_argument("--mode", choices=["exact", "float"], default="exact")
    p.add_argument("--reversed", action="store_true", help="use |||x-1|-b|-a| (reversed beta order)")
    p.add_argument("--max-iter", type=int, default=1_000_000)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--output")

    p = sub.add_parser("mc", help="random-choice Monte Carlo histogram of pre-periods")
    p.add_argument("--sides", type=_sides, default=[3.0, 4.0, 5.0])
    p.add_argument("--runs", type=int, default=3000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--policy", choices=["random", "smaller", "larger"], default="random")
    p.add_argument("--max-steps", type=int, default=experiments.MC_MAX_STEPS)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--start-vertex", type=int, choices=[1, 2, 3], default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--output")

    p = sub.add_parser("malfatti", help="three pairwise tangent circles, one per angle")
    p.add_argument("--sides", type=_sides, required=True)
    p.add_argument("--svg")
    p.add_argument("--output")

    for sp in sub.choices.values():
        sp.set_defaults(subparser=sp)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = args.subparser
    try:
        if args.command == "triangle":
            return cmd_triangle(args)
        if args.command == "chain":
            return cmd_chain(args, sub)
        if args.command == "ngon":
            return cmd_ngon(args, sub)
        if args.command == "render":
            return cmd_render(args, sub)
        if args.command == "plmap":
            return cmd_plmap(args)
        if args.command == "mc":
            return cmd_mc(args)
        return cmd_malfatti(args)
    except (SixCirclesError, OSError) as exc:
        print(f"sixcircles: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
