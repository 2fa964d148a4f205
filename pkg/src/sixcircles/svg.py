"""SVG 1.1 drawings of a shape and a chain of circles.

Geometry is written in the canonical embedding's own coordinates inside a
``scale(1,-1)`` group; labels sit in an unflipped group so text reads upright.
All numbers are printed with six decimals, so output is byte-stable.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .chain import AngleCircle

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _n(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def render_svg(shape, circles: Sequence[AngleCircle] = (), title: Optional[str] = None,
               width: int = 800) -> str:
    pts = [shape.vertex(i) for i in range(1, shape.n + 1)]
    xs = [x for x, _ in pts] + [c.center[0] - c.radius for c in circles] + [c.center[0] + c.radius for c in circles]
    ys = [y for _, y in pts] + [c.center[1] - c.radius for c in circles] + [c.center[1] + c.radius for c in circles]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0)
    pad = 0.05 * span
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    w, h = x1 - x0, y1 - y0
    stroke = span / 400.0
    dot = span / 250.0
    font = span / 40.0

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{round(width * h / w)}" viewBox="{_n(x0)} {_n(-y1)} {_n(w)} {_n(h)}">',
    ]
    if title:
        out.append(f"<title>{title}</title>")
    out.append(f'<g transform="scale(1,-1)" fill="none" stroke-width="{_n(stroke)}">')
    out.append('<polygon stroke="black" points="' + " ".join(f"{_n(x)},{_n(y)}" for x, y in pts) + '"/>')
    for k, c in enumerate(circles):
        color = PALETTE[(c.vertex - 1) % len(PALETTE)]
        cx, cy = c.center
        out.append(f'<circle class="chain" data-step="{k + 1}" cx="{_n(cx)}" cy="{_n(cy)}" '
                   f'r="{_n(c.radius)}" stroke="{color}"/>')
    for c in circles:
        out.append(f'<circle class="center" cx="{_n(c.center[0])}" cy="{_n(c.center[1])}" r="{_n(dot)}" fill="black"/>')
        for tx, ty in c.touch_points:
            out.append(f'<circle class="touch" cx="{_n(tx)}" cy="{_n(ty)}" r="{_n(dot)}" fill="gray"/>')
    out.append("</g>")
    out.append(f'<g font-family="sans-serif" font-size="{_n(font)}" fill="black">')
    for k, c in enumerate(circles):
        out.append(f'<text x="{_n(c.center[0] + dot)}" y="{_n(-c.center[1] - dot)}">{k + 1}</text>')
    for i, (x, y) in enumerate(pts, 1):
        out.append(f'<text class="vertex" x="{_n(x)}" y="{_n(-y)}">P{i}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
