"""SVG drawings of subdivided two-dimensional faces."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence
from xml.sax.saxutils import quoteattr

from .exactnum import rank, solve, vsub

SIZE = 480
MARGIN = 40


def plane_coordinates(points: Sequence[tuple], vertices: Sequence[tuple]) -> dict:
    """Exact coordinates of ``points`` in an affine frame spanned by face edges."""
    origin = vertices[0]
    a = vsub(vertices[1], origin)
    b = next(vsub(v, origin) for v in vertices[2:] if rank([a, vsub(v, origin)]) == 2)
    cols = [[a[i], b[i]] for i in range(len(a))]
    out = {}
    for p in points:
        st = solve(cols, vsub(p, origin))
        if st is None:
            raise ValueError(f"{p} is not in the plane of the face")
        out[p] = tuple(Fraction(x) for x in st)
    return out


def _ordered(cell: Sequence[tuple], xy: dict) -> list[tuple]:
    # float angles only order polygon corners for drawing
    cx = sum(float(xy[v][0]) for v in cell) / len(cell)
    cy = sum(float(xy[v][1]) for v in cell) / len(cell)
    return sorted(cell, key=lambda v: math.atan2(float(xy[v][1]) - cy, float(xy[v][0]) - cx))


def _label(p: tuple) -> str:
    return "(" + ",".join(str(x) for x in p) + ")"


def render_face(face, title: str | None = None) -> str:
    """SVG of a :class:`~mirrortoric.scenarios.FaceComplex`."""
    xy = plane_coordinates(list(face.points), list(face.vertices))
    xs = [float(x) for x, _ in xy.values()]
    ys = [float(y) for _, y in xy.values()]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    k = (SIZE - 2 * MARGIN) / span

    def at(p):
        x, y = xy[p]
        return MARGIN + (float(x) - min(xs)) * k, SIZE - MARGIN - (float(y) - min(ys)) * k

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        f"<title>{title or face.name}</title>",
    ]
    for cell in face.cells:
        corners = _ordered([tuple(v) for v in cell], xy)
        pts = " ".join(f"{x:.3f},{y:.3f}" for x, y in map(at, corners))
        data = ";".join(_label(v) for v in sorted(cell))
        out.append(f'<polygon class="cell" points="{pts}" data-vertices={quoteattr(data)} fill="#dfe9f5" stroke="#23415e" stroke-width="1.5"/>')
    for p in face.points:
        x, y = at(p)
        out.append(f'<circle class="point" cx="{x:.3f}" cy="{y:.3f}" r="3" data-point={quoteattr(_label(p))}/>')
        out.append(f'<text x="{x + 5:.3f}" y="{y - 5:.3f}" font-size="9">{_label(p)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
