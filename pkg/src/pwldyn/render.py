"""SVG rendering of invariant graphs; rationals become floats only here."""

from __future__ import annotations

from .planar import PlanarGraph

_STYLE = 'stroke="#1f3b73" stroke-width="2" stroke-linecap="round"'
_AXIS = 'stroke="#bbbbbb" stroke-width="1"'


def graph_svg(g: PlanarGraph, size: int = 720, margin: int = 40) -> str:
    segs = g.maximal_segments()
    pts = [p for s in segs for p in (s.p, s.q)] + list(g.isolated)
    if not pts:
        return "<svg xmlns='http://www.w3.org/2000/svg'/>"
    xs = [float(p.x) for p in pts]
    ys = [float(p.y) for p in pts]
    lo_x, hi_x = min(xs), max(xs)
    lo_y, hi_y = min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-9)
    scale = (size - 2 * margin) / span

    def sx(x: float) -> float:
        return margin + (x - lo_x) * scale

    def sy(y: float) -> float:
        return size - margin - (y - lo_y) * scale

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">'
    ]
    if lo_x <= 0 <= hi_x:
        lines.append(f'<line x1="{sx(0):.2f}" y1="0" x2="{sx(0):.2f}" y2="{size}" {_AXIS}/>')
    if lo_y <= 0 <= hi_y:
        lines.append(f'<line x1="0" y1="{sy(0):.2f}" x2="{size}" y2="{sy(0):.2f}" {_AXIS}/>')
    for s in segs:
        lines.append(
            f'<line x1="{sx(float(s.p.x)):.2f}" y1="{sy(float(s.p.y)):.2f}" '
            f'x2="{sx(float(s.q.x)):.2f}" y2="{sy(float(s.q.y)):.2f}" {_STYLE}/>'
        )
    for p in g.isolated:
        lines.append(
            f'<circle cx="{sx(float(p.x)):.2f}" cy="{sy(float(p.y)):.2f}" r="4" fill="#b33"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines)
