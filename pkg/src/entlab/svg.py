"""Bare-bones SVG scatter plot for ``[E_in, E_out]`` diagrams."""
from __future__ import annotations

from typing import Sequence

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
WIDTH = HEIGHT = 420
PAD = 50


def _xy(x: float, y: float, lo: float, hi: float) -> tuple[float, float]:
    span = (hi - lo) or 1.0
    px = PAD + (x - lo) / span * (WIDTH - 2 * PAD)
    py = HEIGHT - PAD - (y - lo) / span * (HEIGHT - 2 * PAD)
    return round(px, 3), round(py, 3)


def diagram_svg(points: Sequence, title: str = "") -> str:
    """Scatter of ``(e_in, e_out)`` per family plus the line ``e_out = e_in``."""
    hi = max([1.0] + [max(p.e_in, p.e_out) for p in points])
    lo = 0.0
    families = sorted({p.family for p in points})
    measure = points[0].measure.value if points else ""
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    (x0, y0), (x1, y1) = _xy(lo, lo, lo, hi), _xy(hi, hi, lo, hi)
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>')
    out.append(
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="gray" '
        'stroke-dasharray="4 3"/>'
    )
    out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle" font-size="13">{measure} in</text>')
    out.append(
        f'<text x="14" y="{HEIGHT / 2}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 14 {HEIGHT / 2})">{measure} out</text>'
    )
    if title:
        out.append(f'<text x="{WIDTH / 2}" y="22" text-anchor="middle" font-size="14">{title}</text>')
    for i, fam in enumerate(families):
        color = COLORS[i % len(COLORS)]
        out.append(f'<g fill="{color}" data-family="{fam}">')
        for p in points:
            if p.family == fam:
                cx, cy = _xy(p.e_in, p.e_out, lo, hi)
                out.append(f'<circle cx="{cx}" cy="{cy}" r="1.8"/>')
        out.append("</g>")
        out.append(
            f'<text x="{PAD + 10}" y="{PAD + 16 * (i + 1)}" font-size="12" fill="{color}">{fam}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
