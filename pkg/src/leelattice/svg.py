"""Minimal self-contained SVG line charts for the CSV-first figure output."""

from __future__ import annotations

import math
from typing import Dict, Sequence
from xml.sax.saxutils import escape

_COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]


def line_chart(
    x: Sequence[float],
    series: Dict[str, Sequence[float]],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    log_y: bool = False,
    width: int = 640,
    height: int = 400,
) -> str:
    left, right, top, bottom = 70, 20, 40, 50
    pw, ph = width - left - right, height - top - bottom

    def fy(v: float) -> float:
        return math.log10(v) if log_y else v

    ys = [fy(v) for vals in series.values() for v in vals if (v > 0 or not log_y) and math.isfinite(v)]
    x0, x1 = min(x), max(x)
    y0, y1 = (min(ys), max(ys)) if ys else (0.0, 1.0)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1

    def px(v: float) -> float:
        return left + (v - x0) / (x1 - x0) * pw

    def py(v: float) -> float:
        return top + ph - (fy(v) - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="12">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="#333"/>',
        f'<text x="{width / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<text x="{width / 2}" y="{height - 10}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="15" y="{top + ph / 2}" text-anchor="middle" '
        f'transform="rotate(-90 15 {top + ph / 2})">{escape(ylabel)}</text>',
    ]
    for i in range(5):
        yv = y0 + (y1 - y0) * i / 4
        label = f"1e{yv:.1f}" if log_y else f"{yv:.3g}"
        yy = top + ph - ph * i / 4
        out.append(f'<text x="{left - 5}" y="{yy + 4}" text-anchor="end">{label}</text>')
    for xv in x:
        out.append(f'<text x="{px(xv)}" y="{top + ph + 16}" text-anchor="middle">{xv:g}</text>')
    for idx, (name, vals) in enumerate(series.items()):
        color = _COLORS[idx % len(_COLORS)]
        pts = " ".join(
            f"{px(a):.1f},{py(b):.1f}" for a, b in zip(x, vals) if math.isfinite(b) and (b > 0 or not log_y)
        )
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        out.append(
            f'<text x="{left + 10}" y="{top + 16 + 16 * idx}" fill="{color}">{escape(name)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
