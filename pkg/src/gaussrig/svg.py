"""Tiny SVG scatter/line emitter so presets can produce a picture without plotting deps."""
from __future__ import annotations

from typing import Sequence


def plot(xs: Sequence[float], ys: Sequence[float], title: str = "", xlabel: str = "", ylabel: str = "",
         line: bool = False, width: int = 480, height: int = 320) -> str:
    pad = 48
    if not xs:
        xs, ys = [0.0], [0.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(min(ys), 0.0), max(ys)
    sx = (width - 2 * pad) / ((x1 - x0) or 1)
    sy = (height - 2 * pad) / ((y1 - y0) or 1)
    pts = [(pad + (x - x0) * sx, height - pad - (y - y0) * sy) for x, y in zip(xs, ys)]
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-size="11">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
        f'<text x="{width / 2}" y="{pad / 2}" text-anchor="middle">{title}</text>',
        f'<text x="{width / 2}" y="{height - 10}" text-anchor="middle">{xlabel}</text>',
        f'<text x="12" y="{height / 2}" transform="rotate(-90 12 {height / 2})" text-anchor="middle">{ylabel}</text>',
        f'<text x="{pad}" y="{height - pad + 14}" text-anchor="middle">{x0:g}</text>',
        f'<text x="{width - pad}" y="{height - pad + 14}" text-anchor="middle">{x1:g}</text>',
        f'<text x="{pad - 4}" y="{height - pad}" text-anchor="end">{y0:g}</text>',
        f'<text x="{pad - 4}" y="{pad + 4}" text-anchor="end">{y1:g}</text>',
    ]
    if line and len(pts) > 1:
        path = " ".join(f"{x:.2f},{y:.2f}" for x, y in pts)
        out.append(f'<polyline points="{path}" fill="none" stroke="steelblue"/>')
    out.extend(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="steelblue"/>' for x, y in pts)
    out.append("</svg>")
    return "\n".join(out) + "\n"
