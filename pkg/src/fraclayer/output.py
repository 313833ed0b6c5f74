"""CSV and SVG emitters with byte-stable output."""

from __future__ import annotations

import io
import math
from typing import Iterable, Mapping, Sequence
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["SVG_HEIGHT", "SVG_WIDTH", "csv_text", "fmt", "line_plot_svg", "read_csv"]

SVG_WIDTH = 800
SVG_HEIGHT = 480
_MARGIN = (70, 30, 40, 55)  # left, right, top, bottom
_COLORS = ("#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400")


def fmt(v: float) -> str:
    """17 significant digits, round-trippable, no locale."""
    v = float(v)
    if v == 0.0:
        return "0"
    return format(v, ".17g")


def csv_text(header: Sequence[str], columns: Sequence[Iterable[float]]) -> str:
    cols = [np.asarray(list(c) if not isinstance(c, np.ndarray) else c, dtype=float) for c in columns]
    if len({c.size for c in cols}) > 1:
        raise ValueError("columns differ in length")
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in zip(*cols):
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def read_csv(text: str) -> tuple[list[str], np.ndarray]:
    lines = text.rstrip("\n").split("\n")
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
    return header, data.reshape(-1, len(header))


def _nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    span = hi - lo
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * span:
        ticks.append(0.0 if abs(t) < 1e-12 * span else t)
        t += step
    return ticks


def _tick_label(v: float) -> str:
    return f"{v:.6g}"


def line_plot_svg(series: Mapping[str, tuple], *, title: str = "", xlabel: str = "x", ylabel: str = "") -> str:
    """Static SVG 1.1 line plot of ``{label: (x, y)}`` with autoscaled axes."""
    xs = np.concatenate([np.asarray(x, dtype=float) for x, _ in series.values()])
    ys = np.concatenate([np.asarray(y, dtype=float) for _, y in series.values()])
    xlo, xhi = float(xs.min()), float(xs.max())
    ylo, yhi = float(ys.min()), float(ys.max())
    if xhi == xlo:
        xlo, xhi = xlo - 0.5, xhi + 0.5
    if yhi == ylo:
        ylo, yhi = ylo - 0.5, yhi + 0.5
    pad = 0.05 * (yhi - ylo)
    ylo, yhi = ylo - pad, yhi + pad
    ml, mr, mt, mb = _MARGIN
    pw = SVG_WIDTH - ml - mr
    ph = SVG_HEIGHT - mt - mb

    def px(x):
        return ml + (np.asarray(x) - xlo) / (xhi - xlo) * pw

    def py(y):
        return mt + (yhi - np.asarray(y)) / (yhi - ylo) * ph

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" '
        f'viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">',
        f'<rect x="0" y="0" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _nice_ticks(xlo, xhi):
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{mt + ph}" x2="{x:.2f}" y2="{mt + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{x:.2f}" y="{mt + ph + 18}" font-size="11" text-anchor="middle">{_tick_label(t)}</text>')
    for t in _nice_ticks(ylo, yhi):
        y = py(t)
        out.append(f'<line x1="{ml - 5}" y1="{y:.2f}" x2="{ml}" y2="{y:.2f}" stroke="black"/>')
        out.append(f'<text x="{ml - 8}" y="{y + 4:.2f}" font-size="11" text-anchor="end">{_tick_label(t)}</text>')
    if ylo < 0.0 < yhi:
        y0 = py(0.0)
        out.append(f'<line x1="{ml}" y1="{y0:.2f}" x2="{ml + pw}" y2="{y0:.2f}" stroke="#999" stroke-dasharray="4 3"/>')
    for k, (label, (x, y)) in enumerate(series.items()):
        color = _COLORS[k % len(_COLORS)]
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px(x), py(y)))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = mt + 16 + 16 * k
        out.append(f'<line x1="{ml + pw - 150}" y1="{ly - 4}" x2="{ml + pw - 125}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{ml + pw - 120}" y="{ly}" font-size="12">{escape(label)}</text>')
    if title:
        out.append(f'<text x="{SVG_WIDTH / 2:.1f}" y="{mt - 12}" font-size="14" text-anchor="middle">{escape(title)}</text>')
    out.append(f'<text x="{ml + pw / 2:.1f}" y="{SVG_HEIGHT - 12}" font-size="12" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(
            f'<text x="16" y="{mt + ph / 2:.1f}" font-size="12" text-anchor="middle" '
            f'transform="rotate(-90 16 {mt + ph / 2:.1f})">{escape(ylabel)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
