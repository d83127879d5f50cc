"""Minimal native SVG line plots (no plotting runtime needed)."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

COLORS = {"black": "#000000", "red": "#d62728", "yellow": "#d4a017", "green": "#2ca02c", "blue": "#1f77b4"}
FALLBACK = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"]

W, H = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 150, 30, 50


def _color(name, i):
    base = name.replace("-dashed", "")
    return COLORS.get(base, FALLBACK[i % len(FALLBACK)]), name.endswith("-dashed")


def _ticks(lo, hi, log):
    if log:
        return [10.0**k for k in range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1)
                if lo <= 10.0**k <= hi] or [lo, hi]
    if hi == lo:
        return [lo]
    step = 10 ** math.floor(math.log10((hi - lo) / 4))
    for m in (1, 2, 5, 10):
        if (hi - lo) / (m * step) <= 6:
            step *= m
            break
    first = math.ceil(lo / step) * step
    return [first + k * step for k in range(int((hi - first) / step) + 1)]


def line_plot(series: dict, xlabel: str, ylabel: str, title: str = "", logx: bool = False) -> str:
    """``series`` maps a label to (xs, ys); non-finite points are skipped."""
    pts = [(x, y) for xs, ys in series.values() for x, y in zip(xs, ys)
           if math.isfinite(x) and math.isfinite(y) and (x > 0 or not logx)]
    if not pts:
        pts = [(1.0, 0.0), (10.0, 1.0)]
    xs, ys = zip(*pts)
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    if x1 == x0:
        x1 = x0 * 10 if logx else x0 + 1
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pad = 0.05 * (y1 - y0)
    y0, y1 = y0 - pad, y1 + pad
    fx = (lambda x: math.log10(x)) if logx else (lambda x: x)
    pw, ph = W - LEFT - RIGHT, H - TOP - BOTTOM

    def px(x):
        return LEFT + pw * (fx(x) - fx(x0)) / (fx(x1) - fx(x0))

    def py(y):
        return TOP + ph * (1 - (y - y0) / (y1 - y0))

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">',
           f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
           f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="#444"/>']
    for t in _ticks(x0, x1, logx):
        x = px(t)
        out.append(f'<line x1="{x:.2f}" y1="{TOP + ph}" x2="{x:.2f}" y2="{TOP + ph + 5}" stroke="#444"/>')
        out.append(f'<text x="{x:.2f}" y="{TOP + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1, False):
        y = py(t)
        out.append(f'<line x1="{LEFT - 5}" y1="{y:.2f}" x2="{LEFT}" y2="{y:.2f}" stroke="#444"/>')
        out.append(f'<text x="{LEFT - 8}" y="{y + 4:.2f}" text-anchor="end">{t:.4g}</text>')
    out.append(f'<text x="{LEFT + pw / 2}" y="{H - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="16" y="{TOP + ph / 2}" text-anchor="middle" '
               f'transform="rotate(-90 16 {TOP + ph / 2})">{escape(ylabel)}</text>')
    if title:
        out.append(f'<text x="{LEFT + pw / 2}" y="18" text-anchor="middle">{escape(title)}</text>')
    for i, (label, (sx, sy)) in enumerate(series.items()):
        color, dashed = _color(str(label), i)
        coords = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(sx, sy)
                          if math.isfinite(x) and math.isfinite(y) and (x > 0 or not logx))
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5"{dash} points="{coords}"/>')
        ly = TOP + 15 + 18 * i
        out.append(f'<line x1="{W - RIGHT + 10}" y1="{ly}" x2="{W - RIGHT + 35}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="1.5"{dash}/>')
        out.append(f'<text x="{W - RIGHT + 40}" y="{ly + 4}">{escape(str(label))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
