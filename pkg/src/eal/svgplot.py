"""A very small static SVG line plotter.

Only what the figures here need: several polylines on shared axes, an
optional log-scaled y axis, tick labels, a legend, and solid or dashed
strokes.  Output is plain text with fixed number formatting, so identical
inputs give identical files.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 720, 480
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 170, 40, 55
PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"]


@dataclass
class Series:
    x: list
    y: list
    label: str
    dashed: bool = False
    color: str | None = None


@dataclass
class Plot:
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    logy: bool = False
    ylim: tuple | None = None
    series: list = field(default_factory=list)

    def add(self, x, y, label, dashed=False, color=None) -> None:
        self.series.append(Series(list(x), list(y), label, dashed, color))

    def to_svg(self) -> str:
        return render(self)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(render(self))


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _nice_ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = start
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def render(plot: Plot) -> str:
    pts = [(x, y) for s in plot.series for x, y in zip(s.x, s.y)
           if math.isfinite(x) and math.isfinite(y) and (y > 0 or not plot.logy)]
    if not pts:
        raise ValueError("nothing to plot")
    tr = (lambda v: math.log10(v)) if plot.logy else (lambda v: v)
    xs = [p[0] for p in pts]
    x0, x1 = min(xs), max(xs)
    if plot.ylim is not None:
        y0, y1 = (tr(v) for v in plot.ylim)
    else:
        ys = [tr(p[1]) for p in pts]
        y0, y1 = min(ys), max(ys)
        if plot.logy:
            y0, y1 = math.floor(y0), math.ceil(y1)
    if x1 == x0:
        x1 = x0 + 1
    if y1 == y0:
        y1 = y0 + 1
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def px(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def py(y):
        return MARGIN_T + (1 - (tr(y) - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<clipPath id="plotarea"><rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}"/></clipPath>',
    ]
    # grid and ticks
    for t in _nice_ticks(x0, x1):
        X = _fmt(px(t))
        out.append(f'<line x1="{X}" y1="{MARGIN_T}" x2="{X}" y2="{MARGIN_T + ph}" stroke="#e0e0e0"/>')
        out.append(f'<text x="{X}" y="{MARGIN_T + ph + 16}" text-anchor="middle">{t:g}</text>')
    if plot.logy:
        yticks = [10.0**k for k in range(int(math.ceil(y0 - 1e-9)), int(math.floor(y1 + 1e-9)) + 1)]
        labels = [f"1e{int(round(math.log10(t)))}" for t in yticks]
    else:
        yticks = _nice_ticks(y0, y1)
        labels = [f"{t:g}" for t in yticks]
    for t, lab in zip(yticks, labels):
        Y = _fmt(py(t))
        out.append(f'<line x1="{MARGIN_L}" y1="{Y}" x2="{MARGIN_L + pw}" y2="{Y}" stroke="#e0e0e0"/>')
        out.append(f'<text x="{MARGIN_L - 6}" y="{Y}" text-anchor="end" dominant-baseline="middle">{lab}</text>')
    out.append(f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    # data
    for k, s in enumerate(plot.series):
        color = s.color or PALETTE[k % len(PALETTE)]
        coords = [f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(s.x, s.y)
                  if math.isfinite(x) and math.isfinite(y) and (y > 0 or not plot.logy)]
        if not coords:
            continue
        dash = ' stroke-dasharray="6,4"' if s.dashed else ""
        out.append(f'<polyline points="{" ".join(coords)}" fill="none" stroke="{color}" '
                   f'stroke-width="1.6"{dash} clip-path="url(#plotarea)"/>')
        ly = MARGIN_T + 14 + 18 * k
        lx = MARGIN_L + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 28}" y2="{ly}" stroke="{color}" '
                   f'stroke-width="1.6"{dash}/>')
        out.append(f'<text x="{lx + 34}" y="{ly}" dominant-baseline="middle">{escape(s.label)}</text>')
    # labels
    if plot.title:
        out.append(f'<text x="{MARGIN_L + pw / 2:.2f}" y="{MARGIN_T - 14}" text-anchor="middle" '
                   f'font-size="14">{escape(plot.title)}</text>')
    if plot.xlabel:
        out.append(f'<text x="{MARGIN_L + pw / 2:.2f}" y="{HEIGHT - 12}" text-anchor="middle">'
                   f'{escape(plot.xlabel)}</text>')
    if plot.ylabel:
        cy = MARGIN_T + ph / 2
        out.append(f'<text x="18" y="{cy:.2f}" text-anchor="middle" '
                   f'transform="rotate(-90 18 {cy:.2f})">{escape(plot.ylabel)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
