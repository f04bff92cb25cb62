"""Dependency-free SVG output: precision-matrix heatmaps and F1 curves."""

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

import numpy as np

from .errors import InvalidInput

PALETTE = ["#1f3b73", "#4ea3d9", "#f28e2b", "#2ca02c", "#9467bd", "#8c564b", "#d62728", "#7f7f7f"]


def _fmt(x):
    # fixed precision keeps output byte-stable
    return f"{x:.2f}".rstrip("0").rstrip(".")


def diverging_color(v):
    """Blue for negative, white at zero, red for positive; ``v`` is clipped to [-1, 1]."""
    v = min(max(float(v), -1.0), 1.0)
    fade = int(round(255 * (1.0 - abs(v))))
    if v >= 0:
        r, g, b = 255, fade, fade
    else:
        r, g, b = fade, fade, 255
    return f"#{r:02x}{g:02x}{b:02x}"


@dataclass
class HeatmapSpec:
    matrix: np.ndarray
    cell_size: int = 20
    clamp: float = None
    title: str = ""

    def __post_init__(self):
        self.matrix = np.atleast_2d(np.asarray(self.matrix, dtype=float))
        if self.cell_size < 1:
            raise InvalidInput("cell_size must be >= 1")
        if np.any(np.isnan(self.matrix)):
            raise InvalidInput("heatmap matrix contains NaN")
        if not np.all(np.isfinite(self.matrix)):
            raise InvalidInput("heatmap matrix contains infinite values")

    def scale(self):
        if self.clamp is not None:
            if not self.clamp > 0:
                raise InvalidInput("clamp must be positive")
            return float(self.clamp)
        c = float(np.percentile(np.abs(self.matrix), 99))
        return c if c > 0 else 1.0


def render_heatmap(spec):
    m = spec.matrix
    rows, cols = m.shape
    cs = spec.cell_size
    top = 24 if spec.title else 0
    width, height = cols * cs, rows * cs + top
    c = spec.scale()
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    if spec.title:
        out.append(
            f'<text x="{_fmt(width / 2)}" y="16" text-anchor="middle" font-family="sans-serif" '
            f'font-size="12">{escape(spec.title)}</text>'
        )
    for i in range(rows):
        for j in range(cols):
            out.append(
                f'<rect x="{j * cs}" y="{top + i * cs}" width="{cs}" height="{cs}" '
                f'fill="{diverging_color(m[i, j] / c)}"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


@dataclass
class CurveSpec:
    x: list
    series: dict
    x_label: str = "sweep"
    y_label: str = "F1"
    title: str = ""
    y_range: tuple = field(default=(0.0, 1.0))

    def __post_init__(self):
        self.x = [float(v) for v in self.x]
        if len(self.x) < 2:
            raise InvalidInput("need at least two x values")
        if not self.series:
            raise InvalidInput("need at least one series")
        lo, hi = self.y_range
        for name, ys in self.series.items():
            if len(ys) != len(self.x):
                raise InvalidInput(f"series {name!r} has {len(ys)} points, expected {len(self.x)}")
            for y in ys:
                if not (lo <= y <= hi):
                    raise InvalidInput(f"series {name!r} value {y} outside [{lo}, {hi}]")


def render_curves(spec, width=640, height=420):
    left, right, top, bottom = 60, 170, 40, 50
    pw, ph = width - left - right, height - top - bottom
    x0, x1 = min(spec.x), max(spec.x)
    y0, y1 = spec.y_range
    xspan = (x1 - x0) or 1.0

    def px(x):
        return left + (x - x0) / xspan * pw

    def py(y):
        return top + (1.0 - (y - y0) / (y1 - y0)) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if spec.title:
        out.append(
            f'<text x="{_fmt(left + pw / 2)}" y="22" text-anchor="middle" font-family="sans-serif" '
            f'font-size="14">{escape(spec.title)}</text>'
        )
    out.append(
        f'<line x1="{left}" y1="{top + ph}" x2="{left + pw}" y2="{top + ph}" stroke="#000000"/>'
    )
    out.append(f'<line x1="{left}" y1="{top}" x2="{left}" y2="{top + ph}" stroke="#000000"/>')
    for i in range(6):
        y = y0 + (y1 - y0) * i / 5
        out.append(
            f'<line x1="{left - 4}" y1="{_fmt(py(y))}" x2="{left}" y2="{_fmt(py(y))}" stroke="#000000"/>'
        )
        out.append(
            f'<text x="{left - 8}" y="{_fmt(py(y) + 4)}" text-anchor="end" font-family="sans-serif" '
            f'font-size="11">{_fmt(y)}</text>'
        )
    for x in spec.x:
        out.append(
            f'<line x1="{_fmt(px(x))}" y1="{top + ph}" x2="{_fmt(px(x))}" y2="{top + ph + 4}" stroke="#000000"/>'
        )
        out.append(
            f'<text x="{_fmt(px(x))}" y="{top + ph + 18}" text-anchor="middle" font-family="sans-serif" '
            f'font-size="11">{_fmt(x)}</text>'
        )
    out.append(
        f'<text x="{_fmt(left + pw / 2)}" y="{height - 10}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12">{escape(spec.x_label)}</text>'
    )
    out.append(
        f'<text x="16" y="{_fmt(top + ph / 2)}" text-anchor="middle" font-family="sans-serif" '
        f'font-size="12" transform="rotate(-90 16 {_fmt(top + ph / 2)})">{escape(spec.y_label)}</text>'
    )
    for idx, (name, ys) in enumerate(spec.series.items()):
        color = PALETTE[idx % len(PALETTE)]
        pts = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in zip(spec.x, ys))
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        ly = top + 10 + idx * 20
        lx = left + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(
            f'<text x="{lx + 26}" y="{ly + 4}" font-family="sans-serif" font-size="12">{escape(name)}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
