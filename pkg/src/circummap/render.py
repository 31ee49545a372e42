"""Deterministic SVG emission for orbits, region maps, and hemisphere plots.

All output is plain SVG 1.1 text assembled from formatted strings, so a
fixed input always yields identical bytes.  Contracting cells fill green,
expanding cells red; locus contours draw black, zero-rotation lines dashed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import OrbitRecord
from .census import FieldGrid

__all__ = [
    "RenderSpec",
    "render_orbit",
    "render_region_map",
    "render_hemisphere",
    "render_stretch_strip",
]


@dataclass(frozen=True)
class RenderSpec:
    kind: str = "orbit"            # orbit | region-map | hemisphere | stretch-strip
    size_px: int = 720
    stroke_width: float = 1.5
    highlight_stroke_width: float = 3.0
    contracting_fill: str = "#2e8b57"
    expanding_fill: str = "#cc3333"
    locus_stroke: str = "#000000"
    line_dash: str = "6,4"
    background: str = "#ffffff"

    def __post_init__(self):
        if self.kind not in ("orbit", "region-map", "hemisphere", "stretch-strip"):
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if self.size_px < 64:
            raise ValueError("canvas too small")


_DEFAULT_SPEC = RenderSpec()


def _fmt(v: float) -> str:
    return f"{v:.4f}"


class _Canvas:
    """Accumulates SVG elements over a plane window mapped to the canvas."""

    def __init__(self, spec: RenderSpec, window):
        self.spec = spec
        x0, y0, x1, y1 = map(float, window)
        self.window = (x0, y0, x1, y1)
        self.px = spec.size_px
        self.scale = self.px / max(x1 - x0, y1 - y0)
        self.parts: list[str] = []

    def to_px(self, x, y):
        x0, y0, x1, y1 = self.window
        # y flips: SVG grows downward
        return (x - x0) * self.scale, (y1 - y) * self.scale

    def path(self, pts, stroke, width, fill="none", close=True, dash=None):
        coords = [self.to_px(x, y) for x, y in pts]
        d = "M " + " L ".join(f"{_fmt(a)} {_fmt(b)}" for a, b in coords)
        if close:
            d += " Z"
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<path d="{d}" fill="{fill}" stroke="{stroke}" '
            f'stroke-width="{_fmt(width)}"{dash_attr}/>')

    def polygon_fill(self, pts, fill):
        coords = [self.to_px(x, y) for x, y in pts]
        d = "M " + " L ".join(f"{_fmt(a)} {_fmt(b)}" for a, b in coords) + " Z"
        self.parts.append(f'<path d="{d}" fill="{fill}" stroke="none"/>')

    def marker(self, x, y, color, radius=4.0):
        a, b = self.to_px(x, y)
        self.parts.append(
            f'<circle cx="{_fmt(a)}" cy="{_fmt(b)}" r="{_fmt(radius)}" '
            f'fill="{color}" stroke="none"/>')

    def document(self) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
            f'width="{self.px}" height="{self.px}" '
            f'viewBox="0 0 {self.px} {self.px}">\n'
            f'<rect width="{self.px}" height="{self.px}" '
            f'fill="{self.spec.background}"/>\n')
        return head + "\n".join(self.parts) + "\n</svg>\n"


def _orbit_window(orbit: OrbitRecord, pad_frac=0.08):
    pts = np.vstack([q.vertices for q in orbit.iterates] + [np.atleast_2d(orbit.m)])
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    span = max(float((hi - lo).max()), 1e-9)
    pad = pad_frac * span
    cx, cy = (lo + hi) / 2.0
    half = span / 2.0 + pad
    return (cx - half, cy - half, cx + half, cy + half)


def render_orbit(orbit: OrbitRecord, spec: RenderSpec = _DEFAULT_SPEC) -> str:
    """One closed path per iterate, every n-th iterate highlighted, M marked."""
    canvas = _Canvas(spec, _orbit_window(orbit))
    n = orbit.start.n
    total = len(orbit.iterates)
    for j, q in enumerate(orbit.iterates):
        highlight = j % n == 0
        # later iterates fade so coincident cycles stay readable
        shade = 0x30 + int(0x90 * (1.0 - j / max(total - 1, 1)))
        color = spec.locus_stroke if highlight else f"#{shade:02x}{shade:02x}{shade:02x}"
        width = spec.highlight_stroke_width if highlight else spec.stroke_width
        canvas.path([tuple(v) for v in q.vertices], color, width)
    canvas.marker(orbit.m[0], orbit.m[1], spec.expanding_fill)
    return canvas.document()


def _grid_quads(grid: FieldGrid):
    """Cell corner quads of a field grid in chart coordinates."""
    x0, y0, x1, y1 = grid.bounds
    res = grid.resolution
    xs = np.linspace(x0, x1, res + 1)
    ys = np.linspace(y0, y1, res + 1)
    return xs, ys


def render_region_map(grid: FieldGrid, contours=(), lines=(),
                      spec: RenderSpec = _DEFAULT_SPEC,
                      polygon=None) -> str:
    """Green/red cell fills with s=1 contours (black) and zero-rotation lines
    (dashed).  ``contours`` are polylines, ``lines`` are (theta) directions
    drawn through the origin."""
    canvas = _Canvas(spec, grid.bounds)
    xs, ys = _grid_quads(grid)
    vals = grid.values
    for i in range(grid.resolution):
        for j in range(grid.resolution):
            v = vals[i, j]
            if not np.isfinite(v):
                fill = spec.expanding_fill
            else:
                fill = spec.contracting_fill if v < 0 else spec.expanding_fill
            quad = [(xs[i], ys[j]), (xs[i + 1], ys[j]),
                    (xs[i + 1], ys[j + 1]), (xs[i], ys[j + 1])]
            canvas.polygon_fill(quad, fill)
    x0, y0, x1, y1 = grid.bounds
    span = math.hypot(x1 - x0, y1 - y0)
    for theta in lines:
        dx, dy = math.cos(theta), math.sin(theta)
        canvas.path([(-span * dx, -span * dy), (span * dx, span * dy)],
                    spec.locus_stroke, spec.stroke_width, close=False,
                    dash=spec.line_dash)
    for poly in contours:
        canvas.path([tuple(pt) for pt in poly], spec.locus_stroke,
                    spec.stroke_width, close=False)
    if polygon is not None:
        canvas.path([tuple(v) for v in polygon.vertices], spec.locus_stroke,
                    spec.highlight_stroke_width)
    return canvas.document()


def _hemisphere_point(x, y):
    """Plane point -> unit disk with infinity at the center.

    Radial map rho = (2/pi) * arctan(1/r): the polygon region sits near the
    rim, the far field collapses toward the center.
    """
    r = math.hypot(x, y)
    if r == 0.0:
        return (1.0, 0.0) if x >= 0 else (-1.0, 0.0)
    rho = (2.0 / math.pi) * math.atan(1.0 / r)
    return rho * x / r, rho * y / r


def render_hemisphere(plane_grid: FieldGrid, far_grid: FieldGrid,
                      spec: RenderSpec = _DEFAULT_SPEC,
                      cut_radius: float = 4.0) -> str:
    """Compose the plane chart and the far-field chart into one disk."""
    canvas = _Canvas(spec, (-1.05, -1.05, 1.05, 1.05))
    canvas.parts.append(
        f'<circle cx="{_fmt(canvas.to_px(0, 0)[0])}" '
        f'cy="{_fmt(canvas.to_px(0, 0)[1])}" '
        f'r="{_fmt(canvas.scale)}" fill="none" '
        f'stroke="{spec.locus_stroke}" stroke-width="{_fmt(spec.stroke_width)}"/>')

    def emit(grid: FieldGrid, keep):
        xs, ys = _grid_quads(grid)
        from .census import _chart_points
        for i in range(grid.resolution):
            for j in range(grid.resolution):
                v = grid.values[i, j]
                corners = [(xs[i], ys[j]), (xs[i + 1], ys[j]),
                           (xs[i + 1], ys[j + 1]), (xs[i], ys[j + 1])]
                px, py = _chart_points(
                    grid.chart,
                    np.array([c[0] for c in corners]),
                    np.array([c[1] for c in corners]))
                if not np.all(np.isfinite(px)):
                    continue
                rads = np.hypot(px, py)
                if not keep(rads):
                    continue
                quad = [_hemisphere_point(a, b) for a, b in zip(px, py)]
                if np.isfinite(v):
                    fill = (spec.contracting_fill if v < 0
                            else spec.expanding_fill)
                else:
                    fill = spec.expanding_fill
                canvas.polygon_fill(quad, fill)

    emit(plane_grid, lambda r: bool(np.all(r <= cut_radius)))
    emit(far_grid, lambda r: bool(np.all(r >= cut_radius)))
    return canvas.document()


def render_stretch_strip(polygons, reports, spec: RenderSpec = _DEFAULT_SPEC) -> str:
    """Row of stretched polygons annotated with their region totals."""
    k = len(polygons)
    if k == 0:
        raise ValueError("nothing to draw")
    all_pts = np.vstack([p.vertices for p in polygons])
    span = max(float(np.ptp(all_pts[:, 0])), float(np.ptp(all_pts[:, 1]))) + 1.0
    canvas = _Canvas(spec, (0.0, 0.0, k * span, span))
    for idx, (p, rep) in enumerate(zip(polygons, reports)):
        cx = (idx + 0.5) * span
        cy = span / 2.0
        shift = p.vertices - p.vertices.mean(axis=0) + [cx, cy]
        canvas.path([tuple(v) for v in shift], spec.locus_stroke,
                    spec.stroke_width)
        ax, ay = canvas.to_px(cx, 0.12 * span)
        canvas.parts.append(
            f'<text x="{_fmt(ax)}" y="{_fmt(ay)}" text-anchor="middle" '
            f'font-family="monospace" font-size="14">'
            f'{rep.total_contracting}</text>')
    return canvas.document()
