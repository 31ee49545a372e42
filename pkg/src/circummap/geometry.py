"""Polygon primitives and the circumcenter map family.

Conventions used throughout the package:

* vertices are indexed cyclically (index arithmetic is mod n);
* the forward map builds image vertex i from the vertex pair (i, i+1),
  i.e. image vertex i is the circumcenter of (m, P_i, P_{i+1});
* the inverse map and the pedal build vertex i from the side (i-1, i),
  so that inverse(forward(p, m), m) and pedal(antipedal(p, m), m) are
  labeled identities, not cyclic shifts.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "GeometryError",
    "CollinearError",
    "DegenerateVertexError",
    "ZeroLengthSideError",
    "ParallelPerpendicularsError",
    "MapConfig",
    "Polygon",
    "circumcenter",
    "circumcenter_map",
    "inverse_circumcenter_map",
    "pedal_polygon",
    "antipedal_polygon",
    "regular_ngon",
    "signed_area",
    "centroid",
    "homothety",
    "rotate_about",
    "affine_stretch",
]


class GeometryError(Exception):
    """Base class for degenerate-geometry failures."""


class CollinearError(GeometryError):
    """Three points are collinear within tolerance: the circumcircle degenerates."""


class DegenerateVertexError(GeometryError):
    """m lies on sideline (P_i, P_{i+1}); image vertex i escapes to infinity."""

    def __init__(self, index: int):
        super().__init__(f"center point lies on sideline {index}")
        self.index = index


class ZeroLengthSideError(GeometryError):
    """A side has length below tolerance."""

    def __init__(self, index: int):
        super().__init__(f"side {index} has zero length")
        self.index = index


class ParallelPerpendicularsError(GeometryError):
    """Consecutive antipedal perpendiculars are parallel (collinear degeneracy)."""

    def __init__(self, index: int):
        super().__init__(f"perpendiculars at vertex pair ({index}, {index + 1}) are parallel")
        self.index = index


@dataclass(frozen=True)
class MapConfig:
    """Numerical guard for the vanishing denominator of the closed-form map.

    The collinearity test compares the twice-signed area of (m, P_i, P_{i+1})
    against ``collinearity_tolerance * scale**2`` with
    ``scale = max(|m - P_i|, |m - P_{i+1}|)``.
    """

    collinearity_tolerance: float = 1e-12

    def __post_init__(self):
        if not self.collinearity_tolerance > 0:
            raise ValueError("collinearity_tolerance must be positive")


_DEFAULT_CFG = MapConfig()

# relative threshold for "two consecutive vertices coincide"
_SIDE_TOL = 1e-12


def _as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.shape != (2,):
        raise ValueError(f"expected a plane point (x, y), got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("point coordinates must be finite")
    return a


@dataclass(frozen=True)
class Polygon:
    """Ordered, cyclically indexed vertex list; orientation matters."""

    vertices: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValueError(f"vertices must have shape (n, 2), got {v.shape}")
        if v.shape[0] < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        if not np.all(np.isfinite(v)):
            raise ValueError("vertex coordinates must be finite")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)
        d = self.diameter
        if d <= 0.0:
            raise ValueError("all vertices coincide")
        sides = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
        if np.any(sides <= _SIDE_TOL * d):
            i = int(np.argmin(sides))
            raise ValueError(f"consecutive vertices {i} and {(i + 1) % len(v)} coincide")

    @property
    def n(self) -> int:
        return self.vertices.shape[0]

    @property
    def diameter(self) -> float:
        v = self.vertices
        diff = v[:, None, :] - v[None, :, :]
        return float(np.sqrt((diff ** 2).sum(-1)).max())

    def __len__(self) -> int:
        return self.n


# ---------------------------------------------------------------------------
# closed-form kernels (broadcast over trailing axes; used scalar here and in
# batched form by the census field sampler)
# ---------------------------------------------------------------------------

def forward_map_arrays(x, y, xm, ym):
    """Closed-form circumcenters of (m, P_i, P_{i+1}) for all i.

    ``x``/``y`` have the vertex axis first and broadcast against ``xm``/``ym``.
    Returns ``(px, py, cross2, scale2)`` where ``cross2`` is the twice-signed
    area of (m, P_i, P_{i+1}) (half the denominator) and ``scale2`` the square
    of max(|m - P_i|, |m - P_{i+1}|), for degeneracy guards.  No guard is
    applied here; callers decide.
    """
    x1 = np.roll(x, -1, axis=0)
    y1 = np.roll(y, -1, axis=0)
    rho = xm * xm + ym * ym - x1 * x1 - y1 * y1
    denom = 2.0 * ((xm - x1) * y + (x - xm) * y1 + (x1 - x) * ym)
    px = ((y1 - ym) * y * y + rho * y + y1 * y1 * ym
          + (x * x - xm * xm - ym * ym) * y1 + (x1 * x1 - x * x) * ym) / denom
    py = ((xm - x1) * x * x - rho * x - x1 * x1 * xm
          + (xm * xm + ym * ym - y * y) * x1 + xm * (y * y - y1 * y1)) / denom
    d0 = (x - xm) ** 2 + (y - ym) ** 2
    d1 = (x1 - xm) ** 2 + (y1 - ym) ** 2
    return px, py, 0.5 * denom, np.maximum(d0, d1)


def _sideline_reflections(x, y, xm, ym):
    """Reflection of m about side (i, i+1), via the closed-form coordinates."""
    x1 = np.roll(x, -1, axis=0)
    y1 = np.roll(y, -1, axis=0)
    dx = x1 - x
    dy = y1 - y
    r = dx * dx + dy * dy
    rp = dx * dx - dy * dy
    cross = x * y1 - x1 * y
    u = (rp * xm + 2.0 * dy * dx * ym + 2.0 * dy * cross) / r
    v = (-rp * ym + 2.0 * dy * dx * xm - 2.0 * dx * cross) / r
    return u, v, r


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def circumcenter(a, b, c, cfg: MapConfig = _DEFAULT_CFG) -> np.ndarray:
    """Center of the circle through three points."""
    ax, ay = _as_point(a)
    bx, by = _as_point(b)
    cx, cy = _as_point(c)
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    scale2 = max((ax - bx) ** 2 + (ay - by) ** 2,
                 (bx - cx) ** 2 + (by - cy) ** 2,
                 (ax - cx) ** 2 + (ay - cy) ** 2)
    if abs(d) <= 2.0 * cfg.collinearity_tolerance * scale2:
        raise CollinearError("three points are collinear within tolerance")
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    return np.array([ux, uy])


def circumcenter_map(p: Polygon, m, cfg: MapConfig = _DEFAULT_CFG) -> Polygon:
    """Image polygon whose vertex i is the circumcenter of (m, P_i, P_{i+1})."""
    mx, my = _as_point(m)
    x, y = p.vertices[:, 0], p.vertices[:, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        px, py, cross2, scale2 = forward_map_arrays(x, y, mx, my)
    bad = np.abs(cross2) <= cfg.collinearity_tolerance * scale2
    if np.any(bad):
        raise DegenerateVertexError(int(np.argmax(bad)))
    return Polygon(np.column_stack([px, py]))


def inverse_circumcenter_map(p: Polygon, m, cfg: MapConfig = _DEFAULT_CFG) -> Polygon:
    """Inverse map: vertex i is the reflection of m about side (P_{i-1}, P_i)."""
    mx, my = _as_point(m)
    x, y = p.vertices[:, 0], p.vertices[:, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        u, v, r = _sideline_reflections(x, y, mx, my)
    tiny = r <= (_SIDE_TOL * p.diameter) ** 2
    if np.any(tiny):
        raise ZeroLengthSideError(int(np.argmax(tiny)))
    return Polygon(np.column_stack([np.roll(u, 1), np.roll(v, 1)]))


def pedal_polygon(p: Polygon, m) -> Polygon:
    """Pedal polygon: vertex i is the foot of the perpendicular from m to side (i-1, i)."""
    mx, my = _as_point(m)
    a = np.roll(p.vertices, 1, axis=0)
    d = p.vertices - a
    r = (d ** 2).sum(axis=1)
    tiny = r <= (_SIDE_TOL * p.diameter) ** 2
    if np.any(tiny):
        raise ZeroLengthSideError(int(np.argmax(tiny)))
    t = ((mx - a[:, 0]) * d[:, 0] + (my - a[:, 1]) * d[:, 1]) / r
    return Polygon(a + t[:, None] * d)


def antipedal_polygon(p: Polygon, m, cfg: MapConfig = _DEFAULT_CFG) -> Polygon:
    """Antipedal polygon: vertex i is the meet of the perpendiculars to m-P_i
    at P_i and to m-P_{i+1} at P_{i+1}."""
    mm = _as_point(m)
    v = p.vertices
    v1 = np.roll(v, -1, axis=0)
    # perpendicular directions at P_i and P_{i+1}
    w = mm - v
    w1 = mm - v1
    d = np.column_stack([-w[:, 1], w[:, 0]])
    d1 = np.column_stack([-w1[:, 1], w1[:, 0]])
    denom = d[:, 0] * d1[:, 1] - d[:, 1] * d1[:, 0]
    scale2 = np.maximum((w ** 2).sum(1), (w1 ** 2).sum(1))
    bad = np.abs(denom) <= cfg.collinearity_tolerance * scale2
    if np.any(bad):
        raise ParallelPerpendicularsError(int(np.argmax(bad)))
    rhs = v1 - v
    t = (rhs[:, 0] * d1[:, 1] - rhs[:, 1] * d1[:, 0]) / denom
    return Polygon(v + t[:, None] * d)


def regular_ngon(n: int) -> Polygon:
    """Regular n-gon with centroid at the origin and first vertex (1, 0)."""
    if n < 3:
        raise ValueError("need n >= 3")
    k = np.arange(n)
    ang = 2.0 * np.pi * k / n
    return Polygon(np.column_stack([np.cos(ang), np.sin(ang)]))


def signed_area(p: Polygon) -> float:
    v = p.vertices
    v1 = np.roll(v, -1, axis=0)
    return 0.5 * float(np.sum(v[:, 0] * v1[:, 1] - v1[:, 0] * v[:, 1]))


def centroid(p: Polygon) -> np.ndarray:
    return p.vertices.mean(axis=0)


def homothety(p: Polygon, center, ratio: float) -> Polygon:
    c = _as_point(center)
    return Polygon(c + ratio * (p.vertices - c))


def rotate_about(p: Polygon, center, angle: float) -> Polygon:
    c = _as_point(center)
    ca, sa = np.cos(angle), np.sin(angle)
    rot = np.array([[ca, -sa], [sa, ca]])
    return Polygon(c + (p.vertices - c) @ rot.T)


def affine_stretch(p: Polygon, factor_x: float) -> Polygon:
    """Horizontal stretch (x, y) -> (factor_x * x, y)."""
    v = p.vertices.copy()
    v[:, 0] *= factor_x
    return Polygon(v)
