"""Closed-form locus polynomials and numerical locus tracing.

The s=1 boundary for the unit-circumradius equilateral (degree 6) and square
(degree 8) are evaluated with their exact printed coefficients; the alpha=0
loci are the n lines through the centroid at angles k*pi/n.  For polygons
with no closed form, the s=1 contour is traced numerically from a sampled
log s grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import DegenerateOrbitError, InconsistentSimilarityError, extract_similarity
from .geometry import GeometryError, Polygon, rotate_about

__all__ = [
    "ImplicitCurve",
    "SpecialPoints",
    "CURVE_FAMILIES",
    "eval_equilateral_sextic",
    "eval_equilateral_alpha_cubic",
    "eval_square_octic",
    "eval_square_alpha_quartic",
    "implicit_curve",
    "equilateral_fixed_points",
    "alpha_zero_lines",
    "verify_alpha_zero_lines",
    "trace_s1_locus",
]


def eval_equilateral_sextic(m) -> float:
    """Degree-6 s=1 locus of the unit-circumradius equilateral."""
    x, y = float(m[0]), float(m[1])
    x2 = x * x
    y2 = y * y
    return (3.0 * x2 * x2 * x2 - y2 * y2 * y2 - 12.0 * x2 * x2 * x
            + 9.0 * y2 * y2
            + (-27.0 * y2 + 9.0) * x2 * x2
            + (24.0 * y2 + 6.0) * x2 * x
            + (33.0 * y2 * y2 + 18.0 * y2 - 6.0) * x2
            + (36.0 * y2 * y2 - 18.0 * y2) * x
            - 6.0 * y2)


def eval_equilateral_alpha_cubic(m) -> float:
    """alpha=0 cubic of the equilateral: y (y^2 - 3 x^2)."""
    x, y = float(m[0]), float(m[1])
    return y * (y * y - 3.0 * x * x)


def eval_square_octic(m) -> float:
    """Degree-8 s=1 locus of the unit-circumradius square."""
    x, y = float(m[0]), float(m[1])
    x2 = x * x
    y2 = y * y
    x4 = x2 * x2
    y4 = y2 * y2
    return (15.0 * x4 * x4 - 68.0 * x4 * x2 * y2 + 90.0 * x4 * y4
            - 68.0 * x2 * y4 * y2 + 15.0 * y4 * y4
            - 64.0 * x4 * x2 + 64.0 * x4 * y2 + 64.0 * x2 * y4 - 64.0 * y4 * y2
            + 98.0 * x4 + 52.0 * x2 * y2 + 98.0 * y4
            - 64.0 * x2 - 64.0 * y2 + 15.0)


def eval_square_alpha_quartic(m) -> float:
    """alpha=0 quartic of the square: x y (x^2 - y^2)."""
    x, y = float(m[0]), float(m[1])
    return x * y * (x * x - y * y)


CURVE_FAMILIES = {
    "equilateral-sextic": eval_equilateral_sextic,
    "equilateral-alpha-cubic": eval_equilateral_alpha_cubic,
    "square-octic": eval_square_octic,
    "square-alpha-quartic": eval_square_alpha_quartic,
}


@dataclass(frozen=True)
class ImplicitCurve:
    family: str

    def __post_init__(self):
        if self.family not in CURVE_FAMILIES:
            raise ValueError(f"unknown curve family {self.family!r}; "
                             f"choose from {sorted(CURVE_FAMILIES)}")

    def evaluate(self, m) -> float:
        return CURVE_FAMILIES[self.family](m)


def implicit_curve(family: str) -> ImplicitCurve:
    return ImplicitCurve(family)


@dataclass(frozen=True)
class SpecialPoints:
    points: np.ndarray
    roles: tuple[str, ...]


def equilateral_fixed_points() -> SpecialPoints:
    """The six positions where 3 applications fix the equilateral: s=1 and
    alpha=0, hence a 3-periodic orbit."""
    s3 = math.sqrt(3.0)
    base = [np.array([1.0 + s3, 0.0]), np.array([1.0 - s3, 0.0])]
    pts = []
    for k in (0, 1, -1):
        ang = 2.0 * math.pi * k / 3.0
        rot = np.array([[math.cos(ang), -math.sin(ang)],
                        [math.sin(ang), math.cos(ang)]])
        for b in base:
            pts.append(rot @ b)
    return SpecialPoints(points=np.array(pts), roles=("fixed-point",) * 6)


def alpha_zero_lines(n: int) -> list[float]:
    """Directions (radians) of the n conjectured zero-rotation lines through
    the centroid: k*pi/n, k = 0..n-1."""
    if n < 3:
        raise ValueError("need n >= 3")
    return [k * math.pi / n for k in range(n)]


def verify_alpha_zero_lines(p: Polygon, n: int | None = None,
                            radii=None, keep_degenerate: bool = False):
    """Sample M on the conjectured lines and report, per line, the largest
    distance of the extracted alpha from {0, pi}.

    On the lines the labeled rotation flips between 0 and pi across sideline
    crossings, so the residual measures distance to the set {0, pi} rather
    than to 0 alone.  Returns a list of (direction, max residual, samples).
    """
    if n is None:
        n = p.n
    if radii is None:
        radii = [r for r in np.linspace(-3.0, 3.0, 61) if abs(r) > 0.05]
    out = []
    for theta in alpha_zero_lines(n):
        worst = 0.0
        used = 0
        for r in radii:
            m = (r * math.cos(theta), r * math.sin(theta))
            try:
                sp = extract_similarity(p, m)
            except (DegenerateOrbitError, InconsistentSimilarityError,
                    GeometryError, ValueError):
                # m on a sideline or circumcircle: iterate degenerates
                if keep_degenerate:
                    out.append((theta, math.inf, used))
                continue
            worst = max(worst, min(abs(sp.alpha), math.pi - abs(sp.alpha)))
            used += 1
        out.append((theta, worst, used))
    return out


def trace_s1_locus(p: Polygon, window, resolution: int = 256,
                   polish_iters: int = 12, keep_tol: float = 1e-3):
    """Polyline contours of log s = 0 inside ``window`` = (x0, y0, x1, y1).

    Marching squares on the sampled log s grid with linear interpolation,
    followed by a Newton polish along central-difference gradients.  Points
    that fail to reach |s - 1| < ``keep_tol`` are dropped.
    """
    from skimage import measure

    from .census import log_s_values

    x0, y0, x1, y1 = map(float, window)
    xs = np.linspace(x0, x1, resolution)
    ys = np.linspace(y0, y1, resolution)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    vals = log_s_values(p, gx.ravel(), gy.ravel()).reshape(gx.shape)
    # blow-up samples become large positive walls for the contour tracer
    finite = np.isfinite(vals)
    if not finite.all():
        cap = np.abs(vals[finite]).max() if finite.any() else 1.0
        vals = np.where(finite, vals, 10.0 * cap + 10.0)

    hx = xs[1] - xs[0]
    hy = ys[1] - ys[0]
    h = 0.25 * min(hx, hy)

    def f(pts):
        return log_s_values(p, pts[:, 0], pts[:, 1])

    contours = []
    for c in measure.find_contours(vals, 0.0):
        pts = np.column_stack([x0 + c[:, 0] * hx, y0 + c[:, 1] * hy])
        for _ in range(polish_iters):
            v = f(pts)
            bad = ~np.isfinite(v)
            v[bad] = 0.0
            gxv = (f(pts + [h, 0.0]) - f(pts - [h, 0.0])) / (2.0 * h)
            gyv = (f(pts + [0.0, h]) - f(pts - [0.0, h])) / (2.0 * h)
            g2 = gxv * gxv + gyv * gyv
            ok = np.isfinite(g2) & (g2 > 0) & ~bad
            step = np.zeros_like(pts)
            step[ok, 0] = v[ok] * gxv[ok] / g2[ok]
            step[ok, 1] = v[ok] * gyv[ok] / g2[ok]
            # limit steps to one cell so polish cannot jump branches
            norm = np.linalg.norm(step, axis=1)
            clip = norm > min(hx, hy)
            step[clip] *= (min(hx, hy) / norm[clip])[:, None]
            pts = pts - step
        v = f(pts)
        keep = np.isfinite(v) & (np.abs(np.expm1(v)) < keep_tol)
        if keep.sum() >= 2:
            contours.append(pts[keep])
    return contours
