"""Orbit iteration and similarity-parameter extraction.

n applications of the circumcenter map send an n-gon to a similar copy of
itself, rotated by alpha and scaled by s about the map center.  This module
extracts (s, alpha) from labeled vertex correspondences, detects set-wise
periodicity, and evaluates the closed-form triangle formulas for s and
cos(alpha).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    DegenerateVertexError,
    MapConfig,
    Polygon,
    circumcenter_map,
    signed_area,
)

__all__ = [
    "DegenerateOrbitError",
    "InconsistentSimilarityError",
    "DegeneratePositionError",
    "SimilarityParams",
    "OrbitRecord",
    "ShapeDescriptor",
    "iterate",
    "extract_similarity",
    "repeat_similarity_check",
    "triangle_ratio_raw",
    "triangle_cos_alpha_raw",
    "calibrate_ratio_convention",
    "triangle_ratio_closed_form",
    "triangle_cos_alpha_closed_form",
    "detect_period",
    "hausdorff_distance",
    "shape_descriptor",
    "descriptor_distance",
    "random_nondegenerate_instance",
    "orbit_margin",
    "random_orbit_safe_instance",
]


class DegenerateOrbitError(Exception):
    """The orbit hit a blow-up (m on a sideline of some iterate)."""

    def __init__(self, step: int, vertex: int):
        super().__init__(f"orbit degenerated at step {step}, vertex {vertex}")
        self.step = step
        self.vertex = vertex


class InconsistentSimilarityError(Exception):
    """Vertexwise ratios do not certify a single similarity (numerical breakdown)."""


class DegeneratePositionError(Exception):
    """A sub-triangle area in a closed-form formula is below tolerance."""


@dataclass(frozen=True)
class SimilarityParams:
    """Scale s, rotation alpha (radians, in (-pi, pi]) about ``center``.

    ``residual`` is the max vertexwise relative deviation of the complex
    ratios from s * exp(i*alpha); a small residual certifies a genuine
    similarity.
    """

    s: float
    alpha: float
    center: np.ndarray
    residual: float


@dataclass
class OrbitRecord:
    start: Polygon
    m: np.ndarray
    iterates: list[Polygon]
    failure: tuple[int, int] | None = None  # (step index, offending vertex)

    def __len__(self) -> int:
        return len(self.iterates)


def iterate(p: Polygon, m, k: int, cfg: MapConfig = MapConfig()) -> OrbitRecord:
    """Apply the circumcenter map k times; degeneracy stops the orbit and is
    recorded in ``failure`` rather than raised."""
    m = np.asarray(m, dtype=float)
    iterates = [p]
    failure = None
    cur = p
    for step in range(k):
        try:
            cur = circumcenter_map(cur, m, cfg)
        except DegenerateVertexError as e:
            failure = (step, e.index)
            break
        iterates.append(cur)
    return OrbitRecord(start=p, m=m, iterates=iterates, failure=failure)


def _similarity_from_pair(a: Polygon, b: Polygon, m: np.ndarray,
                          residual_tol: float) -> SimilarityParams:
    za = (a.vertices[:, 0] - m[0]) + 1j * (a.vertices[:, 1] - m[1])
    zb = (b.vertices[:, 0] - m[0]) + 1j * (b.vertices[:, 1] - m[1])
    ratio = zb / za
    s = float(np.mean(np.abs(ratio)))
    # circular mean of the arguments, immune to branch cuts
    alpha = float(np.angle(np.sum(ratio / np.abs(ratio))))
    if alpha <= -math.pi:
        alpha += 2.0 * math.pi
    w = s * complex(math.cos(alpha), math.sin(alpha))
    residual = float(np.max(np.abs(ratio - w)) / s)
    if residual > residual_tol:
        raise InconsistentSimilarityError(
            f"similarity residual {residual:.3e} exceeds {residual_tol:.1e}")
    return SimilarityParams(s=s, alpha=alpha, center=m.copy(), residual=residual)


def extract_similarity(p: Polygon, m, cfg: MapConfig = MapConfig(),
                       residual_tol: float = 1e-6) -> SimilarityParams:
    """Similarity parameters of n map applications (n = vertex count)."""
    m = np.asarray(m, dtype=float)
    rec = iterate(p, m, p.n, cfg)
    if rec.failure is not None:
        raise DegenerateOrbitError(*rec.failure)
    return _similarity_from_pair(p, rec.iterates[-1], m, residual_tol)


def repeat_similarity_check(p: Polygon, m, cfg: MapConfig = MapConfig(),
                            residual_tol: float = 1e-6
                            ) -> tuple[SimilarityParams, SimilarityParams]:
    """Parameters of the blocks 0 -> n and n -> 2n; the two agree."""
    m = np.asarray(m, dtype=float)
    n = p.n
    rec = iterate(p, m, 2 * n, cfg)
    if rec.failure is not None:
        raise DegenerateOrbitError(*rec.failure)
    first = _similarity_from_pair(p, rec.iterates[n], m, residual_tol)
    second = _similarity_from_pair(rec.iterates[n], rec.iterates[2 * n], m, residual_tol)
    return first, second


# ---------------------------------------------------------------------------
# closed-form triangle formulas
# ---------------------------------------------------------------------------

def _triangle_quantities(t: Polygon, m, area_tol: float = 1e-12):
    """Side lengths, distances to m, and cyclic signed sub-areas.

    Areas returned are the plain signed shoelace areas of (A,B,M), (B,C,M),
    (C,A,M); the formula wrappers pick the sign/doubling convention.
    """
    if t.n != 3:
        raise ValueError("closed-form formulas apply to triangles only")
    m = np.asarray(m, dtype=float)
    a, b, c = t.vertices
    la = np.linalg.norm(b - c)
    lb = np.linalg.norm(a - c)
    lc = np.linalg.norm(a - b)
    ma = np.linalg.norm(a - m)
    mb = np.linalg.norm(b - m)
    mc = np.linalg.norm(c - m)

    def tri_area(p, q, r):
        return 0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))

    area_abm = tri_area(a, b, m)
    area_bcm = tri_area(b, c, m)
    area_cam = tri_area(c, a, m)
    scale2 = max(la, lb, lc, ma, mb, mc) ** 2
    if min(abs(area_abm), abs(area_bcm), abs(area_cam)) <= area_tol * scale2:
        raise DegeneratePositionError("m lies on a sideline or at a vertex")
    return (la, lb, lc, ma, mb, mc, area_abm, area_bcm, area_cam)


def triangle_ratio_raw(t: Polygon, m) -> float:
    """Side-ratio formula exactly as printed, with unsigned unit-convention
    areas (evaluates to 8 at the centroid of the unit equilateral)."""
    la, lb, lc, ma, mb, mc, a_abm, a_bcm, a_cam = _triangle_quantities(t, m)
    return (la * lb * lc * ma * mb * mc) / (
        8.0 * abs(a_abm) * abs(a_bcm) * abs(a_cam))


def triangle_cos_alpha_raw(t: Polygon, m) -> float:
    """cos(alpha) formula exactly as printed, with unsigned unit-convention
    areas (evaluates to 1/2 at the centroid of the unit equilateral)."""
    la, lb, lc, ma, mb, mc, a_abm, a_bcm, a_cam = _triangle_quantities(t, m)
    num = (mc * mc * (ma * ma + mb * mb) * abs(a_abm)
           + mb * mb * (ma * ma + mc * mc) * abs(a_cam)
           + ma * ma * (mb * mb + mc * mc) * abs(a_bcm))
    return num / (la * lb * lc * ma * mb * mc)


_RATIO_CONVENTION: float | None = None
_CONVENTION_CANDIDATES = (1.0, 2.0, 4.0, 8.0)


def random_nondegenerate_instance(rng: np.random.Generator, n: int = 3,
                                  min_cross: float = 0.2):
    """Random n-gon plus a map center away from all sidelines (rejection sampled)."""
    while True:
        v = rng.uniform(-2.0, 2.0, size=(n, 2))
        m = rng.uniform(-3.0, 3.0, size=2)
        try:
            p = Polygon(v)
        except ValueError:
            continue
        d = p.vertices
        d1 = np.roll(d, -1, axis=0)
        cross = np.abs((d[:, 0] - m[0]) * (d1[:, 1] - m[1])
                       - (d[:, 1] - m[1]) * (d1[:, 0] - m[0]))
        if np.min(cross) < min_cross:
            continue
        return p, m


def orbit_margin(p: Polygon, m, steps: int, cfg: MapConfig = MapConfig()) -> float:
    """Smallest relative sub-triangle area met along ``steps`` applications.

    The margin is min over steps and vertices of |2 area(m, P_i, P_{i+1})| /
    max(|m - P_i|, |m - P_{i+1}|)^2; small values mean the orbit grazes a
    blow-up and downstream similarity extraction loses precision.
    """
    from .geometry import forward_map_arrays

    m = np.asarray(m, dtype=float)
    rec = iterate(p, m, steps, cfg)
    if rec.failure is not None:
        return 0.0
    worst = math.inf
    for q in rec.iterates[:steps]:
        x, y = q.vertices[:, 0], q.vertices[:, 1]
        _, _, cross2, scale2 = forward_map_arrays(x, y, m[0], m[1])
        worst = min(worst, float(np.min(np.abs(cross2) / scale2)))
    return worst


def random_orbit_safe_instance(rng: np.random.Generator, n: int = 3,
                               steps: int | None = None,
                               min_margin: float = 1e-2):
    """Random instance whose whole orbit stays clear of blow-ups."""
    if steps is None:
        steps = 2 * n
    while True:
        p, m = random_nondegenerate_instance(rng, n=n)
        if orbit_margin(p, m, steps) > min_margin:
            return p, m


def calibrate_ratio_convention(trials: int = 100, seed: int = 0,
                               tol: float = 1e-9) -> tuple[float, dict[float, float]]:
    """Fit the single area-convention constant of the side-ratio formula
    against the orbit oracle.

    Returns (constant, worst-case relative error per candidate).  Raises if no
    candidate fits within ``tol``.
    """
    rng = np.random.default_rng(seed)
    errors = {c: 0.0 for c in _CONVENTION_CANDIDATES}
    done = 0
    while done < trials:
        t, m = random_nondegenerate_instance(rng)
        try:
            s = extract_similarity(t, m).s
            raw = triangle_ratio_raw(t, m)
        except (DegenerateOrbitError, InconsistentSimilarityError, DegeneratePositionError):
            continue
        for c in _CONVENTION_CANDIDATES:
            errors[c] = max(errors[c], abs(raw / c - s) / s)
        done += 1
    best = min(_CONVENTION_CANDIDATES, key=lambda c: errors[c])
    if errors[best] > tol:
        raise InconsistentSimilarityError(
            f"no convention constant fits the orbit oracle; errors: {errors}")
    return best, errors


def _ratio_convention() -> float:
    global _RATIO_CONVENTION
    if _RATIO_CONVENTION is None:
        _RATIO_CONVENTION, _ = calibrate_ratio_convention()
    return _RATIO_CONVENTION


def triangle_ratio_closed_form(t: Polygon, m) -> float:
    """Calibrated side-ratio: matches the 3-step similarity scale s.

    Calibration finds the doubled-area convention (constant 8): with each
    sub-area read as a twice-signed determinant, the printed formula equals
    sign(product of cyclic signed areas) * s.
    """
    return triangle_ratio_raw(t, m) / _ratio_convention()


def triangle_cos_alpha_closed_form(t: Polygon, m) -> float:
    """cos(alpha) under the same doubled-signed-area convention.

    With sub-areas read as twice the cyclic signed areas of (A,B,M), (B,C,M),
    (C,A,M), the printed formula equals -sign(product) * cos(alpha); this
    returns the sign-corrected value, i.e. cos of the labeled 3-step rotation.
    """
    la, lb, lc, ma, mb, mc, a_abm, a_bcm, a_cam = _triangle_quantities(t, m)
    num = 2.0 * (mc * mc * (ma * ma + mb * mb) * a_abm
                 + mb * mb * (ma * ma + mc * mc) * a_cam
                 + ma * ma * (mb * mb + mc * mc) * a_bcm)
    sign = math.copysign(1.0, a_abm * a_bcm * a_cam)
    return -sign * num / (la * lb * lc * ma * mb * mc)


# ---------------------------------------------------------------------------
# periodicity and shape descriptors
# ---------------------------------------------------------------------------

def hausdorff_distance(a: Polygon, b: Polygon) -> float:
    """Symmetric Hausdorff distance between the two vertex sets."""
    diff = a.vertices[:, None, :] - b.vertices[None, :, :]
    d = np.sqrt((diff ** 2).sum(-1))
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def detect_period(p: Polygon, m, max_period: int, tol: float = 1e-9,
                  cfg: MapConfig = MapConfig()) -> int | None:
    """Smallest k <= max_period with iterate k equal to the start as an
    unlabeled vertex set (Hausdorff distance < tol * diameter)."""
    rec = iterate(p, m, max_period, cfg)
    thresh = tol * p.diameter
    for k in range(1, len(rec.iterates)):
        if hausdorff_distance(p, rec.iterates[k]) < thresh:
            return k
    return None


@dataclass(frozen=True)
class ShapeDescriptor:
    """Similarity-invariant polygon signature: perimeter-normalized side
    lengths and signed turning angles, compared up to cyclic relabeling and
    reflection."""

    lengths: np.ndarray
    angles: np.ndarray


def shape_descriptor(p: Polygon) -> ShapeDescriptor:
    v = p.vertices
    e = np.roll(v, -1, axis=0) - v          # edge i: from vertex i to i+1
    lengths = np.linalg.norm(e, axis=1)
    lengths = lengths / lengths.sum()
    prev = np.roll(e, 1, axis=0)
    # signed turning angle at vertex i, from edge i-1 to edge i
    turn = np.arctan2(prev[:, 0] * e[:, 1] - prev[:, 1] * e[:, 0],
                      (prev * e).sum(axis=1))
    # pair edge i with the turn at its head (vertex i+1) so that traversal
    # reversal maps the pair sequence to its own reversal with negated angles
    return ShapeDescriptor(lengths=lengths, angles=np.roll(turn, -1))


def descriptor_distance(a: ShapeDescriptor, b: ShapeDescriptor) -> float:
    """0 iff the underlying polygons are similar (up to relabeling/reflection)."""
    if len(a.lengths) != len(b.lengths):
        return 2.0
    n = len(a.lengths)

    def align_cost(bl, ba):
        best = np.inf
        for k in range(n):
            dl = np.abs(a.lengths - np.roll(bl, k)).max()
            da = np.abs(a.angles - np.roll(ba, k)).max()
            best = min(best, max(dl, da / np.pi))
        return best

    # mirror images negate turning angles; traversal reversal reverses both
    # sequences.  Cover all four combinations so the distance is 0 exactly
    # for similar shapes regardless of labeling direction.
    # traversal reversal maps edge i to edge n-2-i and swaps the edge end the
    # angle is attached to, hence the extra roll on the reversed angle list
    rev_a = np.roll(b.angles[::-1], -1)
    best = min(
        align_cost(b.lengths, b.angles),
        align_cost(b.lengths, -b.angles),
        align_cost(b.lengths[::-1], -rev_a),
        align_cost(b.lengths[::-1], rev_a),
    )
    return float(best)
