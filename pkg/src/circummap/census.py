"""Region census of the n-step area-scaling field on the compactified plane.

The log s field (s = similarity scale of n map applications) is sampled on
two charts: the plane itself and the inversion chart w = M / |M|^2, which
brings the point at infinity to w = 0.  Connected components of {log s < 0}
(contracting) and {log s > 0} (expanding) are counted by flood fill over
both charts stitched on their overlap annulus, with adaptive corner-sign
refinement near the s = 1 boundary.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .geometry import Polygon, affine_stretch, forward_map_arrays, regular_ngon, signed_area

__all__ = [
    "FieldGrid",
    "RegionReport",
    "StretchSweepResult",
    "RegularityReport",
    "log_s_values",
    "sample_field",
    "census",
    "census_polygon",
    "conjectured_counts",
    "stretch_sweep",
    "regularity_comparison",
    "report_csv",
    "CSV_HEADER",
]

_GUARD = 1e-12          # collinearity guard, relative to local scale^2
_FOUR_CONN = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


# ---------------------------------------------------------------------------
# field evaluation
# ---------------------------------------------------------------------------

def log_s_values(p: Polygon, xm, ym, guard: float = _GUARD) -> np.ndarray:
    """log of the n-step similarity scale at each sample point.

    Vectorized over the sample points.  Blow-ups (m within the collinearity
    guard of a sideline of any iterate, or numeric overflow) yield +inf: the
    blow-up set belongs to the expanding region.
    """
    xm = np.asarray(xm, dtype=float).ravel()
    ym = np.asarray(ym, dtype=float).ravel()
    n = p.n
    x = np.repeat(p.vertices[:, 0][:, None], xm.size, axis=1)
    y = np.repeat(p.vertices[:, 1][:, None], xm.size, axis=1)
    x0, y0 = x.copy(), y.copy()
    bad = np.zeros(xm.size, dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(n):
            px, py, cross2, scale2 = forward_map_arrays(x, y, xm, ym)
            bad |= np.any(np.abs(cross2) <= guard * scale2, axis=0)
            bad |= ~np.all(np.isfinite(px) & np.isfinite(py), axis=0)
            x, y = px, py
        z = (x - xm) + 1j * (y - ym)
        z0 = (x0 - xm) + 1j * (y0 - ym)
        s = np.mean(np.abs(z / z0), axis=0)
        out = np.log(s)
    out[bad | ~np.isfinite(out)] = np.inf
    return out


def _chart_points(chart: str, xs, ys):
    """Map chart coordinates to plane coordinates.

    'plane' is the identity, 'inverted' is w -> w / |w|^2, and 'polar' reads
    (u, theta) as M = (e^u cos theta, e^u sin theta).  The log-polar chart is
    what the far-field census uses: near infinity the field organizes into
    wedges of roughly constant angular width, so structures keep a healthy
    size in (u, theta) no matter how far out they sit.
    """
    if chart == "plane":
        return xs, ys
    if chart == "inverted":
        r2 = xs * xs + ys * ys
        with np.errstate(divide="ignore", invalid="ignore"):
            return xs / r2, ys / r2
    if chart == "polar":
        r = np.exp(xs)
        return r * np.cos(ys), r * np.sin(ys)
    raise ValueError(f"unknown chart {chart!r}")


def _chart_log_s(p, chart, xs, ys, guard=_GUARD):
    mx, my = _chart_points(chart, np.asarray(xs, float), np.asarray(ys, float))
    vals = np.full(mx.shape, np.inf)
    ok = np.isfinite(mx) & np.isfinite(my)
    if ok.any():
        vals[ok] = log_s_values(p, mx[ok], my[ok], guard)
    return vals


# ---------------------------------------------------------------------------
# sampled field grid (rendering / export surface)
# ---------------------------------------------------------------------------

@dataclass
class FieldGrid:
    """Raster of log s over one chart; cell-center values plus the depth to
    which each cell was subdivided near the sign boundary."""

    chart: str
    bounds: tuple[float, float, float, float]
    resolution: int
    values: np.ndarray         # (resolution, resolution) log s at cell centers
    depth: np.ndarray          # (resolution, resolution) refinement depth
    refine_depth: int

    def cell_centers(self):
        x0, y0, x1, y1 = self.bounds
        cx = x0 + (np.arange(self.resolution) + 0.5) * (x1 - x0) / self.resolution
        cy = y0 + (np.arange(self.resolution) + 0.5) * (y1 - y0) / self.resolution
        return cx, cy

    def to_json_dict(self):
        return {
            "chart": self.chart,
            "bounds": list(self.bounds),
            "resolution": self.resolution,
            "refine_depth": self.refine_depth,
            "values": [[None if not np.isfinite(v) else v for v in row]
                       for row in self.values.tolist()],
            "depth": self.depth.tolist(),
        }


def sample_field(p: Polygon, chart: str = "plane",
                 bounds: tuple[float, float, float, float] = (-6.0, -6.0, 6.0, 6.0),
                 resolution: int = 64, refine_depth: int = 2,
                 guard: float = _GUARD) -> FieldGrid:
    """Cell-center log s samples with corner-sign-driven refinement metadata."""
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    x0, y0, x1, y1 = map(float, bounds)
    hx = (x1 - x0) / resolution
    hy = (y1 - y0) / resolution
    cx = x0 + (np.arange(resolution) + 0.5) * hx
    cy = y0 + (np.arange(resolution) + 0.5) * hy
    gx, gy = np.meshgrid(cx, cy, indexing="ij")
    values = _chart_log_s(p, chart, gx.ravel(), gy.ravel(), guard).reshape(gx.shape)

    # corner signs decide which cells get flagged for subdivision
    kx = x0 + np.arange(resolution + 1) * hx
    ky = y0 + np.arange(resolution + 1) * hy
    kgx, kgy = np.meshgrid(kx, ky, indexing="ij")
    corner = _chart_log_s(p, chart, kgx.ravel(), kgy.ravel(), guard).reshape(kgx.shape)
    csign = np.where(corner > 0, 1, -1)
    mixed = ~((csign[:-1, :-1] == csign[1:, :-1])
              & (csign[:-1, :-1] == csign[:-1, 1:])
              & (csign[:-1, :-1] == csign[1:, 1:]))
    depth = np.where(mixed, refine_depth, 0).astype(np.int32)
    return FieldGrid(chart=chart, bounds=(x0, y0, x1, y1), resolution=resolution,
                     values=values, depth=depth, refine_depth=refine_depth)


# ---------------------------------------------------------------------------
# adaptive corner-sign quadtree per chart
# ---------------------------------------------------------------------------

class _ChartSigns:
    """Sign rasters of one chart at successive refinement levels.

    Base corner lattice is fully evaluated; mixed-sign cells are subdivided
    recursively.  ``raster(level)`` returns the fine-resolution classification
    (-1 contracting, +1 expanding, 0 unresolved wall) where cells still mixed
    at ``level`` are walls.
    """

    def __init__(self, p, chart, bounds, base_res, depth, guard=_GUARD):
        self.bounds = tuple(map(float, bounds))
        self.base_res = base_res
        self.depth = depth
        self.fine_res = base_res << depth
        x0, y0, x1, y1 = self.bounds
        self._sx = (x1 - x0) / self.fine_res
        self._sy = (y1 - y0) / self.fine_res

        step = 1 << depth
        ii, jj = np.meshgrid(np.arange(base_res + 1) * step,
                             np.arange(base_res + 1) * step, indexing="ij")
        sgn = self._eval_signs(p, chart, ii.ravel(), jj.ravel(), guard)
        sgn = sgn.reshape(base_res + 1, base_res + 1)
        self._cache: dict[tuple[int, int], int] = {}

        c = sgn[:-1, :-1]
        uniform = ((c == sgn[1:, :-1]) & (c == sgn[:-1, 1:]) & (c == sgn[1:, 1:]))
        # uniform cells recorded per level as (i, j, sign) in fine units
        ui, uj = np.nonzero(uniform)
        self.level_cells = [(ui * step, uj * step, c[ui, uj])]
        mi, mj = np.nonzero(~uniform)
        active_i, active_j = mi * step, mj * step

        corner_sign = {}
        for di in (0, 1):
            for dj in (0, 1):
                corner_sign[(di, dj)] = sgn[di:base_res + di, dj:base_res + dj][~uniform]

        for level in range(1, depth + 1):
            size = step >> level
            if active_i.size == 0:
                self.level_cells.append((active_i, active_j, active_i))
                continue
            # new lattice points: edge midpoints and centers of active cells
            s2 = size
            pts_i = np.concatenate([active_i + s2, active_i, active_i + 2 * s2,
                                    active_i + s2, active_i + s2])
            pts_j = np.concatenate([active_j + s2, active_j + s2, active_j + s2,
                                    active_j, active_j + 2 * s2])
            key = pts_i.astype(np.int64) * (self.fine_res + 1) + pts_j
            uniq, inv = np.unique(key, return_inverse=True)
            known = np.fromiter((self._cache.get(int(k), 0) for k in uniq),
                                dtype=np.int8, count=uniq.size)
            todo = known == 0
            if todo.any():
                ti = (uniq[todo] // (self.fine_res + 1)).astype(np.int64)
                tj = (uniq[todo] % (self.fine_res + 1)).astype(np.int64)
                vals = self._eval_signs(p, chart, ti, tj, guard)
                known[todo] = vals
                for k, v in zip(uniq[todo], vals):
                    self._cache[int(k)] = int(v)
            new = known[inv].reshape(5, -1)
            center, left, right, bottom, top = new
            # assemble the 4 subcells' corner signs
            c00, c10, c01, c11 = (corner_sign[(0, 0)], corner_sign[(1, 0)],
                                  corner_sign[(0, 1)], corner_sign[(1, 1)])
            subs = [
                (active_i, active_j, c00, bottom, left, center),
                (active_i + s2, active_j, bottom, c10, center, right),
                (active_i, active_j + s2, left, center, c01, top),
                (active_i + s2, active_j + s2, center, right, top, c11),
            ]
            ui_l, uj_l, us_l = [], [], []
            ai_l, aj_l = [], []
            nxt = {(0, 0): [], (1, 0): [], (0, 1): [], (1, 1): []}
            for si, sj, k00, k10, k01, k11 in subs:
                uni = (k00 == k10) & (k00 == k01) & (k00 == k11)
                ui_l.append(si[uni])
                uj_l.append(sj[uni])
                us_l.append(k00[uni])
                ai_l.append(si[~uni])
                aj_l.append(sj[~uni])
                nxt[(0, 0)].append(k00[~uni])
                nxt[(1, 0)].append(k10[~uni])
                nxt[(0, 1)].append(k01[~uni])
                nxt[(1, 1)].append(k11[~uni])
            self.level_cells.append((np.concatenate(ui_l), np.concatenate(uj_l),
                                     np.concatenate(us_l)))
            active_i = np.concatenate(ai_l)
            active_j = np.concatenate(aj_l)
            corner_sign = {k: np.concatenate(v) for k, v in nxt.items()}

        self._active_final = (active_i, active_j)

    def _eval_signs(self, p, chart, ii, jj, guard):
        x0, y0, _, _ = self.bounds
        xs = x0 + ii * self._sx
        ys = y0 + jj * self._sy
        vals = _chart_log_s(p, chart, xs, ys, guard)
        return np.where(vals > 0, 1, -1).astype(np.int8)

    def raster(self, level: int) -> np.ndarray:
        """Fine-resolution sign raster with cells unresolved at ``level`` as 0."""
        n = self.fine_res
        step = 1 << self.depth
        # level 0 covers most of the domain: scatter at base resolution and
        # upsample in one shot rather than block-filling cell by cell
        base = np.zeros((self.base_res, self.base_res), dtype=np.int8)
        ci0, cj0, cs0 = self.level_cells[0]
        base[ci0 // step, cj0 // step] = cs0
        out = np.repeat(np.repeat(base, step, axis=0), step, axis=1)
        for lvl in range(1, level + 1):
            size = step >> lvl
            ci, cj, cs = self.level_cells[lvl]
            if ci.size == 0:
                continue
            if size == 1:
                out[ci, cj] = cs
            else:
                off = np.arange(size)
                for v in (-1, 1):
                    sel = cs == v
                    if not sel.any():
                        continue
                    # block fill via advanced indexing
                    ri = (ci[sel][:, None, None] + off[None, :, None])
                    rj = (cj[sel][:, None, None] + off[None, None, :])
                    out[ri, rj] = v
        return out


# ---------------------------------------------------------------------------
# census proper
# ---------------------------------------------------------------------------

@dataclass
class RegionReport:
    n: int
    expanding_count: int
    contracting_interior: int
    contracting_compact: int
    contracting_noncompact: int
    total_contracting: int
    resolution: int
    refine_depth: int
    stable: bool
    previous_level_counts: tuple[int, int, int, int] | None = None

    def counts(self):
        return (self.contracting_interior, self.contracting_noncompact,
                self.contracting_compact, self.total_contracting)


@dataclass
class StretchSweepResult:
    factors: list[float]
    totals: list[int]
    reports: list[RegionReport]


@dataclass
class RegularityReport:
    n: int
    regular_total: int
    sample_totals: list[int]

    @property
    def regular_is_max(self) -> bool:
        return all(t <= self.regular_total for t in self.sample_totals)


def _point_in_polygon(poly: Polygon, xs, ys):
    """Even-odd crossing test, vectorized over sample points."""
    v = poly.vertices
    v1 = np.roll(v, -1, axis=0)
    inside = np.zeros(xs.shape, dtype=bool)
    for (ax, ay), (bx, by) in zip(v, v1):
        cond = (ay > ys) != (by > ys)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = ax + (ys - ay) * (bx - ax) / (by - ay)
        inside ^= cond & (xs < xint)
    return inside


def _distance_to_boundary(poly: Polygon, xs, ys):
    """Distance from sample points to the nearest boundary segment."""
    v = poly.vertices
    v1 = np.roll(v, -1, axis=0)
    best = np.full(xs.shape, np.inf)
    for (ax, ay), (bx, by) in zip(v, v1):
        dx, dy = bx - ax, by - ay
        r2 = dx * dx + dy * dy
        t = np.clip(((xs - ax) * dx + (ys - ay) * dy) / r2, 0.0, 1.0)
        d = np.hypot(xs - (ax + t * dx), ys - (ay + t * dy))
        best = np.minimum(best, d)
    return best


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, a):
        p = self.parent.setdefault(a, a)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[a] = p
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _chart_labels(raster, domain_mask, sign):
    """Connected-component labels of one sign class restricted to the domain."""
    mask = (raster == sign) & domain_mask
    labels, count = ndimage.label(mask, structure=_FOUR_CONN)
    return labels, count


def _unique_pairs(a, b):
    """Distinct (a, b) pairs with both entries positive."""
    sel = (a > 0) & (b > 0)
    if not sel.any():
        return []
    key = a[sel].astype(np.int64) * (int(b.max()) + 1) + b[sel]
    uniq = np.unique(key)
    return [(int(k // (int(b.max()) + 1)), int(k % (int(b.max()) + 1))) for k in uniq]


def _count_components(plane, polar, annulus):
    """Stitch the plane and log-polar charts and classify components."""
    uf_c = _UnionFind()
    uf_e = _UnionFind()

    # stitch on the overlap annulus: same plane point, both charts
    (pc, pe), (qc, qe) = annulus
    for a, b in _unique_pairs(pc, qc):
        uf_c.union(("plane", a), ("polar", b))
    for a, b in _unique_pairs(pe, qe):
        uf_e.union(("plane", a), ("polar", b))

    # glue the theta = 0 / theta = 2 pi seam of the polar chart
    for a, b in polar["seam_pairs_contracting"]:
        uf_c.union(("polar", a), ("polar", b))
    for a, b in polar["seam_pairs_expanding"]:
        uf_e.union(("polar", a), ("polar", b))

    # the point at infinity lies in the blow-up closure: expanding labels
    # reaching the far edge are one region through it
    far_e = polar["far_expanding"]
    for a in far_e[1:]:
        uf_e.union(("polar", far_e[0]), ("polar", a))

    comp = {}
    for chart, data in (("plane", plane), ("polar", polar)):
        for lab in data["contracting_labels"]:
            root = uf_c.find((chart, int(lab)))
            info = comp.setdefault(root, {"interior": True, "noncompact": False})
            if chart == "polar":
                info["interior"] = False
                if int(lab) in polar["far_contracting"]:
                    info["noncompact"] = True
            elif int(lab) in plane["labels_outside_polygon"]:
                info["interior"] = False
    interior = sum(1 for v in comp.values() if v["interior"])
    noncompact = sum(1 for v in comp.values() if v["noncompact"] and not v["interior"])
    total = len(comp)
    compact = total - interior - noncompact

    roots_e = set()
    for chart, data in (("plane", plane), ("polar", polar)):
        for lab in data["expanding_labels"]:
            roots_e.add(uf_e.find((chart, int(lab))))
    return interior, noncompact, compact, total, len(roots_e)


def census_polygon(p: Polygon, resolution: int = 512, refine_depth: int = 4,
                   bounds: tuple[float, float, float, float] = (-6.0, -6.0, 6.0, 6.0),
                   cut_radius: float = 4.0, far_radius: float = 1.0e6,
                   guard: float = _GUARD,
                   n_label: int | None = None) -> RegionReport:
    """Count area-contracting/expanding regions of the n-step field for an
    arbitrary polygon on the compactified plane.

    The plane chart covers |M| <= ``cut_radius``; the log-polar chart covers
    cut_radius / 2 <= |M| <= ``far_radius``.  Components touching the far
    edge are the non-compact ones; expanding components there connect through
    the point at infinity.
    """
    if resolution < 16:
        raise ValueError("resolution must be at least 16")
    polar_bounds = (np.log(cut_radius / 2.0), 0.0, np.log(far_radius), 2.0 * np.pi)
    charts = {
        "plane": _ChartSigns(p, "plane", bounds, resolution, refine_depth, guard),
        "polar": _ChartSigns(p, "polar", polar_bounds, resolution, refine_depth, guard),
    }

    # deterministic annulus sample points for stitching
    radii = np.linspace(0.55 * cut_radius, 0.95 * cut_radius, 48)
    angles = (np.arange(1024) + 0.13) * (2.0 * np.pi / 1024.0)
    rr, aa = np.meshgrid(radii, angles, indexing="ij")
    ax = (rr * np.cos(aa)).ravel()
    ay = (rr * np.sin(aa)).ravel()

    def cell_index(cs: _ChartSigns, xs, ys):
        x0, y0, x1, y1 = cs.bounds
        i = np.floor((xs - x0) / cs._sx).astype(np.int64)
        j = np.floor((ys - y0) / cs._sy).astype(np.int64)
        ok = (i >= 0) & (i < cs.fine_res) & (j >= 0) & (j < cs.fine_res)
        return np.clip(i, 0, cs.fine_res - 1), np.clip(j, 0, cs.fine_res - 1), ok

    def plane_domain_mask(cs: _ChartSigns):
        res = cs.base_res
        x0, y0, x1, y1 = cs.bounds
        cx = x0 + (np.arange(res) + 0.5) * (x1 - x0) / res
        cy = y0 + (np.arange(res) + 0.5) * (y1 - y0) / res
        r2 = cx[:, None] ** 2 + cy[None, :] ** 2
        base = r2 <= cut_radius * cut_radius
        k = cs.fine_res // res
        return np.repeat(np.repeat(base, k, axis=0), k, axis=1)

    def clearly_outside_mask(cs: _ChartSigns):
        """Base cells outside the polygon by more than a two-cell margin.

        The first-step blow-up lines along the sidelines are removable slits
        of the composite field, so the inner component can overhang the
        boundary by a sliver; the margin keeps that overhang from flipping
        its classification while still catching genuinely exterior cells.
        """
        res = cs.base_res
        x0, y0, x1, y1 = cs.bounds
        cx = x0 + (np.arange(res) + 0.5) * (x1 - x0) / res
        cy = y0 + (np.arange(res) + 0.5) * (y1 - y0) / res
        gx, gy = np.meshgrid(cx, cy, indexing="ij")
        inside = _point_in_polygon(p, gx, gy)
        dist = _distance_to_boundary(p, gx, gy)
        margin = 2.0 * max((x1 - x0), (y1 - y0)) / res
        base = ~inside & (dist > margin)
        k = cs.fine_res // res
        return np.repeat(np.repeat(base, k, axis=0), k, axis=1)

    dom_plane = plane_domain_mask(charts["plane"])
    dom_polar = np.ones((charts["polar"].fine_res,) * 2, dtype=bool)
    outside_plane = clearly_outside_mask(charts["plane"])
    ann_u = np.log(rr).ravel()
    ann_th = np.mod(aa, 2.0 * np.pi).ravel()

    def level_counts(level):
        cs = charts["plane"]
        raster = cs.raster(level)
        lab_c, _ = _chart_labels(raster, dom_plane, -1)
        lab_e, _ = _chart_labels(raster, dom_plane, 1)
        i, j, ok = cell_index(cs, ax, ay)
        plane_meta = {
            "contracting_labels": np.unique(lab_c[lab_c > 0]),
            "expanding_labels": np.unique(lab_e[lab_e > 0]),
            "labels_outside_polygon": set(
                np.unique(lab_c[(lab_c > 0) & outside_plane]).tolist()),
        }
        ann_plane = (np.where(ok, lab_c[i, j], 0), np.where(ok, lab_e[i, j], 0))

        cs = charts["polar"]
        raster = cs.raster(level)
        lab_c, _ = _chart_labels(raster, dom_polar, -1)
        lab_e, _ = _chart_labels(raster, dom_polar, 1)
        i, j, ok = cell_index(cs, ann_u, ann_th)
        polar_meta = {
            "contracting_labels": np.unique(lab_c[lab_c > 0]),
            "expanding_labels": np.unique(lab_e[lab_e > 0]),
            "seam_pairs_contracting": _unique_pairs(lab_c[:, 0], lab_c[:, -1]),
            "seam_pairs_expanding": _unique_pairs(lab_e[:, 0], lab_e[:, -1]),
            "far_contracting": set(np.unique(lab_c[-1][lab_c[-1] > 0]).tolist()),
            "far_expanding": sorted(np.unique(lab_e[-1][lab_e[-1] > 0]).tolist()),
        }
        ann_polar = (np.where(ok, lab_c[i, j], 0), np.where(ok, lab_e[i, j], 0))
        return _count_components(plane_meta, polar_meta, (ann_plane, ann_polar))

    prev = level_counts(max(refine_depth - 1, 0)) if refine_depth > 0 else None
    final = level_counts(refine_depth)
    interior, noncompact, compact, total, expanding = final
    stable = prev is not None and prev == final
    return RegionReport(
        n=n_label if n_label is not None else p.n,
        expanding_count=expanding,
        contracting_interior=interior,
        contracting_compact=compact,
        contracting_noncompact=noncompact,
        total_contracting=total,
        resolution=resolution,
        refine_depth=refine_depth,
        stable=stable,
        previous_level_counts=prev[:4] if prev is not None else None,
    )


def census(n: int, resolution: int = 512, refine_depth: int = 4,
           **kwargs) -> RegionReport:
    """Region census for the regular n-gon."""
    if n < 3:
        raise ValueError("need n >= 3")
    return census_polygon(regular_ngon(n), resolution=resolution,
                          refine_depth=refine_depth, n_label=n, **kwargs)


def conjectured_counts(n: int) -> int:
    """Closed-form conjecture for the number of contracting regions."""
    if n < 3:
        raise ValueError("need n >= 3")
    if n % 2 == 1:
        r_star = 0 if n == 3 else 1
        return r_star + n * (n + 1) // 2
    return 1 + n * n // 2


def stretch_sweep(t_min: float = 1.0, t_max: float = 3.0, steps: int = 9,
                  resolution: int = 256, refine_depth: int = 3,
                  **kwargs) -> StretchSweepResult:
    """Census of the horizontally stretched equilateral over a factor grid."""
    if t_min < 1.0:
        raise ValueError("t_min must be >= 1")
    factors = list(np.linspace(t_min, t_max, steps))
    reports = []
    for t in factors:
        poly = affine_stretch(regular_ngon(3), t)
        reports.append(census_polygon(poly, resolution=resolution,
                                      refine_depth=refine_depth, n_label=3, **kwargs))
    return StretchSweepResult(factors=factors,
                              totals=[r.total_contracting for r in reports],
                              reports=reports)


def random_simple_ngon(n: int, rng: np.random.Generator,
                       radial_jitter: float = 0.35,
                       angular_jitter: float = 0.3) -> Polygon:
    """Star-shaped (hence simple) perturbation of the regular n-gon."""
    base = 2.0 * np.pi * np.arange(n) / n
    ang = base + angular_jitter * (2.0 * np.pi / n) * rng.uniform(-0.5, 0.5, n)
    rad = 1.0 + radial_jitter * rng.uniform(-1.0, 1.0, n)
    v = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
    v -= v.mean(axis=0)
    poly = Polygon(v)
    if signed_area(poly) < 0:
        poly = Polygon(v[::-1].copy())
    return poly


def regularity_comparison(n: int, trials: int, seed: int = 0,
                          resolution: int = 192, refine_depth: int = 2,
                          **kwargs) -> RegularityReport:
    """Empirical check that the regular n-gon maximizes the contracting count."""
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    regular = census(n, resolution=resolution, refine_depth=refine_depth, **kwargs)
    totals = []
    for _ in range(trials):
        poly = random_simple_ngon(n, rng)
        rep = census_polygon(poly, resolution=resolution,
                             refine_depth=refine_depth, n_label=n, **kwargs)
        totals.append(rep.total_contracting)
    return RegularityReport(n=n, regular_total=regular.total_contracting,
                            sample_totals=totals)


CSV_HEADER = ["n", "interior", "noncompact", "compact", "total",
              "expanding", "stable", "resolution"]


def report_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in reports:
        w.writerow([r.n, r.contracting_interior, r.contracting_noncompact,
                    r.contracting_compact, r.total_contracting,
                    r.expanding_count, "true" if r.stable else "false",
                    r.resolution])
    return buf.getvalue()
