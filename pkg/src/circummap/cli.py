"""Command-line interface: orbit iteration, similarity extraction, locus
evaluation and tracing, the region census, the stretch sweep, and the named
verification suites.

Exit codes: 0 success, 1 verification failure, 2 bad input, 3 degenerate
geometry.  All numbers print with 17 significant digits.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import dynamics, loci, render
from .census import census, report_csv, sample_field, stretch_sweep
from .geometry import (GeometryError, MapConfig, Polygon, affine_stretch,
                       regular_ngon)

__all__ = ["main"]

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_BAD_INPUT = 2
EXIT_DEGENERATE = 3


class _BadInput(Exception):
    pass


def _fmt_num(v) -> str:
    if isinstance(v, float):
        if math.isnan(v):
            return "NaN"
        if math.isinf(v):
            return "Infinity" if v > 0 else "-Infinity"
        return f"{v:.17g}"
    return str(v)


def _dump_json(obj, indent=0) -> str:
    """JSON text with floats at 17 significant digits, deterministic order."""
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  "{k}": {_dump_json(v, indent + 1)}'
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        seq = list(obj)
        if not seq:
            return "[]"
        flat = all(isinstance(v, (int, float, bool, str, type(None))) for v in seq)
        if flat:
            return "[" + ", ".join(_dump_json(v) for v in seq) + "]"
        items = [f"{pad}  {_dump_json(v, indent + 1)}" for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_num(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _dump_json(obj.tolist(), indent)
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _emit(text: str, path: str | None):
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_point(text: str) -> tuple[float, float]:
    try:
        parts = [float(t) for t in text.split(",")]
    except ValueError as exc:
        raise _BadInput(f"cannot parse point {text!r}") from exc
    if len(parts) != 2:
        raise _BadInput(f"point needs two coordinates, got {text!r}")
    return parts[0], parts[1]


def _parse_shape(text: str) -> Polygon:
    if text.startswith("regular:"):
        try:
            n = int(text.split(":", 1)[1])
        except ValueError as exc:
            raise _BadInput(f"bad vertex count in {text!r}") from exc
        if n < 3:
            raise _BadInput("regular polygon needs at least 3 vertices")
        return regular_ngon(n)
    if text.startswith("file:"):
        path = text.split(":", 1)[1]
        try:
            with open(path) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise _BadInput(f"cannot read polygon file {path!r}: {exc}") from exc
        try:
            return Polygon(np.asarray(data, dtype=float))
        except (ValueError, TypeError) as exc:
            raise _BadInput(f"bad polygon data in {path!r}: {exc}") from exc
    raise _BadInput(f"shape must be regular:N or file:PATH, got {text!r}")


def _polygon_json(p: Polygon):
    return [[float(x), float(y)] for x, y in p.vertices]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_iterate(args) -> int:
    p = _parse_shape(args.shape)
    m = _parse_point(args.m)
    if args.steps < 0:
        raise _BadInput("steps must be nonnegative")
    orbit = dynamics.iterate(p, m, args.steps)
    out = {
        "m": [m[0], m[1]],
        "steps_requested": args.steps,
        "steps_completed": len(orbit.iterates) - 1,
        "iterates": [_polygon_json(q) for q in orbit.iterates],
    }
    if orbit.failure is not None:
        step, vertex = orbit.failure
        out["failure"] = {"step": step, "vertex": vertex}
    if args.json or not args.svg:
        _emit(_dump_json(out), args.json)
    if args.svg:
        _emit(render.render_orbit(orbit), args.svg)
    if orbit.failure is not None:
        return EXIT_DEGENERATE
    return EXIT_OK


def _cmd_similarity(args) -> int:
    p = _parse_shape(args.shape)
    m = _parse_point(args.m)
    sp = dynamics.extract_similarity(p, m)
    _emit(_dump_json({"s": sp.s, "alpha": sp.alpha,
                      "center": [float(sp.center[0]), float(sp.center[1])],
                      "residual": sp.residual}), args.json)
    return EXIT_OK


def _cmd_locus_eval(args) -> int:
    try:
        curve = loci.implicit_curve(args.family)
    except ValueError as exc:
        raise _BadInput(str(exc)) from exc
    pt = _parse_point(args.point)
    _emit(_dump_json({"family": args.family, "point": [pt[0], pt[1]],
                      "value": curve.evaluate(pt)}), args.json)
    return EXIT_OK


def _cmd_locus_trace(args) -> int:
    p = _parse_shape(args.shape)
    try:
        window = tuple(float(t) for t in args.window.split(","))
    except ValueError as exc:
        raise _BadInput(f"cannot parse window {args.window!r}") from exc
    if len(window) != 4:
        raise _BadInput("window needs X0,Y0,X1,Y1")
    if args.resolution < 8:
        raise _BadInput("resolution too small")
    contours = loci.trace_s1_locus(p, window, resolution=args.resolution)
    out = {
        "window": list(window),
        "resolution": args.resolution,
        "contours": [[[float(x), float(y)] for x, y in c] for c in contours],
    }
    _emit(_dump_json(out), args.json)
    return EXIT_OK


def _cmd_census(args) -> int:
    if args.n < 3:
        raise _BadInput("need n >= 3")
    ns = range(3, args.n + 1) if args.all_up_to else [args.n]
    reports = [census(n, resolution=args.resolution,
                                 refine_depth=args.refine) for n in ns]
    _emit(report_csv(reports), args.csv)
    if args.svg:
        p = regular_ngon(args.n)
        plane = sample_field(p, "plane", resolution=args.map_resolution)
        far = sample_field(
            p, "polar",
            bounds=(math.log(2.0), 0.0, math.log(1.0e6), 2.0 * math.pi),
            resolution=args.map_resolution)
        _emit(render.render_hemisphere(plane, far), args.svg)
    return EXIT_OK


def _cmd_stretch_sweep(args) -> int:
    if args.t_min < 1.0 or args.t_max < args.t_min or args.steps < 2:
        raise _BadInput("need 1 <= t-min <= t-max and steps >= 2")
    sweep = stretch_sweep(args.t_min, args.t_max, args.steps,
                                     resolution=args.resolution,
                                     refine_depth=args.refine)
    out = {
        "factors": sweep.factors,
        "totals": sweep.totals,
        "stable": [r.stable for r in sweep.reports],
        "transitions": [
            [sweep.factors[k], sweep.factors[k + 1]]
            for k in range(len(sweep.totals) - 1)
            if sweep.totals[k] != sweep.totals[k + 1]
        ],
    }
    _emit(_dump_json(out), args.json)
    if args.svg:
        polys = [affine_stretch(regular_ngon(3), t) for t in sweep.factors]
        _emit(render.render_stretch_strip(polys, sweep.reports), args.svg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------

_TABLE1 = {
    3: (0, 6, 0, 6),
    4: (1, 4, 4, 9),
    5: (1, 10, 5, 16),
    6: (1, 6, 12, 19),
    7: (1, 14, 14, 29),
    8: (1, 8, 24, 33),
}


def _suite_table1(args):
    failures = []
    rows = []
    for n in range(3, args.n_max + 1):
        rep = census(n, resolution=args.resolution,
                                refine_depth=args.refine)
        expected = _TABLE1.get(n)
        got = rep.counts()
        ok = expected is not None and got == expected and rep.stable
        rows.append({"n": n, "counts": list(got),
                     "expected": list(expected) if expected else None,
                     "stable": rep.stable, "pass": ok})
        if not ok:
            failures.append(n)
    return {"suite": "table1", "rows": rows, "pass": not failures}


def _suite_closed_forms(args):
    rng = np.random.default_rng(7)
    convention, errors = dynamics.calibrate_ratio_convention()
    worst_s = 0.0
    worst_cos = 0.0
    for _ in range(100):
        t, m = dynamics.random_nondegenerate_instance(rng)
        sp = dynamics.extract_similarity(t, m)
        worst_s = max(worst_s, abs(dynamics.triangle_ratio_closed_form(t, m) - sp.s))
        worst_cos = max(worst_cos,
                        abs(dynamics.triangle_cos_alpha_closed_form(t, m)
                            - math.cos(sp.alpha)))
    ok = worst_s < 1e-9 and worst_cos < 1e-9
    return {"suite": "closed-forms", "convention_constant": convention,
            "calibration_errors": {str(k): v for k, v in errors.items()},
            "max_ratio_error": worst_s, "max_cos_error": worst_cos, "pass": ok}


def _suite_periodicity(args):
    results = []
    tri = regular_ngon(3)
    for pt in loci.equilateral_fixed_points().points:
        sp = dynamics.extract_similarity(tri, pt)
        period = dynamics.detect_period(tri, pt, 6)
        results.append({"point": [float(pt[0]), float(pt[1])],
                        "s": sp.s, "alpha": sp.alpha, "period": period,
                        "pass": (abs(sp.s - 1) < 1e-9
                                 and abs(sp.alpha) < 1e-9 and period == 3)})
    centroid_period = dynamics.detect_period(tri, (0.0, 0.0), 6)
    results.append({"point": [0.0, 0.0], "period": centroid_period,
                    "pass": centroid_period == 2})
    ok = all(r["pass"] for r in results)
    return {"suite": "periodicity", "results": results, "pass": ok}


def _suite_inverse(args):
    from .geometry import circumcenter_map, inverse_circumcenter_map
    rng = np.random.default_rng(11)
    worst = 0.0
    trials = 0
    for _ in range(1000):
        n = int(rng.integers(3, 9))
        p, m = dynamics.random_nondegenerate_instance(rng, n=n)
        q = circumcenter_map(p, m)
        back = inverse_circumcenter_map(q, m)
        err = float(np.abs(back.vertices - p.vertices).max()) / p.diameter
        worst = max(worst, err)
        trials += 1
    ok = worst < 1e-10
    return {"suite": "inverse", "trials": trials,
            "max_roundtrip_error": worst, "pass": ok}


def _suite_lines(args):
    rows = []
    for n in (3, 4, 5, 6):
        p = regular_ngon(n)
        report = loci.verify_alpha_zero_lines(p)
        worst = max(r[1] for r in report)
        tol = 1e-6 if n <= 4 else 1e-4
        rows.append({"n": n, "max_residual": worst, "tolerance": tol,
                     "pass": worst < tol})
    ok = all(r["pass"] for r in rows)
    return {"suite": "lines", "rows": rows, "pass": ok}


_SUITES = {
    "table1": _suite_table1,
    "closed-forms": _suite_closed_forms,
    "periodicity": _suite_periodicity,
    "inverse": _suite_inverse,
    "lines": _suite_lines,
}


def _cmd_verify(args) -> int:
    result = _SUITES[args.suite](args)
    _emit(_dump_json(result), args.json)
    return EXIT_OK if result["pass"] else EXIT_VERIFY


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circummap",
        description="Circumcenter map on polygons: orbits, similarity "
                    "parameters, locus curves, and the region census.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shape(sp):
        sp.add_argument("--shape", required=True,
                        help="regular:N or file:PATH (JSON [[x,y],...])")

    sp = sub.add_parser("iterate", help="iterate the map and record the orbit")
    add_shape(sp)
    sp.add_argument("--m", required=True, help="center point X,Y")
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--svg", help="write orbit figure here")
    sp.add_argument("--json", help="write orbit record here (default stdout)")
    sp.set_defaults(func=_cmd_iterate)

    sp = sub.add_parser("similarity", help="extract (s, alpha) after n steps")
    add_shape(sp)
    sp.add_argument("--m", required=True, help="center point X,Y")
    sp.add_argument("--json", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_similarity)

    locus = sub.add_parser("locus", help="closed-form loci").add_subparsers(
        dest="locus_command", required=True)
    sp = locus.add_parser("eval", help="evaluate a closed-form locus polynomial")
    sp.add_argument("--family", required=True,
                    help="one of: " + ", ".join(sorted(loci.CURVE_FAMILIES)))
    sp.add_argument("--point", required=True, help="X,Y")
    sp.add_argument("--json", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_locus_eval)
    sp = locus.add_parser("trace", help="trace the s=1 contour numerically")
    add_shape(sp)
    sp.add_argument("--window", required=True, help="X0,Y0,X1,Y1")
    sp.add_argument("--resolution", type=int, default=256)
    sp.add_argument("--json", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_locus_trace)

    sp = sub.add_parser("census", help="region census for the regular n-gon")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--resolution", type=int, default=512)
    sp.add_argument("--refine", type=int, default=4)
    sp.add_argument("--all-up-to", action="store_true",
                    help="emit rows for 3..n instead of n alone")
    sp.add_argument("--csv", help="output path (default stdout)")
    sp.add_argument("--svg", help="write hemisphere figure here")
    sp.add_argument("--map-resolution", type=int, default=96,
                    help="cell resolution of the hemisphere figure")
    sp.set_defaults(func=_cmd_census)

    sp = sub.add_parser("stretch-sweep",
                        help="census of the stretched equilateral")
    sp.add_argument("--t-min", type=float, default=1.0)
    sp.add_argument("--t-max", type=float, default=3.0)
    sp.add_argument("--steps", type=int, default=9)
    sp.add_argument("--resolution", type=int, default=256)
    sp.add_argument("--refine", type=int, default=3)
    sp.add_argument("--json", help="output path (default stdout)")
    sp.add_argument("--svg", help="write strip figure here")
    sp.set_defaults(func=_cmd_stretch_sweep)

    sp = sub.add_parser("verify", help="run a named verification suite")
    sp.add_argument("--suite", required=True, choices=sorted(_SUITES))
    sp.add_argument("--n-max", type=int, default=8,
                    help="largest n for the table1 suite")
    sp.add_argument("--resolution", type=int, default=512)
    sp.add_argument("--refine", type=int, default=4)
    sp.add_argument("--json", help="output path (default stdout)")
    sp.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, which matches the bad-input code
        return EXIT_BAD_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except _BadInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (GeometryError, dynamics.DegenerateOrbitError,
            dynamics.DegeneratePositionError,
            dynamics.InconsistentSimilarityError) as exc:
        print(f"degenerate geometry: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
