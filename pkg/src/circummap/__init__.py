"""Circumcenter map on polygons: geometry, similarity dynamics, locus
curves, region census, and SVG rendering."""

from .geometry import (
    CollinearError,
    DegenerateVertexError,
    GeometryError,
    MapConfig,
    ParallelPerpendicularsError,
    Polygon,
    ZeroLengthSideError,
    affine_stretch,
    antipedal_polygon,
    centroid,
    circumcenter,
    circumcenter_map,
    homothety,
    inverse_circumcenter_map,
    pedal_polygon,
    regular_ngon,
    rotate_about,
    signed_area,
)
from .dynamics import (
    DegenerateOrbitError,
    DegeneratePositionError,
    InconsistentSimilarityError,
    OrbitRecord,
    ShapeDescriptor,
    SimilarityParams,
    calibrate_ratio_convention,
    descriptor_distance,
    detect_period,
    extract_similarity,
    hausdorff_distance,
    iterate,
    repeat_similarity_check,
    shape_descriptor,
    triangle_cos_alpha_closed_form,
    triangle_ratio_closed_form,
)
from .loci import (
    CURVE_FAMILIES,
    ImplicitCurve,
    alpha_zero_lines,
    equilateral_fixed_points,
    eval_equilateral_alpha_cubic,
    eval_equilateral_sextic,
    eval_square_alpha_quartic,
    eval_square_octic,
    implicit_curve,
    trace_s1_locus,
    verify_alpha_zero_lines,
)
from .census import (
    FieldGrid,
    RegionReport,
    RegularityReport,
    StretchSweepResult,
    census,
    census_polygon,
    conjectured_counts,
    log_s_values,
    regularity_comparison,
    report_csv,
    sample_field,
    stretch_sweep,
)
from .render import (
    RenderSpec,
    render_hemisphere,
    render_orbit,
    render_region_map,
    render_stretch_strip,
)
from .cli import main

__version__ = "0.1.0"
