"""lengthlab: length metrics and Lipschitz sheaf checks on finite spaces.

The toolkit realizes, at desk scale, the circle of ideas connecting path
metrics, approximate midpoints, and the locality behavior of 1-Lipschitz
functions: a finite metric space is (approximately) a length space exactly
when its cover-local 1-Lipschitz fields are globally 1-Lipschitz, and both
sides of that equivalence are computed here with explicit witnesses.
Planar domains with obstacles supply the worked counterexamples.
"""

from .errors import (
    BisectionBoundError,
    EmptySampleError,
    InfiniteDistanceError,
    InputFormatError,
    InvalidPathError,
    LengthLabError,
    MidpointNotFoundError,
    NotLipschitzError,
    UnknownPointError,
)
from .extreal import INF
from .spaces import (
    Ball,
    FiniteMetricSpace,
    MetricValidationReport,
    ball_members,
    space_from_json,
    space_to_json,
    validate_wide_metric,
)
from .paths import Path, path_coords, path_length, refine_path, validate_path
from .lengthmetric import (
    BallIntersectionReport,
    LengthMetricResult,
    LengthSpaceReport,
    StepGraph,
    approximate_midpoint,
    bisect_geodesic,
    check_ball_intersection,
    induced_length_metric,
    is_length_space,
    step_graph,
)
from .sheaf import (
    Cover,
    ScalarField,
    SheafVerdict,
    bump_witness,
    chain_metric,
    dual_distance,
    dual_distance_over,
    is_lip1_loc,
    lipschitz_constant,
    mcshane_extend,
    sheaf_check,
)
from .domains import (
    GridSample,
    PlanarDomain,
    Polygon,
    Segment,
    STENCIL_RATIO,
    build_trial_family,
    clearance,
    contains,
    convex_box,
    domain_from_json,
    domain_to_json,
    euclidean_length_metric,
    punctured_plane,
    sample_grid,
    shortest_stencil_path,
    slit_plane,
    verify_dual_length_identity,
)
from .demo import demo_convex, demo_punctured, demo_slit, run_demo
from .svgout import render_domain_svg

__version__ = "0.1.0"

__all__ = [
    "INF",
    "Ball",
    "BallIntersectionReport",
    "BisectionBoundError",
    "Cover",
    "EmptySampleError",
    "FiniteMetricSpace",
    "GridSample",
    "InfiniteDistanceError",
    "InputFormatError",
    "InvalidPathError",
    "LengthLabError",
    "LengthMetricResult",
    "LengthSpaceReport",
    "MetricValidationReport",
    "MidpointNotFoundError",
    "NotLipschitzError",
    "Path",
    "PlanarDomain",
    "Polygon",
    "ScalarField",
    "Segment",
    "SheafVerdict",
    "STENCIL_RATIO",
    "StepGraph",
    "UnknownPointError",
    "approximate_midpoint",
    "ball_members",
    "bisect_geodesic",
    "build_trial_family",
    "bump_witness",
    "chain_metric",
    "check_ball_intersection",
    "clearance",
    "contains",
    "convex_box",
    "demo_convex",
    "demo_punctured",
    "demo_slit",
    "domain_from_json",
    "domain_to_json",
    "dual_distance",
    "dual_distance_over",
    "euclidean_length_metric",
    "induced_length_metric",
    "is_length_space",
    "is_lip1_loc",
    "lipschitz_constant",
    "mcshane_extend",
    "path_coords",
    "path_length",
    "punctured_plane",
    "refine_path",
    "render_domain_svg",
    "run_demo",
    "sample_grid",
    "sheaf_check",
    "shortest_stencil_path",
    "slit_plane",
    "space_from_json",
    "space_to_json",
    "step_graph",
    "validate_path",
    "validate_wide_metric",
    "verify_dual_length_identity",
]
