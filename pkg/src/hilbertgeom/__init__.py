"""Hilbert metric geometry on bounded convex domains.

Distances come from the log cross-ratio of a point pair against its chord's
boundary exits.  On top of that sit closed-form rays and spheres, coarse
geometry probes (contraction maps, separated packings, corona gap scans),
and a constructive bounded-multiplicity cover of the plane realizing
asymptotic dimension at most 2.
"""

from .bodies import (
    Chord,
    ConvexBody,
    Disk,
    Ellipsoid,
    HalfspacePolytope,
    Polygon,
    Region,
    boundary_hit,
    boundary_hit_bisect,
    chord_through,
    classify,
    is_strictly_convex,
    load_body,
    validate_body,
)
from .coarse import (
    ContractionReport,
    CoronaProbeReport,
    PackingReport,
    contract,
    contraction_constant,
    corona_probe,
    flat_boundary_ray_bound,
    greedy_packing,
    higson_defect,
    verify_contraction,
)
from .cover import (
    ArcDecomposition,
    CoverPiece,
    Marker,
    MultiplicityReport,
    SphereLevel,
    build_cover,
    decompose_arc,
    decomposition_audit,
    first_marker,
    initial_decomposition,
    is_admissible_over,
    multiplicity_probe,
    piece_diameter,
    project_between_levels,
    refine_level,
    refine_to_depth,
)
from .errors import GeometryError
from .metric import (
    BallBoundary,
    ConcurrencyReport,
    RaySpec,
    ball_boundary,
    concurrency_defect,
    cross_ratio,
    distance,
    distance_pairs,
    geodesic_defect,
    ray_point,
    ray_spec,
    sphere_point,
    sphere_points,
)
from .sampling import sample_ball, sample_interior

__version__ = "0.1.0"

__all__ = [
    "ArcDecomposition",
    "BallBoundary",
    "Chord",
    "ConcurrencyReport",
    "ContractionReport",
    "ConvexBody",
    "CoronaProbeReport",
    "CoverPiece",
    "Disk",
    "Ellipsoid",
    "GeometryError",
    "HalfspacePolytope",
    "Marker",
    "MultiplicityReport",
    "PackingReport",
    "Polygon",
    "RaySpec",
    "Region",
    "SphereLevel",
    "ball_boundary",
    "boundary_hit",
    "boundary_hit_bisect",
    "build_cover",
    "chord_through",
    "classify",
    "concurrency_defect",
    "contract",
    "contraction_constant",
    "corona_probe",
    "cross_ratio",
    "decompose_arc",
    "decomposition_audit",
    "distance",
    "distance_pairs",
    "first_marker",
    "flat_boundary_ray_bound",
    "geodesic_defect",
    "greedy_packing",
    "higson_defect",
    "initial_decomposition",
    "is_admissible_over",
    "is_strictly_convex",
    "load_body",
    "multiplicity_probe",
    "piece_diameter",
    "project_between_levels",
    "ray_point",
    "ray_spec",
    "refine_level",
    "refine_to_depth",
    "sample_ball",
    "sample_interior",
    "sphere_point",
    "sphere_points",
    "validate_body",
    "verify_contraction",
]
