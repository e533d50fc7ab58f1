"""Synthetic Lorentzian geometry on metric spaces with causal structure.

The package works with spaces (X, d, <<, <=, tau): a metric space carrying
chronological and causal relations and a time-separation function.  It
measures tau-length of causal polylines, finds and certifies maximizing
curves, audits the defining axioms, compares triangles against constant-
curvature model planes to bound timelike curvature, and detects curve
branching — on exact model spaces, finite causal sets, cone-field lattices
and a family of built-in singular examples.
"""

from .exttime import INF, ext_add, ext_sub, is_valid
from .core import (
    SpaceHandle,
    PolylineCurve,
    polyline,
    future_ordered_points,
    check_causal,
    segment_taus,
    tau_length,
    CharacterReport,
    causal_character,
    MaximalityReport,
    is_maximal,
    reparametrize_by_tau,
    AuditReport,
    audit_axioms,
    PushUpReport,
    push_up_audit,
)
from .models import (
    model_r,
    timelike_diameter,
    model_chron,
    model_caus,
    model_tau,
    model_geodesic,
    model_handle,
    realizable,
    ModelTriangle,
    realize_triangle,
    side_point,
    comparison_tau,
    hyperbolic_angle,
)
from .finite import (
    FiniteCausalSpace,
    finite_handle,
    causal_set_geodesics,
    space_links,
    TopologyReport,
    topology_report,
    LadderReport,
    ladder_report,
    FiniteAuditReport,
    verify_pls,
    parse_finite_space,
    seven_point_space,
    two_point_space,
)
from .spacetimes import (
    MinkowskiPlane,
    CylinderPlane,
    BubblingPlane,
    InteriorPlane,
    ConePlane,
    builtin_plane,
    minkowski_handle,
    cylinder_handle,
    interior_handle,
    schwarzschild_family,
    Funnel,
    funnel_handle,
    BoundaryCurve,
    null_boundary,
    bubbling_left_exit,
    bubbling_nu,
    bubbling_right_exit,
)
from .lattice import (
    CausalLattice,
    build_lattice,
    lattice_tau,
    extract_maximizer,
    save_lattice,
    load_lattice,
)
from .compare import (
    TriangleInstance,
    triangle_from_curves,
    build_triangle,
    ComparisonVerdict,
    CurvatureWitness,
    certify_curvature_bound,
    BranchReport,
    detect_branching,
    ConsistencyReport,
    nonbranching_crosscheck,
    ScanEntry,
    SingularityReport,
    singularity_scan,
    flat_triangle_family,
    lattice_triangle_family,
    funnel_triangle_family,
    schwarzschild_triangle_family,
)
from .scenes import (
    DEFAULT_SEED,
    EXAMPLE_IDS,
    SceneError,
    SceneOutcome,
    run_scene,
    reproduce_example,
)

__version__ = "0.1.0"

__all__ = [
    "INF", "ext_add", "ext_sub", "is_valid",
    "SpaceHandle", "PolylineCurve", "polyline", "future_ordered_points",
    "check_causal", "segment_taus", "tau_length",
    "CharacterReport", "causal_character",
    "MaximalityReport", "is_maximal", "reparametrize_by_tau",
    "AuditReport", "audit_axioms", "PushUpReport", "push_up_audit",
    "model_r", "timelike_diameter", "model_chron", "model_caus", "model_tau",
    "model_geodesic", "model_handle", "realizable", "ModelTriangle",
    "realize_triangle", "side_point", "comparison_tau", "hyperbolic_angle",
    "FiniteCausalSpace", "finite_handle", "causal_set_geodesics", "space_links",
    "TopologyReport", "topology_report", "LadderReport", "ladder_report",
    "FiniteAuditReport", "verify_pls", "parse_finite_space",
    "seven_point_space", "two_point_space",
    "MinkowskiPlane", "CylinderPlane", "BubblingPlane", "InteriorPlane",
    "ConePlane", "builtin_plane", "minkowski_handle", "cylinder_handle",
    "interior_handle", "schwarzschild_family", "Funnel", "funnel_handle",
    "BoundaryCurve", "null_boundary",
    "bubbling_left_exit", "bubbling_nu", "bubbling_right_exit",
    "CausalLattice", "build_lattice", "lattice_tau", "extract_maximizer",
    "save_lattice", "load_lattice",
    "TriangleInstance", "triangle_from_curves", "build_triangle",
    "ComparisonVerdict", "CurvatureWitness", "certify_curvature_bound",
    "BranchReport", "detect_branching",
    "ConsistencyReport", "nonbranching_crosscheck",
    "ScanEntry", "SingularityReport", "singularity_scan",
    "flat_triangle_family", "lattice_triangle_family",
    "funnel_triangle_family", "schwarzschild_triangle_family",
    "DEFAULT_SEED", "EXAMPLE_IDS", "SceneError", "SceneOutcome",
    "run_scene", "reproduce_example",
]
