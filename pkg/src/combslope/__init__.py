"""combslope: comb domains, walk-on-spheres harmonic measure, slope intervals."""

__version__ = "0.1.0"

from .analyzer import (
    LimitPair,
    OmegaProfile,
    ProfilePoint,
    SlopeInterval,
    TailWindow,
    calibrate_widths,
    slope_interval_from_limits,
    tail_extrema,
    verify_construction,
)
from .comb import (
    CombDomain,
    SequencePlan,
    SurgeryVariant,
    assign_widths,
    boundary_distance,
    build_comb,
    classify_hit,
    midpoints,
    plan_backward,
    plan_backward_special,
    plan_forward,
    plan_pseudo_strip,
    pseudo_strip,
    surgery,
    witness_rect,
)
from .exact import (
    GridProblem,
    disk_arc_measure,
    grid_laplace_measure,
    strip_upper_measure,
)
from .geometry import (
    BoundaryArc,
    HalfLine,
    RectWitness,
    TangentRay,
    level_set_arc,
    mobius_to_zero,
    slope_of,
    tangent_ray,
)
from .semigroup import (
    HalfPlaneModel,
    SemigroupClass,
    StripModel,
    Trajectory,
    classify_domain,
    slope_minus,
    slope_plus,
    trajectory,
)
from .wos import (
    MeasureEstimate,
    WosParams,
    estimate_profile,
    estimate_upper_measure,
)

__all__ = [
    "BoundaryArc",
    "CombDomain",
    "GridProblem",
    "HalfLine",
    "HalfPlaneModel",
    "LimitPair",
    "MeasureEstimate",
    "OmegaProfile",
    "ProfilePoint",
    "RectWitness",
    "SemigroupClass",
    "SequencePlan",
    "SlopeInterval",
    "StripModel",
    "SurgeryVariant",
    "TailWindow",
    "TangentRay",
    "Trajectory",
    "WosParams",
    "assign_widths",
    "boundary_distance",
    "build_comb",
    "calibrate_widths",
    "classify_domain",
    "classify_hit",
    "disk_arc_measure",
    "estimate_profile",
    "estimate_upper_measure",
    "grid_laplace_measure",
    "level_set_arc",
    "midpoints",
    "mobius_to_zero",
    "plan_backward",
    "plan_backward_special",
    "plan_forward",
    "plan_pseudo_strip",
    "pseudo_strip",
    "slope_interval_from_limits",
    "slope_minus",
    "slope_of",
    "slope_plus",
    "strip_upper_measure",
    "surgery",
    "tail_extrema",
    "tangent_ray",
    "trajectory",
    "verify_construction",
    "witness_rect",
]
