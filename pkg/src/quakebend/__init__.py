"""Bending deformations of surface-group representations into PSL(2, C)."""

from .moebius import (
    MoebiusElement,
    ProjectivePoint,
    IsometryClass,
    compose,
    apply,
    trace_sq,
    classify,
    fixed_points,
    elliptic_about,
    loxodromic_about,
    conj_star,
)
from .surface import (
    PantsDecomposition,
    FNCoordinates,
    SurfaceGroupRep,
    CharacterVector,
    standard_pants,
    fn_to_rep,
    crossing_data,
    coordinate_words,
    character,
)
from .framed import (
    WeightedMultiloop,
    Framing,
    FramedRep,
    canonical_framing,
    validate_framing,
    extend_framing,
    swap_framing,
    in_Xp,
    in_Xr,
    framed_character,
)
from .bending import (
    BentPair,
    AxisSystem,
    bend,
    quakebend,
    complexified_bend,
    support_axes,
    unbend,
)
from .hyperbolic import (
    PointH3,
    PiecewiseGeodesic,
    Geodesic,
    dist_h3,
    shortcut_curve,
    certify_quasigeodesic,
    empirical_qi_constants,
    find_violation,
    axis_in_h3,
)
from .experiments import (
    Thresholds,
    LengthRule,
    SequenceSpec,
    ConvergenceReport,
    properness_sweep,
    pinch_experiment,
    injectivity_scan,
    holomorphy_check,
    trace_identity_check,
    noninjectivity_witness,
    framed_properness_sweep,
)

__version__ = "0.1.0"
