"""Extension operators built from bounded locally-identical maps.

Discrete models of C[0,1], C(M), and Hilbert space, smooth bump and
blid-map constructions over them, extension operators assembled from
segment families, and a numerical verification layer for every claimed
property.
"""

from .blids import (
    BlidBound,
    BlidMap,
    Clamp,
    Literal,
    ball_blid,
    band_blid,
    blid_bound,
    clamp_apply,
    epsilon_for,
    half_blid,
    scaled_apply,
    sup_blid,
)
from .bumps import BumpProfile, bump_d1, bump_eval, transition, transition_d1
from .extension import ContainmentError, ExtensionOperator, FamilyValidationError
from .geometry import (
    Ball,
    Band,
    HalfSpaceSplit,
    SegmentFamily,
    band_margin,
    contains,
    validate_ball_family,
    validate_band_family,
    validate_family,
)
from .spaces import (
    Grid,
    GridFunction,
    HVector,
    ShapeError,
    TargetValue,
    axpy,
    h_norm,
    integrate,
    sup_norm,
)
from .targets import (
    TargetMap,
    linear_functional,
    point_eval,
    pointwise_sin,
    quad_integral,
    quad_norm,
)
from .verify import (
    CheckReport,
    DerivEstimate,
    ProbeConfig,
    blid_law_check,
    bounded_scan,
    containment_check,
    dir_deriv,
    dir_deriv_ladder,
    oracle_1d,
    restriction_check,
    seam_probe,
    weight_partition_check,
)

__version__ = "0.1.0"
