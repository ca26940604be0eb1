"""Level-k representation theory of compact Lie groups, computed at desk scale."""

from ._kernels import BACKEND
from .affine import (
    AffineWeight,
    AlcoveReduction,
    alcove_points,
    count_regular_orbits,
    in_alcove,
    interior_points,
    reduce_to_alcove,
)
from .cartan import (
    AlgebraSpec,
    RootDatum,
    Weight,
    build_root_datum,
    dominant_conjugate,
    irrep_dimension,
    weight_multiplicities,
    weyl_elements,
)
from .dirac import (
    DiracBundle,
    cubic_dirac,
    dirac_bundle,
    dirac_residuals,
    family_at,
    kostant_cohomology,
    loop_residuals,
    orbit_distance,
    orbit_scan,
    scan_grid,
    thom_deformation,
    verify_alt1,
)
from .errors import (
    CapExceededError,
    ConfigurationError,
    DomainError,
    InvariantError,
    RegularityError,
    VerlindeKitError,
)
from .frame import build_frame
from .kac import QSeries, TorusElement, character, kac_denominator, kac_numerator
from .reps import build_irrep, build_loop_spinors, build_spinors
from .spectral import FlowRecord, TorusTwisting, circle_flow, torus_class_census, torus_flow
from .twisted import TwistedAffineDatum, build_twisted_datum, shift_identity, twisted_alcove_points
from .verlinde import (
    FusionTable,
    duality_pairing,
    fuse,
    fusion_table,
    restrict_to_torus,
    s_matrix,
    tensor_decompose,
    verify_fusion,
)

__version__ = "0.1.0"

__all__ = [
    "AffineWeight",
    "AlcoveReduction",
    "AlgebraSpec",
    "BACKEND",
    "CapExceededError",
    "ConfigurationError",
    "DiracBundle",
    "DomainError",
    "FlowRecord",
    "FusionTable",
    "InvariantError",
    "QSeries",
    "RegularityError",
    "RootDatum",
    "TorusElement",
    "TorusTwisting",
    "TwistedAffineDatum",
    "VerlindeKitError",
    "Weight",
    "alcove_points",
    "build_frame",
    "build_irrep",
    "build_loop_spinors",
    "build_root_datum",
    "build_spinors",
    "build_twisted_datum",
    "character",
    "circle_flow",
    "count_regular_orbits",
    "cubic_dirac",
    "dirac_bundle",
    "dirac_residuals",
    "dominant_conjugate",
    "duality_pairing",
    "family_at",
    "fuse",
    "fusion_table",
    "in_alcove",
    "interior_points",
    "irrep_dimension",
    "kac_denominator",
    "kac_numerator",
    "kostant_cohomology",
    "loop_residuals",
    "orbit_distance",
    "orbit_scan",
    "reduce_to_alcove",
    "restrict_to_torus",
    "s_matrix",
    "scan_grid",
    "shift_identity",
    "tensor_decompose",
    "thom_deformation",
    "torus_class_census",
    "torus_flow",
    "twisted_alcove_points",
    "verify_alt1",
    "verify_fusion",
    "weight_multiplicities",
    "weyl_elements",
]
