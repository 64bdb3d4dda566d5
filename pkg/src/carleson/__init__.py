"""Dyadic and continuum Carleson functionals, nontangential maxima, and the
pairing duality between them, with extremizer constructions and a small
numerical oracle for cross-checking."""

from .duality import (
    MultiplierReport,
    PairingReport,
    StoppingForest,
    check_pairing_upper,
    extremal_f_for_carleson,
    extremal_g_for_ntmax,
    extremal_g_for_ntmax_p1,
    multiplier_norm_estimate,
    pairing,
    pairing_grid,
    stopping_forest,
    UPPER_BOUND_CONSTANT,
)
from .fields import (
    BoundaryFunction,
    DyadicField,
    ExponentConfig,
    GridFunction,
    boundary_lp_norm,
    conjugate,
    grid_from_field,
    random_field,
    random_grid,
    refine,
    to_sequence,
    whitney_average,
)
from .functionals import (
    area_integral,
    carleson_continuum,
    carleson_dyadic,
    carleson_r_dyadic,
    maximal_continuum,
    maximal_dyadic,
    modified_carleson_norm,
    nt_max_continuum,
    nt_max_dyadic,
)
from .geometry import (
    DyadicCube,
    GeometryConfig,
    GridCube,
    TreeConfig,
    ancestors_of_point,
    carleson_box,
    children,
    continuum_whitney,
    test_cube_family,
    whitney_region,
)
from .oracle import (
    OracleConfig,
    dual_norm_wrt_cball,
    dual_norm_wrt_ntball,
    exhaustive_dual_norm,
    oracle_vs_extremizer,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryFunction",
    "DyadicCube",
    "DyadicField",
    "ExponentConfig",
    "GeometryConfig",
    "GridCube",
    "GridFunction",
    "MultiplierReport",
    "OracleConfig",
    "PairingReport",
    "StoppingForest",
    "TreeConfig",
    "UPPER_BOUND_CONSTANT",
    "ancestors_of_point",
    "area_integral",
    "boundary_lp_norm",
    "carleson_box",
    "carleson_continuum",
    "carleson_dyadic",
    "carleson_r_dyadic",
    "check_pairing_upper",
    "children",
    "conjugate",
    "continuum_whitney",
    "dual_norm_wrt_cball",
    "dual_norm_wrt_ntball",
    "exhaustive_dual_norm",
    "extremal_f_for_carleson",
    "extremal_g_for_ntmax",
    "extremal_g_for_ntmax_p1",
    "grid_from_field",
    "maximal_continuum",
    "maximal_dyadic",
    "modified_carleson_norm",
    "multiplier_norm_estimate",
    "nt_max_continuum",
    "nt_max_dyadic",
    "oracle_vs_extremizer",
    "pairing",
    "pairing_grid",
    "random_field",
    "random_grid",
    "refine",
    "stopping_forest",
    "test_cube_family",
    "to_sequence",
    "whitney_average",
    "whitney_region",
]
