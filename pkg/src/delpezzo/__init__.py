"""Exact delta-invariant bounds for two del Pezzo surfaces.

The library computes, in exact rational arithmetic, parametric Zariski
decompositions, volumes, S-invariants and their refinements at marked
points, per-flag lower/upper bounds on the delta-invariant, their global
assembly over case lists, and the resulting stability-range thresholds.
"""

from .blowup import BlowupError, BlowupScript, derive_model, load_script
from .cone import ConeError, is_nef, is_pseudoeffective, pseff_threshold
from .corenum import (
    CoreError,
    LinearFraction,
    NotRepresentableError,
    PiecewiseFn,
    Poly,
    Rat,
    fmt,
    pw_integrate,
    pw_min,
    rat,
)
from .delta import (
    BoundFn,
    DeltaCase,
    DeltaError,
    GlobalDelta,
    assemble_global,
    az_bounds,
    az_lower_bound,
    flag_bound,
    point_bound,
    r_threshold,
)
from .invariants import (
    FlagResult,
    InvariantError,
    flag_log_discrepancy,
    flag_result,
    point_discrepancy,
    s_value,
    s_wq,
    volume_fn,
)
from .surface import (
    DivisorClass,
    IntersectionForm,
    MarkedPoint,
    ModelError,
    SurfaceModel,
    load_model,
    validate,
)
from .zariski import (
    Decomposition,
    NotPseudoeffectiveError,
    OracleInconsistencyError,
    ZariskiError,
    ZariskiPiece,
    zariski_fixed,
    zariski_oracle,
    zariski_sweep,
)

__version__ = "1.0.0"

__all__ = [
    "BlowupError",
    "BlowupScript",
    "BoundFn",
    "ConeError",
    "CoreError",
    "Decomposition",
    "DeltaCase",
    "DeltaError",
    "DivisorClass",
    "FlagResult",
    "GlobalDelta",
    "IntersectionForm",
    "InvariantError",
    "LinearFraction",
    "MarkedPoint",
    "ModelError",
    "NotPseudoeffectiveError",
    "NotRepresentableError",
    "OracleInconsistencyError",
    "PiecewiseFn",
    "Poly",
    "Rat",
    "SurfaceModel",
    "ZariskiError",
    "ZariskiPiece",
    "assemble_global",
    "az_bounds",
    "az_lower_bound",
    "derive_model",
    "flag_bound",
    "flag_log_discrepancy",
    "flag_result",
    "fmt",
    "is_nef",
    "is_pseudoeffective",
    "load_model",
    "load_script",
    "point_bound",
    "point_discrepancy",
    "pseff_threshold",
    "pw_integrate",
    "pw_min",
    "r_threshold",
    "rat",
    "s_value",
    "s_wq",
    "validate",
    "volume_fn",
    "zariski_fixed",
    "zariski_oracle",
    "zariski_sweep",
]
