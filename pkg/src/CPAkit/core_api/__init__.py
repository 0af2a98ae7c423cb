from CPAkit.core_api.cutoff_config import CutoffConfig
from CPAkit.core_api.density_operator import (
    DensityOperator,
    as_density,
    pure_to_density,
    purity,
    reduced_density,
)
from CPAkit.core_api.mode_operator import (
    ModeOperator,
    annihilation_matrix,
    creation_matrix,
    identity_matrix,
    number_matrix,
    parity_matrix,
)
from CPAkit.core_api.pure_state import (
    PureTwoModeState,
    apply_mode,
    fix_global_phase,
    normalize,
)

__all__ = [
    "CutoffConfig",
    "DensityOperator",
    "ModeOperator",
    "PureTwoModeState",
    "annihilation_matrix",
    "apply_mode",
    "as_density",
    "creation_matrix",
    "fix_global_phase",
    "identity_matrix",
    "normalize",
    "number_matrix",
    "parity_matrix",
    "pure_to_density",
    "purity",
    "reduced_density",
]
