"""Bures distance between completely positive maps on matrix algebras."""

from .bures import (
    BoundReport,
    BuresResult,
    RigidityDecomposition,
    SuitesReport,
    bound_report,
    brute_force_upper,
    bures_extension,
    bures_id_unitary,
    bures_intertwiner,
    bures_intertwiner_stacks,
    bures_states_classical,
    classical_state_map,
    property_suites,
    rigidity_decompose,
    spectral_problem,
    state_map,
)
from .cpmap import (
    CpMap,
    KrausSet,
    amplify,
    apply,
    cb_norm,
    cb_norm_diff,
    choi_from_kraus,
    compose,
    cp_norm,
    from_json_dict,
    kraus_from_choi,
    map_norm_sampled,
    random_cp_map,
    to_json_dict,
)
from .engine import (
    AffineSpectralProblem,
    SdpProblem,
    SolveReport,
    minimize_spectral,
    solve_sdp,
)
from .gns import (
    GnsModule,
    Intertwiner,
    build_gns,
    center_unit_vector,
    defect_embed,
    minimal_basis,
    module_from_stack,
    pairing,
)
from .matcore import HermEig, herm_eig, is_psd, op_norm, psd_sqrt

__version__ = "0.1.0"

__all__ = [
    "AffineSpectralProblem",
    "BoundReport",
    "BuresResult",
    "CpMap",
    "GnsModule",
    "HermEig",
    "Intertwiner",
    "KrausSet",
    "RigidityDecomposition",
    "SdpProblem",
    "SolveReport",
    "SuitesReport",
    "amplify",
    "apply",
    "bound_report",
    "brute_force_upper",
    "build_gns",
    "bures_extension",
    "bures_id_unitary",
    "bures_intertwiner",
    "bures_intertwiner_stacks",
    "bures_states_classical",
    "cb_norm",
    "cb_norm_diff",
    "center_unit_vector",
    "choi_from_kraus",
    "classical_state_map",
    "compose",
    "cp_norm",
    "defect_embed",
    "from_json_dict",
    "herm_eig",
    "is_psd",
    "kraus_from_choi",
    "map_norm_sampled",
    "minimal_basis",
    "minimize_spectral",
    "module_from_stack",
    "op_norm",
    "pairing",
    "property_suites",
    "psd_sqrt",
    "random_cp_map",
    "rigidity_decompose",
    "solve_sdp",
    "spectral_problem",
    "state_map",
    "to_json_dict",
]
