"""Geometric measure of entanglement for pure multiqubit states.

Analytic solvers for symmetric Dicke-basis states, canonical symmetric
three-qubit states, and canonical two-qubit rank-two states, each backed by
an independent brute-force oracle.
"""

from .states import (
    BlochVector,
    CandidateRecord,
    CapacityError,
    CaseTag,
    GmResult,
    PureState,
    RankTwoCanonical,
    SymThreeQubitCanonical,
    SymmetricDickeState,
    UnsupportedAmplitudesError,
    ValidationError,
    dicke_to_dense,
    load_state,
    rank2_to_matrix,
    save_state,
    state_from_dict,
    state_to_dict,
    sym3q_to_dense,
    sym3q_to_dicke,
)
from .dicke import DickeObjectiveSample, dicke_critical_points, dicke_objective, gm_dicke_nonneg
from .oracle import OracleConfig, g_mixed_oracle, gm_pure_oracle, gm_symmetric_oracle
from .rank2 import (
    ClosedFormCoefficients,
    TraceDecomposition,
    closed_form_coeffs,
    f_objective,
    g_closed_form,
    g_from_pure_3qubit,
    g_numeric,
    trace_decomposition,
)
from .sym3q import (
    StationaryResidual,
    candidate_case1,
    candidate_case21,
    find_case2_roots,
    gm_candidate,
    gm_sym3q,
    stationary_residual,
    theta_from_phi,
)
from .wmax import (
    GlobalMinReport,
    g_equal_gamma,
    g_min_symmetric,
    g_symmetric_subspace,
    scan_global_min,
    uniqueness_bound,
    verify_w_uniqueness,
    x3_star_symmetric,
)

__version__ = "0.1.0"
