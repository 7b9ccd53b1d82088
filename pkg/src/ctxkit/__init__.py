"""State-independent contextuality toolkit.

Builds the 18-ray, Peres-Mermin, and star observable families, the eight
catalog inequalities over them, exact noncontextual bounds by exhaustive
search, operator-level state-independence certificates, coloring/parity
contradiction checks, and a sequential-measurement Monte Carlo simulator.
"""

from .calibration import (
    CalibrationReport,
    incidence_automorphisms,
    kcbs_calibration,
    product_state_ascent,
    relabel_expr,
)
from .exceptions import (
    IncompatibleContextError,
    NumericError,
    ResourceLimitError,
    UnknownInequalityError,
    UnknownLabelError,
)
from .inequalities import (
    CATALOG_IDS,
    ContextReport,
    InequalityExpr,
    Term,
    absorb_sign_flip,
    catalog_get,
    expr_from_json,
    expr_to_json,
    load_expr,
    specialize,
    validate_contexts,
)
from .linalg import (
    IDENTITY_2,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    as_ket,
    check_density_matrix,
    commutes,
    is_hermitian,
    is_involution,
    ket_density,
    kron,
    kron_all,
    product_trace,
)
from .observables import (
    ObservableSet,
    RaySet,
    build_ks18,
    build_mermin_star,
    build_peres_mermin,
    build_set,
    compatible,
)
from .parity import ColorabilityResult, ParityStats, ks_colorable, parity_stats
from .quantum import (
    Certificate,
    bell_operator,
    certify_state_independence,
    context_product,
    evaluate_inequality,
    expectation_term,
    haar_sweep,
    max_quantum_value,
)
from .runtime import substream, worker_count
from .simulate import (
    EstimateReport,
    MarginalReport,
    MeasurementRecord,
    TermEstimate,
    estimate_term,
    marginal_consistency,
    run_protocol,
    sequential_measure,
)
from .solver import BoundResult, bound_sign_flip_check, classical_bound, evaluate_assignment
from .states import (
    NAMED_STATES,
    ghz,
    haar_random,
    make_state,
    maximally_mixed,
    paper_kcbs_product,
    singlet,
    y_plus_pair,
    zero_product,
)

__version__ = "0.1.0"

__all__ = [
    "BoundResult",
    "CATALOG_IDS",
    "CalibrationReport",
    "Certificate",
    "ColorabilityResult",
    "ContextReport",
    "EstimateReport",
    "IDENTITY_2",
    "IncompatibleContextError",
    "InequalityExpr",
    "MarginalReport",
    "MeasurementRecord",
    "NAMED_STATES",
    "NumericError",
    "ObservableSet",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "ParityStats",
    "RaySet",
    "ResourceLimitError",
    "Term",
    "TermEstimate",
    "UnknownInequalityError",
    "UnknownLabelError",
    "absorb_sign_flip",
    "as_ket",
    "bell_operator",
    "bound_sign_flip_check",
    "build_ks18",
    "build_mermin_star",
    "build_peres_mermin",
    "build_set",
    "catalog_get",
    "certify_state_independence",
    "check_density_matrix",
    "classical_bound",
    "commutes",
    "compatible",
    "context_product",
    "estimate_term",
    "evaluate_assignment",
    "evaluate_inequality",
    "expectation_term",
    "expr_from_json",
    "expr_to_json",
    "ghz",
    "haar_random",
    "haar_sweep",
    "incidence_automorphisms",
    "is_hermitian",
    "is_involution",
    "kcbs_calibration",
    "ket_density",
    "kron",
    "kron_all",
    "ks_colorable",
    "load_expr",
    "make_state",
    "marginal_consistency",
    "max_quantum_value",
    "maximally_mixed",
    "paper_kcbs_product",
    "parity_stats",
    "product_state_ascent",
    "product_trace",
    "relabel_expr",
    "run_protocol",
    "sequential_measure",
    "singlet",
    "specialize",
    "substream",
    "validate_contexts",
    "worker_count",
    "y_plus_pair",
    "zero_product",
]
