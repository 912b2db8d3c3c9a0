"""tanglekit: polynomial SL(2,C) filter invariants for multiqubit states.

Evaluate comb-built filter invariants, classify the balancedness of state
supports with exact integer witnesses, construct the diagonal filtering
normal form of irreducibly balanced states, and compute the spin-S
concurrence (pure and mixed) under rotation-restricted local operations.
"""

from .balance import (
    AlternatingMatrix,
    BalanceReport,
    BinaryMatrix,
    Classification,
    SupportMatrices,
    analyze,
    canonical_irreducible,
    merge_duplicate_columns,
    report_to_json,
    sl_scalable_to_zero,
    support_matrices,
    weighted_balance,
)
from .engine import (
    METRIC,
    PAULI_MATRICES,
    ContractionTerm,
    FilterSpec,
    FixedPauli,
    LowerIndex,
    SpecInfo,
    UpperIndex,
    eval_filter,
    pauli_expectation,
    validate_spec,
)
from .errors import TanglekitError
from .filters import (
    builtin,
    catalog_info,
    catalog_names,
    d_invariant_sum,
    load_filter_file,
    parse_dsl,
    render,
)
from .normalform import (
    LfoSolution,
    StochasticityLevel,
    StochasticityReport,
    lfo_solution_to_json,
    lfo_to_stochastic,
    stochasticity_check,
)
from .spin import (
    CombCheck,
    CombOperator,
    SpinConcurrenceResult,
    comb_family,
    comb_operator,
    mixed_concurrence,
    pure_concurrence,
    spin_matrices,
    verify_comb,
)
from .states import (
    HADAMARD,
    MAX_QUBITS,
    DensityMatrix,
    LocalOperator,
    PureState,
    StateTerm,
    apply_local,
    density_from_json,
    density_to_json,
    generate,
    load_density,
    load_state,
    make_state,
    random_sl2,
    reduced_density,
    save_density,
    save_state,
    state_from_json,
    state_to_json,
    telescope,
)

__version__ = "0.1.0"

__all__ = [
    "AlternatingMatrix",
    "BalanceReport",
    "BinaryMatrix",
    "Classification",
    "CombCheck",
    "CombOperator",
    "ContractionTerm",
    "DensityMatrix",
    "FilterSpec",
    "FixedPauli",
    "HADAMARD",
    "LfoSolution",
    "LocalOperator",
    "LowerIndex",
    "MAX_QUBITS",
    "METRIC",
    "PAULI_MATRICES",
    "PureState",
    "SpecInfo",
    "SpinConcurrenceResult",
    "StateTerm",
    "StochasticityLevel",
    "StochasticityReport",
    "SupportMatrices",
    "TanglekitError",
    "UpperIndex",
    "analyze",
    "apply_local",
    "builtin",
    "canonical_irreducible",
    "catalog_info",
    "catalog_names",
    "comb_family",
    "comb_operator",
    "d_invariant_sum",
    "density_from_json",
    "density_to_json",
    "eval_filter",
    "generate",
    "lfo_solution_to_json",
    "lfo_to_stochastic",
    "load_density",
    "load_filter_file",
    "load_state",
    "make_state",
    "merge_duplicate_columns",
    "mixed_concurrence",
    "parse_dsl",
    "pauli_expectation",
    "pure_concurrence",
    "random_sl2",
    "reduced_density",
    "render",
    "report_to_json",
    "save_density",
    "save_state",
    "sl_scalable_to_zero",
    "spin_matrices",
    "state_from_json",
    "state_to_json",
    "stochasticity_check",
    "support_matrices",
    "telescope",
    "validate_spec",
    "verify_comb",
    "weighted_balance",
]
