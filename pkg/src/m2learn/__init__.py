"""Learning and minimizing modulo-2 multiplicity automata.

Vectors and matrix rows over GF(2) are packed into Python ints, so bit ``j``
of a row is the entry in column ``j``.  The omega-regular front end encodes
ultimately periodic words ``u v^omega`` as finite words ``u $ v``.
"""

from .gf2 import Gf2Basis, Gf2Matrix, Gf2Vector, SparseGf2Matrix, matrix, rank, solve_linear
from .m2ma import M2MA, equivalent, minimal_dfa_state_count, with_unit_initial
from .minimize import ObservationTable, minimize
from .learner import (
    FunctionOracle,
    InvariantViolation,
    LearnerState,
    M2maOracle,
    learn,
    table_eq,
    table_equivalence,
)
from .omega import LassoWord, Nfa, make_nfa, nba_mq, suba_mq, suba_to_m2ma, suba_to_ufa, ufa_to_m2ma
from .oracles import (
    ApproxEqConfig,
    ExternalOracle,
    ExternalOracleSpec,
    ValidationConfig,
    approximate_equivalence,
    nba_oracle,
    suba_oracle,
    validate_learned,
)

__all__ = [
    "Gf2Basis", "Gf2Matrix", "Gf2Vector", "SparseGf2Matrix", "matrix", "rank", "solve_linear",
    "M2MA", "equivalent", "minimal_dfa_state_count", "with_unit_initial",
    "ObservationTable", "minimize",
    "FunctionOracle", "InvariantViolation", "LearnerState", "M2maOracle",
    "learn", "table_eq", "table_equivalence",
    "LassoWord", "Nfa", "make_nfa", "nba_mq", "suba_mq", "suba_to_m2ma", "suba_to_ufa", "ufa_to_m2ma",
    "ApproxEqConfig", "ExternalOracle", "ExternalOracleSpec", "ValidationConfig",
    "approximate_equivalence", "nba_oracle", "suba_oracle", "validate_learned",
]
