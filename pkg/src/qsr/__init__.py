"""Toolkit for binary qualitative spatial and temporal calculi.

Calculi are finite relation algebras given by converse and composition
tables; networks of qualitative constraints are decided via algebraic
closure plus refinement search; calculi themselves can be audited against
the relation-algebra axiom battery and grounded in explicit finite models.
"""

from .axioms import (
    AxiomRecord,
    AxiomReport,
    Classification,
    check_axiom,
    check_axiom_composite,
    classify,
    r6_r6l_equivalence_check,
)
from .closure import (
    ClosureOutcome,
    ClosureStatus,
    a_closure,
    lookup,
    naive_closure,
    revise,
)
from .core import (
    CalculusError,
    CalculusFlags,
    CalculusMismatchError,
    CalculusSpec,
    RelationSet,
    UnknownSymbolError,
    complement,
    compose,
    converse,
    intersect,
    union,
)
from .models import (
    BudgetExceededError,
    CellStrength,
    FiniteInterpretation,
    brute_force_solve,
    builtin_model,
    check_jepd,
    check_partition_scheme,
    check_seriality,
    classify_operation,
    domain_compose,
    domain_converse,
    load_model,
    parse_model,
)
from .network import (
    ConstraintNetwork,
    NetworkError,
    Valuation,
    load_network,
    normalize,
    parse_network,
    random_network,
    satisfies,
)
from .registry import (
    BUILTIN_NAMES,
    CalculusSource,
    Finding,
    SpecParseError,
    builtin,
    load_spec,
    parse_spec,
    serialize,
    validate,
)
from .search import (
    CompletenessResult,
    Decision,
    Verdict,
    decide,
    derive_completeness,
    set_completeness,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomRecord",
    "AxiomReport",
    "BUILTIN_NAMES",
    "BudgetExceededError",
    "CalculusError",
    "CalculusFlags",
    "CalculusMismatchError",
    "CalculusSource",
    "CalculusSpec",
    "CellStrength",
    "Classification",
    "ClosureOutcome",
    "ClosureStatus",
    "CompletenessResult",
    "ConstraintNetwork",
    "Decision",
    "FiniteInterpretation",
    "Finding",
    "NetworkError",
    "RelationSet",
    "SpecParseError",
    "UnknownSymbolError",
    "Valuation",
    "Verdict",
    "a_closure",
    "brute_force_solve",
    "builtin",
    "builtin_model",
    "check_axiom",
    "check_axiom_composite",
    "check_jepd",
    "check_partition_scheme",
    "check_seriality",
    "classify",
    "classify_operation",
    "complement",
    "compose",
    "converse",
    "decide",
    "derive_completeness",
    "domain_compose",
    "domain_converse",
    "intersect",
    "load_model",
    "load_network",
    "load_spec",
    "lookup",
    "naive_closure",
    "normalize",
    "parse_model",
    "parse_network",
    "parse_spec",
    "r6_r6l_equivalence_check",
    "random_network",
    "revise",
    "satisfies",
    "serialize",
    "set_completeness",
    "union",
    "validate",
]
