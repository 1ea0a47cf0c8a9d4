"""Parameterized satisfiability toolkit for CTL operator fragments.

The package takes branching-time formulas, measures their temporal depth and
the pathwidth of their relational encodings, and decides satisfiability for
the AX/EX fragment three independent ways: a monadic second-order pipeline
over the encoding, a bounded tree search, and brute-force model enumeration.
It also builds the counter-chain reductions that transport partitioned
weighted satisfiability into four small operator fragments.
"""

from .decomposition import (
    Decomposition,
    ParameterValue,
    format_decomposition,
    parameter,
    parse_decomposition,
    pathwidth_exact,
    pathwidth_upper,
    treewidth_exact,
    validate_decomposition,
)
from .encoding import (
    VOCABULARY,
    RelationalStructure,
    encode,
    format_structure,
    gaifman_graph,
    parse_structure,
    primal_edges,
    validate_structure,
)
from .formulas import (
    And,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    ParseError,
    Prop,
    TemporalBinary,
    TemporalUnary,
    eliminate_sugar,
    format_formula,
    formula_size,
    is_nnf,
    operator_set,
    parse_formula,
    propositions,
    subformulas,
    temporal_depth,
    to_nnf,
)
from .kripke import (
    KripkeStructure,
    format_kripke,
    model_check,
    parse_kripke,
    satisfying_worlds,
    validate,
)
from .mso import (
    MsoAssignment,
    MsoFormula,
    evaluate,
    format_mso,
    free_variables,
    parse_mso,
)
from .oracles import (
    SatSearchResult,
    bounded_tree_model,
    bounded_tree_sat,
    brute_force_sat,
)
from .pipeline import (
    level_assignment_formula,
    pipeline_sat,
    satisfiability_formula,
    structure_wellformed_formula,
)
from .pwsat import (
    PwSatInstance,
    assignment_satisfies,
    format_pwsat,
    meets_targets,
    parse_pwsat,
    pwsat_brute_force,
    validate_instance,
)
from .reductions import (
    SCAN_FAMILIES,
    VARIANTS,
    ReductionReport,
    build_reduction,
    family_instance,
    parameter_growth_scan,
    reduction_parts,
    verify_reduction,
    witness_model,
)

__all__ = [
    "And",
    "Const",
    "Formula",
    "Iff",
    "Implies",
    "Not",
    "Or",
    "ParseError",
    "Prop",
    "TemporalBinary",
    "TemporalUnary",
    "Decomposition",
    "KripkeStructure",
    "MsoAssignment",
    "MsoFormula",
    "ParameterValue",
    "PwSatInstance",
    "ReductionReport",
    "RelationalStructure",
    "SCAN_FAMILIES",
    "SatSearchResult",
    "VARIANTS",
    "VOCABULARY",
    "assignment_satisfies",
    "bounded_tree_model",
    "bounded_tree_sat",
    "brute_force_sat",
    "build_reduction",
    "eliminate_sugar",
    "encode",
    "evaluate",
    "family_instance",
    "format_decomposition",
    "format_formula",
    "format_kripke",
    "format_mso",
    "format_pwsat",
    "format_structure",
    "formula_size",
    "free_variables",
    "gaifman_graph",
    "is_nnf",
    "level_assignment_formula",
    "meets_targets",
    "model_check",
    "operator_set",
    "parameter",
    "parameter_growth_scan",
    "parse_decomposition",
    "parse_formula",
    "parse_kripke",
    "parse_mso",
    "parse_pwsat",
    "parse_structure",
    "pathwidth_exact",
    "pathwidth_upper",
    "pipeline_sat",
    "primal_edges",
    "propositions",
    "pwsat_brute_force",
    "reduction_parts",
    "satisfiability_formula",
    "satisfying_worlds",
    "structure_wellformed_formula",
    "subformulas",
    "temporal_depth",
    "to_nnf",
    "treewidth_exact",
    "validate",
    "validate_decomposition",
    "validate_instance",
    "validate_structure",
    "verify_reduction",
    "witness_model",
]
