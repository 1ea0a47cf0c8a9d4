"""Operation layer behind both the HTTP service and the CLI.

Every operation takes a pydantic request and returns a pydantic response, so
the CLI can run them in process and the FastAPI app can expose them over HTTP
without either side duplicating logic. Bad input raises ValueError (the
formula parser's ParseError is one); refusals to exceed a configured budget
raise BudgetExceeded so callers can report them distinctly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from pydantic import BaseModel

from ..decomposition import parameter, pathwidth_exact, pathwidth_upper
from ..encoding import encode, format_structure, gaifman_graph, parse_structure
from ..formulas import (
    eliminate_sugar,
    format_formula,
    formula_size,
    is_nnf,
    operator_set,
    parse_formula,
    propositions,
    temporal_depth,
    to_nnf,
)
from ..kripke import format_kripke
from ..mso import MsoAssignment, evaluate, parse_mso
from ..oracles import bounded_tree_model, brute_force_sat
from ..pipeline import pipeline_sat
from ..pwsat import parse_pwsat
from ..reductions import (
    build_reduction,
    parameter_growth_scan,
    reduction_parts,
    verify_reduction,
)
from .schemas import (
    DecomposeRequest,
    DecomposeResponse,
    DepthResponse,
    EncodeResponse,
    FormulaRequest,
    MsoEvalRequest,
    MsoEvalResponse,
    NnfResponse,
    ParamResponse,
    ParseResponse,
    ReduceRequest,
    ReduceResponse,
    SatRequest,
    SatResponse,
    ScanRequest,
    ScanResponse,
    ScanRow,
    VerifyReductionRequest,
    VerifyReductionResponse,
)


class BudgetExceeded(Exception):
    """The operation refuses to run past its configured budget."""


def parse_op(req: FormulaRequest) -> ParseResponse:
    f = parse_formula(req.formula)
    return ParseResponse(
        formula=format_formula(f),
        size=formula_size(f),
        temporal_depth=temporal_depth(f),
        operators=sorted(operator_set(f)),
        propositions=sorted(propositions(f)),
        nnf=is_nnf(f),
    )


def nnf_op(req: FormulaRequest) -> NnfResponse:
    g = to_nnf(parse_formula(req.formula))
    return NnfResponse(nnf=format_formula(g), size=formula_size(g))


def td_op(req: FormulaRequest) -> DepthResponse:
    return DepthResponse(depth=temporal_depth(parse_formula(req.formula)))


def encode_op(req: FormulaRequest) -> EncodeResponse:
    a = encode(eliminate_sugar(parse_formula(req.formula)))
    return EncodeResponse(
        structure=format_structure(a),
        elements=len(a.universe),
        gaifman_edges=len(gaifman_graph(a)),
    )


def decompose_op(req: DecomposeRequest) -> DecomposeResponse:
    if (req.formula is None) == (req.structure is None):
        raise ValueError("provide exactly one of formula and structure")
    if req.formula is not None:
        a = encode(eliminate_sugar(parse_formula(req.formula)))
    else:
        a = parse_structure(req.structure)
    if req.exact:
        if len(a.universe) > req.element_limit:
            raise BudgetExceeded(
                f"{len(a.universe)} elements exceed the exact limit {req.element_limit}"
            )
        d, bound = pathwidth_exact(a, req.element_limit)
    else:
        d, bound = pathwidth_upper(a)
    from ..decomposition import format_decomposition

    return DecomposeResponse(
        decomposition=format_decomposition(d), width=bound, exact=req.exact
    )


def param_op(req: FormulaRequest) -> ParamResponse:
    p = parameter(parse_formula(req.formula))
    return ParamResponse(
        value=p.value,
        pathwidth=p.pathwidth,
        temporal_depth=p.temporal_depth,
        exact=p.exact,
    )


def sat_op(req: SatRequest) -> SatResponse:
    f = parse_formula(req.formula)
    if req.method == "pipeline":
        ok = pipeline_sat(f)
        return SatResponse(
            method="pipeline",
            status="sat" if ok else "unsat",
            depth_used=temporal_depth(f),
        )
    if req.method == "tree":
        g = to_nnf(f)
        depth = req.depth if req.depth is not None else temporal_depth(g)
        found = bounded_tree_model(g, depth)
        if found is None:
            return SatResponse(method="tree", status="unsat", depth_used=depth)
        k, root, _ = found
        return SatResponse(
            method="tree",
            status="sat",
            witness=format_kripke(k),
            witness_world=root,
            depth_used=depth,
        )
    result = brute_force_sat(f, max_worlds=req.max_worlds)
    if result.status == "sat":
        return SatResponse(
            method="brute",
            status="sat",
            witness=format_kripke(result.structure),
            witness_world=result.world,
            examined=result.examined,
        )
    status = "unsat" if result.status == "no_model" else "budget_exhausted"
    return SatResponse(method="brute", status=status, examined=result.examined)


def mso_eval_op(req: MsoEvalRequest) -> MsoEvalResponse:
    a = parse_structure(req.structure)
    f = parse_mso(req.formula)
    asg = MsoAssignment(
        dict(req.elements), {k: frozenset(v) for k, v in req.sets.items()}
    )
    return MsoEvalResponse(value=evaluate(a, f, asg))


def reduce_op(req: ReduceRequest) -> ReduceResponse:
    inst = parse_pwsat(req.instance)
    phi = build_reduction(inst, req.variant)
    parts = {
        name: format_formula(part)
        for name, part in reduction_parts(inst, req.variant).items()
    }
    return ReduceResponse(
        formula=format_formula(phi),
        parts=parts,
        operators=sorted(operator_set(phi)),
        temporal_depth=temporal_depth(phi),
    )


def verify_reduction_op(req: VerifyReductionRequest) -> VerifyReductionResponse:
    inst = parse_pwsat(req.instance)
    report = verify_reduction(
        inst,
        req.variant,
        world_bound=req.world_bound,
        search_budget=req.search_budget,
    )
    return VerifyReductionResponse(
        variant=report.variant,
        answer=report.answer,
        passed=report.passed,
        assignment=report.assignment,
        witness_ok=report.witness_ok,
        witness_worlds=report.witness_worlds,
        chain_counterexample=report.chain_counterexample,
        search_status=report.search_status,
        structures_examined=report.structures_examined,
    )


def scan_op(req: ScanRequest) -> ScanResponse:
    if req.stop <= req.start:
        raise ValueError("scan range is empty")
    if req.stop - req.start > 16:
        raise ValueError("scan range too large, keep it within 16 sizes")
    rows = parameter_growth_scan(
        req.family, req.variant, sizes=range(req.start, req.stop), blocks=req.blocks
    )
    return ScanResponse(
        rows=[ScanRow(n=n, temporal_depth=td, pathwidth_upper=pw) for n, td, pw in rows]
    )


@dataclass(frozen=True)
class Operation:
    route: str
    request: type[BaseModel]
    response: type[BaseModel]
    run: Callable[[BaseModel], BaseModel]
    summary: str


OPERATIONS: dict[str, Operation] = {
    "parse": Operation(
        "/parse", FormulaRequest, ParseResponse, parse_op,
        "Parse a formula and report its measures",
    ),
    "nnf": Operation(
        "/nnf", FormulaRequest, NnfResponse, nnf_op,
        "Convert a formula to negation normal form",
    ),
    "td": Operation(
        "/td", FormulaRequest, DepthResponse, td_op,
        "Temporal depth of a formula",
    ),
    "encode": Operation(
        "/encode", FormulaRequest, EncodeResponse, encode_op,
        "Relational encoding of a formula",
    ),
    "decompose": Operation(
        "/decompose", DecomposeRequest, DecomposeResponse, decompose_op,
        "Path decomposition of a formula encoding or structure",
    ),
    "param": Operation(
        "/param", FormulaRequest, ParamResponse, param_op,
        "Pathwidth plus temporal depth parameter",
    ),
    "sat": Operation(
        "/sat", SatRequest, SatResponse, sat_op,
        "Satisfiability by pipeline, tree search, or brute force",
    ),
    "mso-eval": Operation(
        "/mso-eval", MsoEvalRequest, MsoEvalResponse, mso_eval_op,
        "Evaluate a monadic second-order formula on a structure",
    ),
    "reduce": Operation(
        "/reduce", ReduceRequest, ReduceResponse, reduce_op,
        "Build a reduction formula from an instance",
    ),
    "verify-reduction": Operation(
        "/verify-reduction", VerifyReductionRequest, VerifyReductionResponse,
        verify_reduction_op,
        "Check answer preservation of a reduction on one instance",
    ),
    "scan": Operation(
        "/scan", ScanRequest, ScanResponse, scan_op,
        "Parameter growth scan over an instance family",
    ),
}
