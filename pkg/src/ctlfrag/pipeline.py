"""Satisfiability for next-operator formulas via evaluation of a fixed
monadic second-order sentence over the relational encoding.

The sentence is assembled from three machine-built pieces:

- structure_wellformed_formula checks that a structure has the shape an
  encoding produces: a unique designated root, no orphan elements, every
  element of exactly one syntactic kind with unique arguments per slot, and
  body tuples attached to matching operator representatives;
- level_assignment_formula(i) asserts that a set of elements can be read as
  "satisfied in some world with i levels of lookahead left": Boolean
  consistency at every level, each satisfied existential-next representative
  backed by a successor set one level down that also carries every body of
  the satisfied universal-next representatives, and a default successor set
  when no existential-next representative is satisfied;
- satisfiability_formula(depth) conjoins the two and asks for a satisfied-set
  containing the root.

Sharing matters: level_assignment_formula(i) embeds the formula for i - 1 as
one sub-DAG referenced from both successor blocks, so the sentence grows
linearly with depth and the evaluator's memoization keeps it cheap.
"""

from __future__ import annotations

from .encoding import encode
from .formulas import Formula, is_nnf, operator_set, temporal_depth, to_nnf
from .mso import (
    Atom,
    Eq,
    Exists,
    ExistsSet,
    Forall,
    Member,
    MsoAnd,
    MsoFormula,
    MsoIff,
    MsoImplies,
    MsoNot,
    MsoOr,
    evaluate,
)

PIPELINE_OPERATORS = frozenset(("AX", "EX"))

_CONN_PREDS = ("conn_and_1", "conn_and_2", "conn_or_1", "conn_or_2", "conn_not_1")


def _conj(parts: list[MsoFormula]) -> MsoFormula:
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = MsoAnd(p, out)
    return out


def _disj(parts: list[MsoFormula]) -> MsoFormula:
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = MsoOr(p, out)
    return out


def _filled_slot(pred: str) -> MsoFormula:
    """Element x has exactly one argument in slot `pred`."""
    exists = Exists("y", Atom(pred, ("y", "x")))
    unique = Forall(
        "u",
        MsoImplies(
            Atom(pred, ("u", "x")),
            Forall("v", MsoImplies(Atom(pred, ("v", "x")), Eq("u", "v"))),
        ),
    )
    return MsoAnd(exists, unique)


_STRUC_CACHE: list[MsoFormula] = []


def structure_wellformed_formula() -> MsoFormula:
    """Sentence accepting exactly the well-shaped next-fragment encodings."""
    if _STRUC_CACHE:
        return _STRUC_CACHE[0]

    root_exists = Exists("x", Atom("repr", ("x",)))
    root_unique = Forall(
        "x",
        MsoImplies(
            Atom("repr", ("x",)),
            Forall("y", MsoImplies(Atom("repr", ("y",)), Eq("x", "y"))),
        ),
    )

    argument_somewhere = _disj(
        [
            Exists("y", Atom(pred, ("x", "y")))
            for pred in (*_CONN_PREDS, "body_AX", "body_EX")
        ]
    )
    no_orphans = Forall(
        "x", MsoImplies(MsoNot(Atom("repr", ("x",))), argument_somewhere)
    )

    branches = [
        Atom("var", ("x",)),
        MsoOr(Atom("const_true", ("x",)), Atom("const_false", ("x",))),
        MsoAnd(_filled_slot("conn_and_1"), _filled_slot("conn_and_2")),
        MsoAnd(_filled_slot("conn_or_1"), _filled_slot("conn_or_2")),
        _filled_slot("conn_not_1"),
        _filled_slot("body_AX"),
        _filled_slot("body_EX"),
    ]
    exclusions = [
        MsoNot(MsoAnd(branches[i], branches[j]))
        for i in range(len(branches))
        for j in range(i + 1, len(branches))
    ]
    one_kind = Forall("x", _conj([_disj(branches), *exclusions]))

    bodies_marked = _conj(
        [
            Forall(
                "x",
                Forall(
                    "y",
                    MsoImplies(
                        Atom(f"body_{op}", ("y", "x")), Atom(f"repr_{op}", ("x",))
                    ),
                ),
            )
            for op in ("AX", "EX")
        ]
    )

    out = _conj([MsoAnd(root_exists, root_unique), no_orphans, one_kind, bodies_marked])
    _STRUC_CACHE.append(out)
    return out


def _boolean_consistency(setvar: str, propositional_only: bool) -> MsoFormula:
    """Membership in `setvar` respects constants and connectives.

    With propositional_only, the constraint is restricted to elements whose
    subtree is temporal-free; deeper levels constrain every element.
    """
    sv = setvar
    rules = [
        MsoImplies(Atom("const_true", ("x",)), Member("x", sv)),
        MsoImplies(Atom("const_false", ("x",)), MsoNot(Member("x", sv))),
        Forall(
            "y",
            MsoImplies(
                Atom("conn_not_1", ("y", "x")),
                MsoIff(Member("x", sv), MsoNot(Member("y", sv))),
            ),
        ),
        Forall(
            "y1",
            MsoImplies(
                Atom("conn_and_1", ("y1", "x")),
                Forall(
                    "y2",
                    MsoImplies(
                        Atom("conn_and_2", ("y2", "x")),
                        MsoIff(
                            Member("x", sv),
                            MsoAnd(Member("y1", sv), Member("y2", sv)),
                        ),
                    ),
                ),
            ),
        ),
        Forall(
            "y1",
            MsoImplies(
                Atom("conn_or_1", ("y1", "x")),
                Forall(
                    "y2",
                    MsoImplies(
                        Atom("conn_or_2", ("y2", "x")),
                        MsoIff(
                            Member("x", sv),
                            MsoOr(Member("y1", sv), Member("y2", sv)),
                        ),
                    ),
                ),
            ),
        ),
    ]
    body = _conj(rules)
    if propositional_only:
        return Forall("x", MsoImplies(Atom("reprPL", ("x",)), body))
    return Forall("x", body)


_ASSIGN_CACHE: dict[int, MsoFormula] = {}


def level_assignment_formula(level: int) -> MsoFormula:
    """Free set variable sat{level} can be satisfied with `level` next-steps.

    Repeated calls share structure: the formula for level - 1 appears once
    and is referenced from both the existential-branch block and the
    default-successor block.
    """
    if level < 0:
        raise ValueError("level must be nonnegative")
    got = _ASSIGN_CACHE.get(level)
    if got is not None:
        return got
    if level == 0:
        out = _boolean_consistency("sat0", propositional_only=True)
        _ASSIGN_CACHE[level] = out
        return out

    prev = level_assignment_formula(level - 1)
    sat, prev_sat, ax = f"sat{level}", f"sat{level - 1}", f"axsat{level}"

    collect_ax = Forall(
        "x",
        MsoIff(
            Member("x", ax), MsoAnd(Atom("repr_AX", ("x",)), Member("x", sat))
        ),
    )
    ax_bodies_hold = Forall(
        "z",
        MsoImplies(
            Member("z", ax),
            Exists("w", MsoAnd(Atom("body_AX", ("w", "z")), Member("w", prev_sat))),
        ),
    )
    ex_branch = Exists(
        "y",
        MsoAnd(
            Atom("body_EX", ("y", "x")),
            ExistsSet(prev_sat, _conj([Member("y", prev_sat), ax_bodies_hold, prev])),
        ),
    )
    ex_block = Forall(
        "x",
        MsoImplies(
            Atom("repr_EX", ("x",)), MsoImplies(Member("x", sat), ex_branch)
        ),
    )
    no_ex = Forall(
        "x", MsoImplies(Atom("repr_EX", ("x",)), MsoNot(Member("x", sat)))
    )
    default_successor = ExistsSet(prev_sat, MsoAnd(ax_bodies_hold, prev))

    out = MsoAnd(
        _boolean_consistency(sat, propositional_only=False),
        ExistsSet(
            ax, _conj([collect_ax, ex_block, MsoImplies(no_ex, default_successor)])
        ),
    )
    _ASSIGN_CACHE[level] = out
    return out


_SAT_CACHE: dict[int, MsoFormula] = {}


def satisfiability_formula(depth: int) -> MsoFormula:
    """Closed sentence: some well-formed reading satisfies the root."""
    got = _SAT_CACHE.get(depth)
    if got is not None:
        return got
    sat = f"sat{depth}"
    root_in = Exists("r", MsoAnd(Atom("repr", ("r",)), Member("r", sat)))
    out = MsoAnd(
        structure_wellformed_formula(),
        ExistsSet(sat, MsoAnd(level_assignment_formula(depth), root_in)),
    )
    _SAT_CACHE[depth] = out
    return out


def pipeline_sat(f: Formula) -> bool:
    """Satisfiability of a next-fragment formula by sentence evaluation.

    Rewrites to negation normal form, encodes, and evaluates the
    satisfiability sentence for the formula's temporal depth.
    """
    g = to_nnf(f)
    extra = operator_set(g) - PIPELINE_OPERATORS
    if extra:
        raise ValueError(
            f"pipeline handles AX/EX formulas only, found {', '.join(sorted(extra))}"
        )
    assert is_nnf(g)
    return evaluate(encode(g), satisfiability_formula(temporal_depth(g)))
