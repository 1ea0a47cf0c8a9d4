"""Tests for the sentence builders and the evaluation-based decision procedure."""

import random

import pytest

from genformulas import random_nnf_axex
from ctlfrag.encoding import RelationalStructure, encode
from ctlfrag.formulas import format_formula, parse_formula, temporal_depth, to_nnf
from ctlfrag.mso import (
    Atom,
    Eq,
    Exists,
    ExistsSet,
    Forall,
    ForallSet,
    Member,
    MsoAnd,
    MsoIff,
    MsoImplies,
    MsoNot,
    MsoOr,
    evaluate,
)
from ctlfrag.oracles import bounded_tree_sat, brute_force_sat
from ctlfrag.pipeline import (
    level_assignment_formula,
    pipeline_sat,
    satisfiability_formula,
    structure_wellformed_formula,
)

HAND_CASES = [
    ("p", True),
    ("p & ~p", False),
    ("true", True),
    ("false", False),
    ("EX p & AX ~p", False),
    ("EX p & AX p", True),
    ("AX p", True),
    ("AX false", False),
    ("EX EX p & AX AX ~p", False),
    ("EX EX p", True),
    ("EX p & EX ~p", True),
    ("AX(p | q) & EX ~p & EX ~q", True),
    ("EX(p & q) & AX ~p", False),
    ("p -> EX p", True),
    ("(p <-> ~p)", False),
]


def copy_structure(a):
    return RelationalStructure(a.universe, {p: set(ts) for p, ts in a.relations.items()})


def test_pipeline_hand_cases():
    for text, want in HAND_CASES:
        assert pipeline_sat(parse_formula(text)) == want, text


def test_pipeline_rejects_other_operators():
    for text in ["AG p", "E[p U q]", "AF p & EX q", "~A[p U q]", "EG EX p"]:
        with pytest.raises(ValueError, match="AX/EX"):
            pipeline_sat(parse_formula(text))


def test_wellformed_accepts_encodings():
    rng = random.Random(7)
    for _ in range(30):
        f = random_nnf_axex(rng, size=8, td=3)
        assert evaluate(encode(f), structure_wellformed_formula()), format_formula(f)


def test_wellformed_rejects_duplicate_root():
    a = encode(to_nnf(parse_formula("EX p & AX(~p | q)")))
    assert evaluate(a, structure_wellformed_formula())
    b = copy_structure(a)
    b.relations["repr"].add((2,))
    assert not evaluate(b, structure_wellformed_formula())


def test_wellformed_rejects_missing_body():
    a = encode(to_nnf(parse_formula("EX p & AX(~p | q)")))
    b = copy_structure(a)
    b.relations["body_EX"].pop()
    assert not evaluate(b, structure_wellformed_formula())
    c = copy_structure(a)
    c.relations["body_AX"].pop()
    assert not evaluate(c, structure_wellformed_formula())


def test_wellformed_rejects_second_argument_in_slot():
    a = encode(to_nnf(parse_formula("EX p & AX(~p | q)")))
    for pred in ["conn_and_1", "conn_or_2", "conn_not_1"]:
        b = copy_structure(a)
        occupied, parent = next(iter(b.relations[pred]))
        other = 0 if occupied != 0 else 1
        b.relations[pred].add((other, parent))
        assert not evaluate(b, structure_wellformed_formula()), pred


def test_wellformed_rejects_orphan():
    # an extra variable element hanging off nothing
    a = encode(to_nnf(parse_formula("EX p")))
    b = RelationalStructure(
        (*a.universe, "q"), {p: set(ts) for p, ts in a.relations.items()}
    )
    b.relations["var"].add((len(a.universe),))
    b.relations["reprPL"].add((len(a.universe),))
    assert not evaluate(b, structure_wellformed_formula())


def test_pipeline_agrees_with_oracles():
    rng = random.Random(41)
    for _ in range(40):
        f = random_nnf_axex(rng, size=8, td=3)
        want = bounded_tree_sat(f, temporal_depth(f))
        assert pipeline_sat(f) == want, format_formula(f)
        brute = brute_force_sat(f, max_worlds=3)
        if brute.satisfiable is not None:
            assert brute.satisfiable == want, format_formula(f)


def test_extra_depth_does_not_change_answer():
    rng = random.Random(42)
    for _ in range(25):
        f = random_nnf_axex(rng, size=7, td=2)
        a = encode(f)
        td = temporal_depth(f)
        base = evaluate(a, satisfiability_formula(td))
        assert evaluate(a, satisfiability_formula(td + 1)) == base, format_formula(f)


def _mso_children(f):
    match f:
        case MsoNot(body):
            return (body,)
        case MsoAnd(l, r) | MsoOr(l, r) | MsoImplies(l, r) | MsoIff(l, r):
            return (l, r)
        case Exists(_, body) | Forall(_, body) | ExistsSet(_, body) | ForallSet(_, body):
            return (body,)
        case Atom() | Eq() | Member():
            return ()
    raise TypeError(f)


def _dag_nodes(f):
    seen = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen[id(g)] = g
        stack.extend(_mso_children(g))
    return seen


def test_sentence_builders_share_structure():
    assert satisfiability_formula(3) is satisfiability_formula(3)
    assert level_assignment_formula(2) is level_assignment_formula(2)
    nodes = _dag_nodes(satisfiability_formula(3))
    assert id(level_assignment_formula(2)) in nodes
    assert id(level_assignment_formula(0)) in nodes
    assert id(structure_wellformed_formula()) in nodes
    # one new level adds a fixed number of DAG nodes
    sizes = [len(_dag_nodes(satisfiability_formula(i))) for i in range(1, 6)]
    growth = {b - a for a, b in zip(sizes, sizes[1:])}
    assert len(growth) == 1
