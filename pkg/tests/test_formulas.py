import random

import pytest

from ctlfrag.formulas import (
    And,
    Const,
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
from genformulas import all_nnf_axex, random_ctl, semantically_equal

FIG = "EX(AG(p & ~(EF z))) | ~(A[p U (EF z)])"


def test_parse_basic_shapes():
    assert parse_formula("true") == Const(True)
    assert parse_formula("false") == Const(False)
    assert parse_formula("p_1") == Prop("p_1")
    assert parse_formula("~p") == Not(Prop("p"))
    assert parse_formula("A[p U q]") == TemporalBinary("AU", Prop("p"), Prop("q"))
    assert parse_formula("E[p U q]") == TemporalBinary("EU", Prop("p"), Prop("q"))
    assert parse_formula("AX p") == TemporalUnary("AX", Prop("p"))
    # An operator name glued to its argument is a single identifier.
    assert parse_formula("AXp") == Prop("AXp")


def test_parse_precedence_and_associativity():
    p, q, r = Prop("p"), Prop("q"), Prop("r")
    assert parse_formula("p & q | r") == Or(And(p, q), r)
    assert parse_formula("p | q & r") == Or(p, And(q, r))
    assert parse_formula("p & q & r") == And(And(p, q), r)
    assert parse_formula("p | q | r") == Or(Or(p, q), r)
    assert parse_formula("p -> q -> r") == Implies(p, Implies(q, r))
    assert parse_formula("p <-> q <-> r") == Iff(p, Iff(q, r))
    assert parse_formula("~p & q") == And(Not(p), q)
    assert parse_formula("AX p & q") == And(TemporalUnary("AX", p), q)
    assert parse_formula("~AX p") == Not(TemporalUnary("AX", p))
    assert parse_formula("p -> q | r & ~p") == Implies(p, Or(q, And(r, Not(p))))


@pytest.mark.parametrize(
    "text",
    [
        "",
        "p &",
        "(p",
        "p)",
        "A[p q]",
        "A[p U q",
        "AX",
        "~",
        "p q",
        "true & U",
        "AG",
        "p # q",
    ],
)
def test_parse_rejects_malformed(text):
    with pytest.raises(ParseError) as err:
        parse_formula(text)
    assert err.value.position >= 0


def test_keywords_cannot_be_propositions():
    for word in ("true1", "Ax", "ax", "uU"):
        assert isinstance(parse_formula(word), Prop)
    for word in ("U", "A", "E"):
        with pytest.raises(ParseError):
            parse_formula(word)


def test_format_minimal_parentheses():
    cases = {
        "p & q | r": "p & q | r",
        "(p & q) | r": "p & q | r",
        "p & (q | r)": "p & (q | r)",
        "~(p & q)": "~(p & q)",
        "AX AX p": "AX AX p",
        "AX (p & q)": "AX (p & q)",
        "(p -> q) -> r": "(p -> q) -> r",
        "p -> (q -> r)": "p -> q -> r",
        "A[p & q U EX r]": "A[p & q U EX r]",
        "p & (q & r)": "p & (q & r)",
    }
    for text, expected in cases.items():
        assert format_formula(parse_formula(text)) == expected


def test_parse_format_round_trip_random():
    rng = random.Random(20260821)
    for _ in range(250):
        f = random_ctl(rng)
        assert parse_formula(format_formula(f)) == f


def test_parse_format_round_trip_exhaustive_small():
    for f in all_nnf_axex(4):
        assert parse_formula(format_formula(f)) == f


def test_to_nnf_structure_examples():
    p, q = Prop("p"), Prop("q")
    assert to_nnf(parse_formula("~~p")) == p
    assert to_nnf(parse_formula("~AX p")) == TemporalUnary("EX", Not(p))
    assert to_nnf(parse_formula("~AG p")) == TemporalUnary("EF", Not(p))
    assert to_nnf(parse_formula("~A[p U q]")) == Or(
        TemporalBinary("EU", Not(q), And(Not(p), Not(q))),
        TemporalUnary("EG", Not(q)),
    )
    # No negation-free form of a negated EU exists over these operators.
    assert to_nnf(parse_formula("~E[p U q]")) == Not(TemporalBinary("EU", p, q))
    assert to_nnf(parse_formula("p -> q")) == Or(Not(p), q)


def test_to_nnf_negations_only_on_props_or_eu():
    rng = random.Random(7)
    for _ in range(200):
        nnf = to_nnf(random_ctl(rng))
        for g in subformulas(nnf):
            match g:
                case Not(Prop()) | Not(TemporalBinary("EU", _, _)):
                    pass
                case Not(_) | Implies(_, _) | Iff(_, _):
                    pytest.fail(f"bad node in NNF output: {format_formula(g)}")


def test_to_nnf_preserves_semantics_and_depth():
    rng = random.Random(99)
    for _ in range(120):
        f = random_ctl(rng, size=7)
        nnf = to_nnf(f)
        assert temporal_depth(nnf) == temporal_depth(f)
        assert semantically_equal(f, nnf)


def test_to_nnf_fixpoint_on_nnf_input():
    rng = random.Random(5)
    for _ in range(100):
        nnf = to_nnf(random_ctl(rng, size=6))
        if is_nnf(nnf):
            assert to_nnf(nnf) == nnf


def test_eliminate_sugar():
    rng = random.Random(11)
    for _ in range(120):
        f = random_ctl(rng, size=7)
        plain = eliminate_sugar(f)
        for g in subformulas(plain):
            assert not isinstance(g, (Implies, Iff))
        assert semantically_equal(f, plain)
    assert eliminate_sugar(parse_formula("p -> q")) == parse_formula("~p | q")


def test_temporal_depth():
    cases = {
        "p": 0,
        "true": 0,
        "~p & q": 0,
        "EX p": 1,
        "~EX p": 1,
        "AX EX p": 2,
        "EX p & AX q": 1,
        "A[EX p U q]": 2,
        "A[p U q]": 1,
        FIG: 3,
    }
    for text, expected in cases.items():
        assert temporal_depth(parse_formula(text)) == expected, text


def test_subformulas_preorder_and_dedup():
    f = parse_formula("p & (EX p | p)")
    subs = subformulas(f)
    assert subs[0] == f
    assert len(subs) == len(set(subs))
    assert subs == [
        f,
        Prop("p"),
        Or(TemporalUnary("EX", Prop("p")), Prop("p")),
        TemporalUnary("EX", Prop("p")),
    ]


def test_operator_set_and_propositions():
    f = parse_formula(FIG)
    assert operator_set(f) == {"EX", "AG", "EF", "AU"}
    assert propositions(f) == {"p", "z"}
    assert operator_set(parse_formula("p & q")) == frozenset()


def test_formula_size():
    assert formula_size(parse_formula("p")) == 1
    assert formula_size(parse_formula("~p")) == 2
    assert formula_size(parse_formula("EX p & EX ~p")) == 6
    assert formula_size(parse_formula("p & p")) == 3


def test_is_nnf():
    for text in ("p", "~p", "~p & EX q", "A[~p U q]", "true", "EG (p | ~q)"):
        assert is_nnf(parse_formula(text)), text
    for text in ("~~p", "~(p & q)", "p -> q", "p <-> q", "~AX p", "~true"):
        assert not is_nnf(parse_formula(text)), text
