import itertools
import random

import pytest

from ctlfrag.formulas import (
    And,
    Const,
    Iff,
    Implies,
    Not,
    Or,
    Prop,
    parse_formula,
)
from ctlfrag.pwsat import (
    PwSatInstance,
    assignment_satisfies,
    format_pwsat,
    meets_targets,
    parse_pwsat,
    pwsat_brute_force,
    validate_instance,
)


def disjunction_instance() -> PwSatInstance:
    return PwSatInstance(
        parse_formula("x1 | x2"), ("x1", "x2"), (1, 1), ((1, 1),)
    )


def random_propositional(rng: random.Random, names: tuple[str, ...], size: int):
    if size <= 1:
        if rng.random() < 0.15:
            return Const(rng.random() < 0.5)
        return Prop(rng.choice(names))
    shape = rng.choice(("and", "or", "implies", "iff", "not"))
    if shape == "not":
        return Not(random_propositional(rng, names, size - 1))
    split = rng.randint(1, size - 1)
    left = random_propositional(rng, names, split)
    right = random_propositional(rng, names, size - split)
    ctor = {"and": And, "or": Or, "implies": Implies, "iff": Iff}[shape]
    return ctor(left, right)


def random_instance(rng: random.Random) -> PwSatInstance:
    n = rng.randint(1, 5)
    variables = tuple(f"x{i}" for i in range(1, n + 1))
    blocks = rng.randint(1, min(2, n))
    block_of = tuple(rng.randint(1, blocks) for _ in range(n))
    while len(set(block_of)) != blocks:
        block_of = tuple(rng.randint(1, blocks) for _ in range(n))
    sizes = {b: block_of.count(b) for b in set(block_of)}
    targets = tuple((b, rng.randint(0, sizes[b])) for b in sorted(sizes))
    formula = random_propositional(rng, variables, rng.randint(1, 6))
    return PwSatInstance(formula, variables, block_of, targets)


def test_accessors():
    inst = PwSatInstance(
        parse_formula("x1 & (x2 | x3)"),
        ("x1", "x2", "x3"),
        (1, 2, 2),
        ((1, 1), (2, 1)),
    )
    assert inst.n == 3
    assert inst.block_ids() == (1, 2)
    assert inst.block_variables(2) == ("x2", "x3")
    assert inst.block_size(1) == 1
    assert inst.target(2) == 1


def test_validation_errors():
    f = parse_formula("x1")
    good = PwSatInstance(f, ("x1",), (1,), ((1, 1),))
    assert validate_instance(good) is None
    cases = [
        ((), (), ((1, 0),), "no variables"),
        (("x1", "x1"), (1, 1), ((1, 0),), "duplicate variable"),
        (("x1",), (1, 1), ((1, 0),), "does not cover"),
        (("x1",), (1,), ((1, 0), (1, 1)), "duplicate target"),
        (("x1",), (1,), ((2, 0),), "disagree on block"),
        (("x1",), (1,), ((1, 2),), "outside 0..1"),
    ]
    for variables, block_of, targets, fragment in cases:
        with pytest.raises(ValueError, match=fragment):
            PwSatInstance(f, variables, block_of, targets)
    with pytest.raises(ValueError, match="propositional"):
        PwSatInstance(parse_formula("AX x1"), ("x1",), (1,), ((1, 0),))
    with pytest.raises(ValueError, match="missing from the universe"):
        PwSatInstance(parse_formula("x1 & y"), ("x1",), (1,), ((1, 0),))


def test_assignment_satisfies_handles_sugar():
    f = parse_formula("(x1 -> x2) <-> ~(x1 & ~x2)")
    for bits in itertools.product((False, True), repeat=2):
        asg = dict(zip(("x1", "x2"), bits))
        assert assignment_satisfies(f, asg)
    with pytest.raises(ValueError, match="not a propositional"):
        assignment_satisfies(parse_formula("EF x1"), {"x1": True})


def test_meets_targets():
    inst = disjunction_instance()
    assert meets_targets(inst, {"x1": True, "x2": False})
    assert not meets_targets(inst, {"x1": True, "x2": True})
    assert not meets_targets(inst, {"x1": False, "x2": False})


def test_brute_force_examples():
    assert pwsat_brute_force(disjunction_instance()) == {"x1": True, "x2": False}
    conj = PwSatInstance(parse_formula("x1 & x2"), ("x1", "x2"), (1, 1), ((1, 1),))
    assert pwsat_brute_force(conj) is None
    neg = PwSatInstance(parse_formula("~x1"), ("x1",), (1,), ((1, 0),))
    assert pwsat_brute_force(neg) == {"x1": False}


def test_brute_force_limit():
    variables = tuple(f"x{i}" for i in range(1, 22))
    inst = PwSatInstance(
        parse_formula("x1"), variables, (1,) * 21, ((1, 1),)
    )
    with pytest.raises(ValueError, match="limit"):
        pwsat_brute_force(inst)
    assert pwsat_brute_force(inst, limit=21) is not None


def test_brute_force_agrees_with_reference():
    rng = random.Random(1207)
    for _ in range(150):
        inst = random_instance(rng)
        got = pwsat_brute_force(inst)
        witnesses = [
            dict(zip(inst.variables, bits))
            for bits in itertools.product((False, True), repeat=inst.n)
        ]
        expected_any = any(
            assignment_satisfies(inst.formula, a) and meets_targets(inst, a)
            for a in witnesses
        )
        if got is None:
            assert not expected_any
        else:
            assert assignment_satisfies(inst.formula, got)
            assert meets_targets(inst, got)


def test_format_parse_round_trip():
    inst = PwSatInstance(
        parse_formula("x1 & (x2 | x3)"),
        ("x1", "x2", "x3"),
        (1, 2, 2),
        ((1, 1), (2, 1)),
    )
    text = format_pwsat(inst)
    assert text.splitlines()[0] == "formula x1 & (x2 | x3)"
    assert parse_pwsat(text) == inst
    rng = random.Random(9)
    for _ in range(60):
        inst = random_instance(rng)
        assert parse_pwsat(format_pwsat(inst)) == inst


def test_parse_comments_and_blank_lines():
    text = """
    # exact-target instance
    formula x1 | x2   # support
    part x1 1
    part x2 1
    tg 1 1
    """
    assert parse_pwsat(text) == disjunction_instance()


def test_parse_errors():
    cases = [
        ("part x1 1\ntg 1 0", "missing formula"),
        ("formula x1\nformula x2\npart x1 1\ntg 1 0", "second formula"),
        ("formula x1\npart x1\ntg 1 0", "expected `part"),
        ("formula x1\npart x1 one\ntg 1 0", "expected `part"),
        ("formula x1\npart x1 1\npart x1 1\ntg 1 0", "repeated"),
        ("formula x1\npart x1 1\ntg 1\n", "expected `tg"),
        ("formula x1\npart x1 1\ntg 1 0\nbogus line", "unknown directive"),
        ("formula x1 &\npart x1 1\ntg 1 0", "line 1"),
    ]
    for text, fragment in cases:
        with pytest.raises(ValueError, match=fragment):
            parse_pwsat(text)
