import random

import pytest

from ctlfrag.formulas import (
    And,
    Not,
    TemporalUnary,
    operator_set,
    parse_formula,
    propositions,
    temporal_depth,
)
from ctlfrag.kripke import KripkeStructure, model_check
from ctlfrag.pwsat import PwSatInstance, pwsat_brute_force
from ctlfrag.reductions import (
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
from genformulas import random_ctl

EXPECTED_OPERATORS = {
    "ax-ag": {"AX", "AG"},
    "ax-eg": {"AX", "AF"},
    "ag": {"AG"},
    "au": {"AU"},
}
EXPECTED_DEPTH = {"ax-ag": 2, "ax-eg": 2, "ag": 3, "au": 3}


def disjunction_instance() -> PwSatInstance:
    return PwSatInstance(
        parse_formula("x1 | x2"), ("x1", "x2"), (1, 1), ((1, 1),)
    )


def two_block_instance() -> PwSatInstance:
    return PwSatInstance(
        parse_formula("x1 & (x2 | x3)"),
        ("x1", "x2", "x3"),
        (1, 2, 2),
        ((1, 1), (2, 1)),
    )


def test_parts_start_with_instance_formula():
    for variant in VARIANTS:
        inst = two_block_instance()
        parts = reduction_parts(inst, variant)
        names = list(parts)
        assert names[0] == "formula"
        assert parts["formula"] == inst.formula
        if variant == "ax-eg":
            assert names == ["formula", "count_init", "global_invariant"]
        else:
            expected = [
                "formula",
                "determined",
                "depth",
                "set_counter",
                "inc_counter",
                "target_met",
                "count_init",
                "count_stable",
                "count_ordered",
            ]
            if variant == "au":
                expected.remove("count_stable")
            assert names == expected


def test_unknown_variant_and_name_collision():
    inst = disjunction_instance()
    with pytest.raises(ValueError, match="unknown reduction variant"):
        reduction_parts(inst, "ax")
    clashing = PwSatInstance(
        parse_formula("d_0"), ("d_0",), (1,), ((1, 1),)
    )
    with pytest.raises(ValueError, match="collides"):
        build_reduction(clashing, "ax-ag")
    parity_clash = PwSatInstance(
        parse_formula("m_0"), ("m_0",), (1,), ((1, 1),)
    )
    build_reduction(parity_clash, "ax-ag")
    with pytest.raises(ValueError, match="collides"):
        build_reduction(parity_clash, "ag")


def test_operator_fragment_and_constant_depth():
    instances = [
        disjunction_instance(),
        two_block_instance(),
        PwSatInstance(parse_formula("~x1"), ("x1",), (1,), ((1, 0),)),
        family_instance("disjunction", 5, 2),
    ]
    for variant in VARIANTS:
        for inst in instances:
            phi = build_reduction(inst, variant)
            assert operator_set(phi) <= EXPECTED_OPERATORS[variant]
            assert temporal_depth(phi) == EXPECTED_DEPTH[variant]


def test_ax_eg_shape():
    inst = two_block_instance()
    phi = build_reduction(inst, "ax-eg")
    match phi:
        case And(left, Not(TemporalUnary("AF", Not(body)))):
            assert operator_set(left) == frozenset()
            assert operator_set(body) == {"AX"}
        case _:
            pytest.fail(f"unexpected shape: {phi!r}")


def test_witness_models_satisfy_all_variants():
    for inst in (disjunction_instance(), two_block_instance()):
        asg = pwsat_brute_force(inst)
        for variant in VARIANTS:
            chain, root = witness_model(inst, asg, variant)
            assert root == 0
            want = inst.n + (2 if variant in ("ax-ag", "ax-eg") else 3)
            assert chain.num_worlds == want
            for name, part in reduction_parts(inst, variant).items():
                assert model_check(chain, root, part), (variant, name)
            assert model_check(chain, root, build_reduction(inst, variant))


def test_witness_model_rejects_bad_assignments():
    inst = disjunction_instance()
    with pytest.raises(ValueError, match="misses variable"):
        witness_model(inst, {"x1": True}, "ax-ag")
    with pytest.raises(ValueError, match="does not satisfy"):
        witness_model(inst, {"x1": False, "x2": False}, "ax-ag")
    with pytest.raises(ValueError, match="block target"):
        witness_model(inst, {"x1": True, "x2": True}, "ax-ag")


def test_chain_counter_levels():
    inst = two_block_instance()
    chain, _ = witness_model(inst, {"x1": True, "x2": True, "x3": False}, "ax-ag")
    # world i's counters tally the choices committed strictly before it
    assert "tup_1" in chain.labels[1] and "tr_1_1" not in chain.labels[1]
    assert "tr_1_1" in chain.labels[2]
    assert "tup_2" in chain.labels[2] and "tr_2_1" not in chain.labels[2]
    assert "tr_2_1" in chain.labels[3]
    assert "fup_2" in chain.labels[3] and "fl_2_1" not in chain.labels[3]
    assert "fl_2_1" in chain.labels[4]
    for i in range(chain.num_worlds):
        assert {f"d_{j}" for j in range(i + 1)} <= chain.labels[i]
        assert f"d_{i + 1}" not in chain.labels[i]


def test_missing_counter_fails_target_check():
    inst = disjunction_instance()
    chain, root = witness_model(inst, pwsat_brute_force(inst), "ax-ag")
    stripped = KripkeStructure(
        chain.successors,
        tuple(lab - {"tr_1_1"} for lab in chain.labels),
        chain.propositions,
    )
    parts = reduction_parts(inst, "ax-ag")
    assert not model_check(stripped, root, parts["target_met"])
    assert not model_check(stripped, root, build_reduction(inst, "ax-ag"))
    assert model_check(stripped, root, parts["formula"])
    assert model_check(stripped, root, parts["determined"])


def test_au_early_release_rejected():
    # raising the release proposition at the root must not discharge the
    # counting machinery
    inst = PwSatInstance(
        parse_formula("x1 & x2"), ("x1", "x2"), (1, 1), ((1, 1),)
    )
    phi = build_reduction(inst, "au")
    cheat = KripkeStructure.of(
        1, [(0, 0)], {0: {"x1", "x2", "d_0", "d_4"}}, propositions(phi)
    )
    assert not model_check(cheat, 0, phi)


def test_verify_reduction_yes_and_no():
    yes = [disjunction_instance(), two_block_instance()]
    no = [
        PwSatInstance(parse_formula("x1 & x2"), ("x1", "x2"), (1, 1), ((1, 1),)),
        PwSatInstance(parse_formula("x1 & ~x1"), ("x1",), (1,), ((1, 0),)),
    ]
    for inst in yes:
        for variant in VARIANTS:
            report = verify_reduction(inst, variant, search_budget=300_000)
            assert report.answer == "yes" and report.passed
            assert report.witness_ok and report.witness_worlds >= inst.n + 2
            assert report.assignment == pwsat_brute_force(inst)
    for inst in no:
        for variant in VARIANTS:
            report = verify_reduction(inst, variant, search_budget=300_000)
            assert report.answer == "no" and report.passed
            assert report.chain_counterexample is None
            assert report.search_status in ("no_model", "budget_exhausted")
            assert report.structures_examined >= 0


def test_report_pass_logic():
    assert ReductionReport("au", "yes", witness_ok=True).passed
    assert not ReductionReport("au", "yes", witness_ok=False).passed
    assert ReductionReport("au", "no", search_status="no_model").passed
    assert ReductionReport("au", "no", search_status="budget_exhausted").passed
    assert not ReductionReport("au", "no", search_status="sat").passed
    bad_chain = ReductionReport(
        "au", "no", chain_counterexample={"x1": True}, search_status="no_model"
    )
    assert not bad_chain.passed


def test_merged_global_invariants_agree():
    # AG distributes over conjunction, which justifies folding all invariants
    # into the single body of the ax-eg variant
    rng = random.Random(77)
    for _ in range(120):
        n = rng.randint(1, 4)
        edges = [(w, rng.randrange(n)) for w in range(n)]
        edges += [
            (rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, n))
        ]
        props = ("p", "q")
        labels = {
            w: {p for p in props if rng.random() < 0.5} for w in range(n)
        }
        k = KripkeStructure.of(n, edges, labels, set(props))
        alpha = random_ctl(rng, props=props, size=4)
        beta = random_ctl(rng, props=props, size=4)
        merged = TemporalUnary("AG", And(alpha, beta))
        split = And(TemporalUnary("AG", alpha), TemporalUnary("AG", beta))
        for w in range(n):
            assert model_check(k, w, merged) == model_check(k, w, split)


def test_family_instances():
    inst = family_instance("disjunction", 5, 2)
    assert inst.variables == ("q_1", "q_2", "q_3", "q_4", "q_5")
    assert inst.block_of == (1, 2, 1, 2, 1)
    assert inst.targets == ((1, 1), (2, 1))
    empty = family_instance("empty", 3)
    assert propositions(empty.formula) == frozenset()
    assert pwsat_brute_force(empty) is not None
    with pytest.raises(ValueError, match="unknown instance family"):
        family_instance("clauses", 3)
    with pytest.raises(ValueError, match="blocks"):
        family_instance("disjunction", 2, 3)
    assert set(SCAN_FAMILIES) == {"disjunction", "empty"}


def test_parameter_growth_scan_columns():
    for variant in VARIANTS:
        rows = parameter_growth_scan("disjunction", variant, sizes=range(2, 5))
        assert [n for n, _, _ in rows] == [2, 3, 4]
        depths = {td for _, td, _ in rows}
        assert depths == {EXPECTED_DEPTH[variant]}
        assert all(pw > 0 for _, _, pw in rows)
    rows = parameter_growth_scan("empty", "ax-ag", sizes=(2, 3))
    assert {td for _, td, _ in rows} == {2}
