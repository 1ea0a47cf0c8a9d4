"""Reductions from exact-target partitioned satisfiability into small
temporal-operator fragments.

Every variant emits a conjunction whose models are forced to behave like a
chain: depth propositions d_0..d_{n+2} advance one step per world, world i
commits variable i's truth value into per-block counters tr (true count) and
fl (false count), and a final check compares the counters against the block
targets. The variants differ in which operators drive the stepping:

- "ax-ag": AX advances depth and counters, AG states the global invariants.
- "ax-eg": the AG invariants are merged into a single body and restated as
  ~AF~body; everything else is propositional or AX.
- "ag": AG only; one-step advancement is recovered from alternating parity
  bits m_0/m_1 carried by the depth propositions.
- "au": AU only; a global invariant over the chain becomes A[.. U d_{n+2}]
  with the release proposition d_{n+2} labeled at the end of the chain.

The temporal depth of each variant is a constant independent of the instance,
which is what makes these parameter-preserving reductions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .decomposition import pathwidth_upper
from .encoding import encode
from .formulas import (
    TRUE,
    And,
    Formula,
    Implies,
    Not,
    Or,
    Prop,
    TemporalBinary,
    TemporalUnary,
    eliminate_sugar,
    propositions,
    temporal_depth,
)
from .kripke import KripkeStructure, model_check
from .oracles import brute_force_sat
from .pwsat import (
    PwSatInstance,
    assignment_satisfies,
    meets_targets,
    pwsat_brute_force,
)

VARIANTS = ("ax-ag", "ax-eg", "ag", "au")
SCAN_FAMILIES = ("disjunction", "empty")


def _ax(f: Formula) -> Formula:
    return TemporalUnary("AX", f)


def _ag(f: Formula) -> Formula:
    return TemporalUnary("AG", f)


def _af(f: Formula) -> Formula:
    return TemporalUnary("AF", f)


def _au(left: Formula, right: Formula) -> Formula:
    return TemporalBinary("AU", left, right)


def _ef(f: Formula) -> Formula:
    # the AG-only fragment spells reachability as ~AG~
    return Not(_ag(Not(f)))


def _conj(items: list[Formula]) -> Formula:
    out: Formula | None = None
    for f in items:
        out = f if out is None else And(out, f)
    return TRUE if out is None else out


def _depth(i: int) -> Formula:
    return Prop(f"d_{i}")


def _parity(b: int) -> Formula:
    return Prop(f"m_{b}")


def _true_update(p: int) -> Formula:
    return Prop(f"tup_{p}")


def _false_update(p: int) -> Formula:
    return Prop(f"fup_{p}")


def _true_count(p: int, j: int) -> Formula:
    return Prop(f"tr_{p}_{j}")


def _false_count(p: int, j: int) -> Formula:
    return Prop(f"fl_{p}_{j}")


def _at_step(i: int) -> Formula:
    # holds exactly at the i-th world of the intended chain
    return And(_depth(i), Not(_depth(i + 1)))


def _generated_names(inst: PwSatInstance, variant: str) -> set[str]:
    names = {f"d_{i}" for i in range(inst.n + 3)}
    if variant in ("ag", "au"):
        names.update(("m_0", "m_1"))
    for p in inst.block_ids():
        names.add(f"tup_{p}")
        names.add(f"fup_{p}")
        for j in range(inst.block_size(p) + 2):
            names.add(f"tr_{p}_{j}")
            names.add(f"fl_{p}_{j}")
    return names


# --- shared invariant bodies (the AX/AG scheme, without their AG prefix) ----


def _determined_body(inst: PwSatInstance) -> Formula:
    items = []
    for v in inst.variables:
        q = Prop(v)
        items.append(And(Implies(q, _ax(q)), Implies(Not(q), _ax(Not(q)))))
    return _conj(items)


def _depth_body(inst: PwSatInstance) -> Formula:
    items = []
    for i in range(inst.n + 1):
        items.append(
            Implies(_at_step(i), _ax(And(_depth(i + 1), Not(_depth(i + 2)))))
        )
    return _conj(items)


def _set_counter_body(inst: PwSatInstance) -> Formula:
    """At the variable's own step, raise the block's matching update flag."""
    items = []
    for i in range(1, inst.n + 1):
        q = Prop(inst.variables[i - 1])
        p = inst.block_of[i - 1]
        choice = And(
            Implies(q, _true_update(p)), Implies(Not(q), _false_update(p))
        )
        items.append(Implies(_at_step(i), choice))
    return _conj(items)


def _inc_counter_body(inst: PwSatInstance) -> Formula:
    items = []
    for p in inst.block_ids():
        for j in range(inst.block_size(p) + 1):
            items.append(
                And(
                    Implies(
                        _true_update(p),
                        Implies(_true_count(p, j), _ax(_true_count(p, j + 1))),
                    ),
                    Implies(
                        _false_update(p),
                        Implies(_false_count(p, j), _ax(_false_count(p, j + 1))),
                    ),
                )
            )
    return _conj(items)


def _target_hit(inst: PwSatInstance, p: int) -> Formula:
    # counters sit exactly at the target split: tg true, size - tg false
    want = inst.target(p)
    size = inst.block_size(p)
    return _conj(
        [
            _true_count(p, want),
            Not(_true_count(p, want + 1)),
            _false_count(p, size - want),
            Not(_false_count(p, size - want + 1)),
        ]
    )


def _target_met_body(inst: PwSatInstance) -> Formula:
    return _conj(
        [
            Implies(_depth(inst.n + 1), _target_hit(inst, p))
            for p in inst.block_ids()
        ]
    )


def _count_floor_body(inst: PwSatInstance) -> Formula:
    return _conj(
        [And(_true_count(p, 0), _false_count(p, 0)) for p in inst.block_ids()]
    )


def _count_stable_body(inst: PwSatInstance, step) -> Formula:
    """Counters never go back down; step is the propagation modality."""
    items = []
    for p in inst.block_ids():
        for j in range(inst.block_size(p) + 1):
            items.append(
                And(
                    Implies(_true_count(p, j), step(_true_count(p, j))),
                    Implies(_false_count(p, j), step(_false_count(p, j))),
                )
            )
    return _conj(items)


def _counter_order_items(inst: PwSatInstance) -> list[Formula]:
    items = []
    for p in inst.block_ids():
        for level in range(2, inst.block_size(p) + 1):
            items.append(
                And(
                    Implies(_true_count(p, level), _true_count(p, level - 1)),
                    Implies(_false_count(p, level), _false_count(p, level - 1)),
                )
            )
    return items


# --- the four variants ------------------------------------------------------


def _parts_ax_ag(inst: PwSatInstance) -> dict[str, Formula]:
    return {
        "determined": _ag(_determined_body(inst)),
        "depth": _ag(_depth_body(inst)),
        "set_counter": _ag(_set_counter_body(inst)),
        "inc_counter": _ag(_inc_counter_body(inst)),
        "target_met": _ag(_target_met_body(inst)),
        "count_init": _conj(
            [_depth(0), Not(_depth(1)), _ag(_count_floor_body(inst))]
        ),
        "count_stable": _ag(_count_stable_body(inst, _ag)),
        "count_ordered": _ag(_count_ordered_items_conj(inst)),
    }


def _count_ordered_items_conj(inst: PwSatInstance) -> Formula:
    depth_order = [Implies(_depth(i), _depth(i - 1)) for i in range(1, inst.n + 1)]
    return _conj(depth_order + _counter_order_items(inst))


def _parts_ax_eg(inst: PwSatInstance) -> dict[str, Formula]:
    """All AG invariants merged into one body stated once under ~AF~.

    Merging is sound because AG distributes over conjunction; the AG-free
    count_stable propagation switches to AX, which is equivalent under the
    surrounding global invariant.
    """
    body = _conj(
        [
            _determined_body(inst),
            _depth_body(inst),
            _set_counter_body(inst),
            _inc_counter_body(inst),
            _target_met_body(inst),
            _count_floor_body(inst),
            _count_stable_body(inst, _ax),
            _count_ordered_items_conj(inst),
        ]
    )
    return {
        "count_init": And(_depth(0), Not(_depth(1))),
        "global_invariant": Not(_af(Not(body))),
    }


def _parts_ag(inst: PwSatInstance) -> dict[str, Formula]:
    determined = _conj(
        [
            And(Implies(Prop(v), _ag(Prop(v))), Implies(Not(Prop(v)), _ag(Not(Prop(v)))))
            for v in inst.variables
        ]
    )
    depth_items = []
    for i in range(inst.n + 1):
        par = i % 2
        advance = _conj(
            [
                _parity(par),
                Not(_parity(1 - par)),
                _ef(And(_depth(i + 1), Not(_depth(i + 2)))),
            ]
        )
        depth_items.append(Implies(_at_step(i), advance))
    inc_items = []
    for p in inst.block_ids():
        for j in range(inst.block_size(p)):
            for b in (0, 1):
                # the counter bump lands once the parity has flipped and then
                # sticks, which simulates the AX step without any AX
                inc_items.append(
                    And(
                        Implies(
                            _conj([_true_update(p), _true_count(p, j), _parity(b)]),
                            _ag(Implies(_parity(1 - b), _ag(_true_count(p, j + 1)))),
                        ),
                        Implies(
                            _conj([_false_update(p), _false_count(p, j), _parity(b)]),
                            _ag(Implies(_parity(1 - b), _ag(_false_count(p, j + 1)))),
                        ),
                    )
                )
    return {
        "determined": determined,
        "depth": _ag(_conj(depth_items)),
        "set_counter": _ag(_set_counter_body(inst)),
        "inc_counter": _ag(_conj(inc_items)),
        "target_met": _ag(_target_met_body(inst)),
        "count_init": _conj(
            [_depth(0), Not(_depth(1)), _ag(_count_floor_body(inst))]
        ),
        "count_stable": _ag(_count_stable_body(inst, _ag)),
        "count_ordered": _ag(_count_ordered_items_conj(inst)),
    }


def _parts_au(inst: PwSatInstance) -> dict[str, Formula]:
    release = _depth(inst.n + 2)

    def hold(body: Formula) -> Formula:
        # a global invariant over the chain, released at the final world
        return _au(body, release)

    positives = _conj(
        [Implies(Prop(v), _au(Prop(v), release)) for v in inst.variables]
    )
    negatives = _conj(
        [Implies(Not(Prop(v)), _au(Not(Prop(v)), release)) for v in inst.variables]
    )
    depth_items = []
    for i in range(inst.n + 1):
        par = i % 2
        step = _au(
            Not(release),
            _conj([_depth(i + 1), Not(_depth(i + 2)), Not(release)]),
        )
        advance = _conj([_parity(par), Not(_parity(1 - par)), step])
        depth_items.append(hold(Implies(_at_step(i), advance)))
    set_items = []
    for i in range(1, inst.n + 1):
        q = Prop(inst.variables[i - 1])
        p = inst.block_of[i - 1]
        choice = And(
            Implies(q, _true_update(p)), Implies(Not(q), _false_update(p))
        )
        set_items.append(hold(Implies(_at_step(i), choice)))
    inc_items = []
    for p in inst.block_ids():
        for j in range(inst.block_size(p)):
            for b in (0, 1):
                inc_items.append(
                    hold(
                        And(
                            Implies(
                                _conj(
                                    [_true_update(p), _true_count(p, j), _parity(b)]
                                ),
                                _au(_parity(b), _au(_true_count(p, j + 1), release)),
                            ),
                            Implies(
                                _conj(
                                    [_false_update(p), _false_count(p, j), _parity(b)]
                                ),
                                _au(_parity(b), _au(_false_count(p, j + 1), release)),
                            ),
                        )
                    )
                )
    # ~release at the root is load-bearing: without it a model may raise the
    # release immediately, discharging every A[.. U release] conjunct at step
    # zero and escaping the counting machinery altogether
    init_items = [_depth(0), Not(_depth(1)), Not(release)]
    for p in inst.block_ids():
        init_items.append(
            _conj(
                [
                    Not(_true_count(p, 1)),
                    Not(_false_count(p, 1)),
                    hold(And(_true_count(p, 0), _false_count(p, 0))),
                ]
            )
        )
    order_shared = _counter_order_items(inst)
    ordered_items = [
        hold(_conj([Implies(_depth(i), _depth(i - 1)), *order_shared]))
        for i in range(1, inst.n + 1)
    ]
    return {
        "determined": And(positives, negatives),
        "depth": _conj(depth_items),
        "set_counter": _conj(set_items),
        "inc_counter": _conj(inc_items),
        "target_met": _conj(
            [hold(Implies(_depth(inst.n + 1), _target_hit(inst, p))) for p in inst.block_ids()]
        ),
        "count_init": _conj(init_items),
        "count_ordered": _conj(ordered_items),
    }


_PART_BUILDERS = {
    "ax-ag": _parts_ax_ag,
    "ax-eg": _parts_ax_eg,
    "ag": _parts_ag,
    "au": _parts_au,
}


def reduction_parts(inst: PwSatInstance, variant: str) -> dict[str, Formula]:
    """The generated subformulas by name, instance formula first.

    Splitting the reduction into named parts lets callers model-check each
    conjunct separately when diagnosing a failing instance.
    """
    build = _PART_BUILDERS.get(variant)
    if build is None:
        choices = ", ".join(VARIANTS)
        raise ValueError(f"unknown reduction variant {variant!r}, expected one of {choices}")
    clash = set(inst.variables) & _generated_names(inst, variant)
    if clash:
        raise ValueError(
            f"instance variable {sorted(clash)[0]!r} collides with a reduction proposition"
        )
    parts: dict[str, Formula] = {"formula": inst.formula}
    parts.update(build(inst))
    return parts


def build_reduction(inst: PwSatInstance, variant: str) -> Formula:
    return _conj(list(reduction_parts(inst, variant).values()))


# --- chain models -----------------------------------------------------------


def _chain_model(
    inst: PwSatInstance, asg: dict[str, bool], variant: str
) -> KripkeStructure:
    """The intended chain model for an assignment, targets met or not.

    World i carries depth propositions d_0..d_i, the assignment's variables
    everywhere, the update flag of variable i's block, and counter levels for
    the choices committed strictly before world i. The final world loops.
    """
    n = inst.n
    worlds = n + 2 if variant in ("ax-ag", "ax-eg") else n + 3
    true_so_far = {p: 0 for p in inst.block_ids()}
    false_so_far = {p: 0 for p in inst.block_ids()}
    labels: dict[int, set[str]] = {}
    for i in range(worlds):
        lab = {v for v in inst.variables if asg[v]}
        lab.update(f"d_{j}" for j in range(i + 1))
        if variant in ("ag", "au"):
            lab.add(f"m_{i % 2}")
        for p in inst.block_ids():
            lab.update(f"tr_{p}_{j}" for j in range(true_so_far[p] + 1))
            lab.update(f"fl_{p}_{j}" for j in range(false_so_far[p] + 1))
        if 1 <= i <= n:
            p = inst.block_of[i - 1]
            if asg[inst.variables[i - 1]]:
                lab.add(f"tup_{p}")
                true_so_far[p] += 1
            else:
                lab.add(f"fup_{p}")
                false_so_far[p] += 1
        labels[i] = lab
    edges = [(i, i + 1) for i in range(worlds - 1)]
    edges.append((worlds - 1, worlds - 1))
    props = propositions(build_reduction(inst, variant))
    props |= {name for lab in labels.values() for name in lab}
    return KripkeStructure.of(worlds, edges, labels, props)


def witness_model(
    inst: PwSatInstance, asg: dict[str, bool], variant: str
) -> tuple[KripkeStructure, int]:
    """Chain model witnessing a satisfying assignment; root is world 0."""
    missing = set(inst.variables) - set(asg)
    if missing:
        raise ValueError(f"assignment misses variable {sorted(missing)[0]!r}")
    if not assignment_satisfies(inst.formula, asg):
        raise ValueError("assignment does not satisfy the instance formula")
    if not meets_targets(inst, asg):
        raise ValueError("assignment misses a block target")
    return _chain_model(inst, asg, variant), 0


@dataclass(frozen=True)
class ReductionReport:
    """Outcome of checking one instance against one reduction variant.

    For a yes-instance: witness_ok says whether the constructed chain model
    satisfies the reduction formula. For a no-instance: chain_counterexample
    is an assignment whose chain satisfies the formula (None is the good
    case), and search_status/structures_examined report the bounded model
    search ("no_model" is conclusive up to the bound, "budget_exhausted" is
    partial evidence only).
    """

    variant: str
    answer: str
    assignment: dict[str, bool] | None = None
    witness_ok: bool | None = None
    witness_worlds: int | None = None
    chain_counterexample: dict[str, bool] | None = None
    search_status: str | None = None
    structures_examined: int | None = None

    @property
    def passed(self) -> bool:
        if self.answer == "yes":
            return bool(self.witness_ok)
        return self.chain_counterexample is None and self.search_status in (
            "no_model",
            "budget_exhausted",
        )


def verify_reduction(
    inst: PwSatInstance,
    variant: str,
    world_bound: int = 5,
    search_budget: int = 100_000_000,
) -> ReductionReport:
    """Empirically check the reduction's answer-preservation on one instance.

    Yes-instances get the full soundness check (witness chain model-checked).
    No-instances get the chain-completeness check over all assignments plus a
    bounded search over arbitrary models, which can only ever be partial
    evidence; its budget keeps the labeling enumeration from blowing up when
    the formula has many propositions.
    """
    phi = build_reduction(inst, variant)
    asg = pwsat_brute_force(inst)
    if asg is not None:
        chain, root = witness_model(inst, asg, variant)
        return ReductionReport(
            variant,
            "yes",
            assignment=asg,
            witness_ok=model_check(chain, root, phi),
            witness_worlds=chain.num_worlds,
        )
    counterexample = None
    n = inst.n
    for mask in range(1 << n):
        cand = {
            v: bool(mask >> (n - 1 - i) & 1) for i, v in enumerate(inst.variables)
        }
        if model_check(_chain_model(inst, cand, variant), 0, phi):
            counterexample = cand
            break
    result = brute_force_sat(phi, max_worlds=world_bound, max_structures=search_budget)
    return ReductionReport(
        variant,
        "no",
        chain_counterexample=counterexample,
        search_status=result.status,
        structures_examined=result.examined,
    )


# --- parameter growth scans -------------------------------------------------


def family_instance(family: str, n: int, blocks: int = 1) -> PwSatInstance:
    """Scan instance: n variables round-robin over blocks, targets size // 2.

    "disjunction" uses the formula q_1 | ... | q_n; "empty" uses the constant
    true formula, leaving only the counting machinery.
    """
    if family not in SCAN_FAMILIES:
        choices = ", ".join(SCAN_FAMILIES)
        raise ValueError(f"unknown instance family {family!r}, expected one of {choices}")
    if not 1 <= blocks <= n:
        raise ValueError("need 1 <= blocks <= n")
    variables = tuple(f"q_{i}" for i in range(1, n + 1))
    block_of = tuple(i % blocks + 1 for i in range(n))
    sizes: dict[int, int] = {}
    for b in block_of:
        sizes[b] = sizes.get(b, 0) + 1
    targets = tuple((p, sizes[p] // 2) for p in sorted(sizes))
    formula: Formula = TRUE
    if family == "disjunction":
        formula = Prop(variables[0])
        for v in variables[1:]:
            formula = Or(formula, Prop(v))
    return PwSatInstance(formula, variables, block_of, targets)


def parameter_growth_scan(
    family: str,
    variant: str,
    sizes=range(2, 7),
    blocks: int = 1,
) -> list[tuple[int, int, int]]:
    """Rows (n, temporal depth, pathwidth estimate) for growing instances.

    The temporal depth column must be constant and the pathwidth estimate
    must stay bounded for the reduction to preserve the parameter.
    """
    rows = []
    for n in sizes:
        phi = build_reduction(family_instance(family, n, blocks), variant)
        _, bound = pathwidth_upper(encode(eliminate_sugar(phi)))
        rows.append((n, temporal_depth(phi), bound))
    return rows
