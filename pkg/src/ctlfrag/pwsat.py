"""Partitioned weighted satisfiability instances.

An instance asks for an assignment satisfying a propositional formula with
exactly a target number of true variables in each block of a partition. The
variable universe is ordered and may be larger than the formula's support.
"""

from __future__ import annotations

from dataclasses import dataclass

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
    format_formula,
    operator_set,
    parse_formula,
    propositions,
)


@dataclass(frozen=True, slots=True)
class PwSatInstance:
    """Propositional formula plus an ordered, partitioned variable universe.

    block_of runs parallel to variables and holds 1-based block ids; targets
    pairs each block id with its required number of true variables.
    """

    formula: Formula
    variables: tuple[str, ...]
    block_of: tuple[int, ...]
    targets: tuple[tuple[int, int], ...]

    def __post_init__(self):
        problem = validate_instance(self)
        if problem is not None:
            raise ValueError(problem)

    @property
    def n(self) -> int:
        return len(self.variables)

    def block_ids(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.block_of)))

    def block_variables(self, block: int) -> tuple[str, ...]:
        return tuple(
            v for v, b in zip(self.variables, self.block_of) if b == block
        )

    def block_size(self, block: int) -> int:
        return sum(1 for b in self.block_of if b == block)

    def target(self, block: int) -> int:
        return dict(self.targets)[block]


def validate_instance(inst: PwSatInstance) -> str | None:
    """None if the instance is well formed, else a description of the defect."""
    if not inst.variables:
        return "instance has no variables"
    if len(set(inst.variables)) != len(inst.variables):
        return "duplicate variable in universe"
    if len(inst.block_of) != len(inst.variables):
        return "block assignment does not cover the universe"
    declared = {b for b, _ in inst.targets}
    if len(declared) != len(inst.targets):
        return "duplicate target for a block"
    used = set(inst.block_of)
    if declared != used:
        stray = sorted(declared ^ used)
        return f"targets and blocks disagree on block {stray[0]}"
    if operator_set(inst.formula):
        return "instance formula must be propositional"
    missing = propositions(inst.formula) - set(inst.variables)
    if missing:
        return f"formula variable {sorted(missing)[0]!r} missing from the universe"
    sizes: dict[int, int] = {}
    for b in inst.block_of:
        sizes[b] = sizes.get(b, 0) + 1
    for b, t in inst.targets:
        if not 0 <= t <= sizes[b]:
            return f"target {t} for block {b} outside 0..{sizes[b]}"
    return None


def assignment_satisfies(f: Formula, asg: dict[str, bool]) -> bool:
    """Propositional truth under a total assignment."""
    match f:
        case Const(value):
            return value
        case Prop(name):
            return asg[name]
        case Not(body):
            return not assignment_satisfies(body, asg)
        case And(left, right):
            return assignment_satisfies(left, asg) and assignment_satisfies(right, asg)
        case Or(left, right):
            return assignment_satisfies(left, asg) or assignment_satisfies(right, asg)
        case Implies(left, right):
            return not assignment_satisfies(left, asg) or assignment_satisfies(right, asg)
        case Iff(left, right):
            return assignment_satisfies(left, asg) == assignment_satisfies(right, asg)
    raise ValueError(f"not a propositional formula: {f!r}")


def meets_targets(inst: PwSatInstance, asg: dict[str, bool]) -> bool:
    for block, want in inst.targets:
        got = sum(1 for v in inst.block_variables(block) if asg[v])
        if got != want:
            return False
    return True


def pwsat_brute_force(
    inst: PwSatInstance, limit: int = 20
) -> dict[str, bool] | None:
    """First satisfying assignment meeting every exact block target, or None.

    Assignments are enumerated by ascending bitmask with the first variable
    in the lowest bit, so the result is deterministic.
    """
    n = inst.n
    if n > limit:
        raise ValueError(f"instance has {n} variables, limit is {limit}")
    for mask in range(1 << n):
        asg = {v: bool(mask >> i & 1) for i, v in enumerate(inst.variables)}
        if assignment_satisfies(inst.formula, asg) and meets_targets(inst, asg):
            return asg
    return None


def format_pwsat(inst: PwSatInstance) -> str:
    lines = [f"formula {format_formula(inst.formula)}"]
    for v, b in zip(inst.variables, inst.block_of):
        lines.append(f"part {v} {b}")
    for b, t in sorted(inst.targets):
        lines.append(f"tg {b} {t}")
    return "\n".join(lines) + "\n"


def parse_pwsat(text: str) -> PwSatInstance:
    """Parse the `formula`/`part`/`tg` line format; inverse of format_pwsat."""
    formula: Formula | None = None
    variables: list[str] = []
    block_of: list[int] = []
    targets: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, _, rest = line.partition(" ")
        if keyword == "formula":
            if formula is not None:
                raise ValueError(f"line {lineno}: second formula line")
            try:
                formula = parse_formula(rest)
            except ParseError as exc:
                raise ValueError(f"line {lineno}: {exc}") from exc
        elif keyword == "part":
            fields = rest.split()
            if len(fields) != 2 or not fields[1].isdigit():
                raise ValueError(f"line {lineno}: expected `part <variable> <block>`")
            if fields[0] in variables:
                raise ValueError(f"line {lineno}: variable {fields[0]!r} repeated")
            variables.append(fields[0])
            block_of.append(int(fields[1]))
        elif keyword == "tg":
            fields = rest.split()
            if len(fields) != 2 or not all(x.lstrip("-").isdigit() for x in fields):
                raise ValueError(f"line {lineno}: expected `tg <block> <count>`")
            targets.append((int(fields[0]), int(fields[1])))
        else:
            raise ValueError(f"line {lineno}: unknown directive {keyword!r}")
    if formula is None:
        raise ValueError("missing formula line")
    return PwSatInstance(formula, tuple(variables), tuple(block_of), tuple(targets))
