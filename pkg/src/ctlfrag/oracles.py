"""Satisfiability oracles: exhaustive model search and bounded tree search.

`brute_force_sat` enumerates every total Kripke structure up to a world bound
and reports the first model in a fixed order, so independent implementations
can be compared witness-for-witness. Satisfaction is only tested at world 0;
any model can be renumbered so its satisfying world is world 0, so this is a
sound symmetry reduction.

`bounded_tree_sat` searches for tree-shaped models of bounded depth whose
leaves carry self-loops. For negation-normal-form formulas built from AX and
EX this is a complete decision procedure once the depth reaches the temporal
depth of the formula.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .formulas import (
    And,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Prop,
    TemporalBinary,
    TemporalUnary,
    is_nnf,
    operator_set,
    propositions,
)
from .kripke import KripkeStructure, model_check

SAT = "sat"
NO_MODEL = "no_model"
BUDGET_EXHAUSTED = "budget_exhausted"


@dataclass(frozen=True)
class SatSearchResult:
    """Outcome of brute_force_sat.

    status is "sat" (structure/world hold a verified witness), "no_model"
    (the bound was exhausted completely), or "budget_exhausted" (the search
    stopped early; examined says how many candidate structures were covered).
    """

    status: str
    structure: KripkeStructure | None = None
    world: int | None = None
    examined: int = 0

    @property
    def satisfiable(self) -> bool | None:
        if self.status == SAT:
            return True
        if self.status == NO_MODEL:
            return False
        return None


def total_successor_maps(n: int):
    """Yield all total successor maps on n worlds as tuples of index tuples.

    Order: the successor set of world 0 is most significant; each set is
    ordered by its bitmask value, which makes the overall order the ascending
    relation-bitmask order.
    """
    nonempty = [tuple(j for j in range(n) if mask >> j & 1) for mask in range(1, 1 << n)]
    return itertools.product(nonempty, repeat=n)


def _label_shift(n: int, k: int, world: int, prop_index: int) -> int:
    # Labeling rank layout: world 0 most significant, first proposition most
    # significant inside a world, so ascending rank = lexicographic labelings.
    return (n - 1 - world) * k + (k - 1 - prop_index)


def _pattern_mask(shift: int, total_bits: int) -> int:
    """Bitmask over ranks r in [0, 2**total_bits) with bit r set iff r>>shift is odd."""
    block = 1 << shift
    mask = ((1 << block) - 1) << block
    width = 2 * block
    while width < (1 << total_bits):
        mask |= mask << width
        width <<= 1
    return mask


def labeling_truth(
    successors: tuple[tuple[int, ...], ...], f: Formula, props: tuple[str, ...]
) -> list[int]:
    """Evaluate f over every labeling of a fixed successor relation at once.

    Returns one bitmask per world; bit r of mask w is the truth value of f at
    world w under the labeling with rank r. Works for full CTL.
    """
    n = len(successors)
    k = len(props)
    bits = n * k
    full = (1 << (1 << bits)) - 1
    prop_masks = {
        (w, j): _pattern_mask(_label_shift(n, k, w, j), bits)
        for w in range(n)
        for j in range(k)
    }
    index = {p: j for j, p in enumerate(props)}
    cache: dict[Formula, list[int]] = {}

    def steps_or(masks: list[int]) -> list[int]:
        return [_or_over(masks, successors[w]) for w in range(n)]

    def steps_and(masks: list[int]) -> list[int]:
        return [_and_over(masks, successors[w], full) for w in range(n)]

    def fix(start: list[int], step) -> list[int]:
        current = start
        while True:
            nxt = step(current)
            if nxt == current:
                return current
            current = nxt

    def ev(g: Formula) -> list[int]:
        if g in cache:
            return cache[g]
        match g:
            case Const(value):
                out = [full if value else 0] * n
            case Prop(name):
                j = index[name]
                out = [prop_masks[(w, j)] for w in range(n)]
            case Not(body):
                out = [full ^ m for m in ev(body)]
            case And(left, right):
                out = [a & b for a, b in zip(ev(left), ev(right))]
            case Or(left, right):
                out = [a | b for a, b in zip(ev(left), ev(right))]
            case Implies(left, right):
                out = [(full ^ a) | b for a, b in zip(ev(left), ev(right))]
            case Iff(left, right):
                out = [full ^ (a ^ b) for a, b in zip(ev(left), ev(right))]
            case TemporalUnary("EX", body):
                out = steps_or(ev(body))
            case TemporalUnary("AX", body):
                out = steps_and(ev(body))
            case TemporalUnary("EF", body):
                base = ev(body)
                out = fix([0] * n, lambda s: [base[w] | m for w, m in enumerate(steps_or(s))])
            case TemporalUnary("AF", body):
                base = ev(body)
                out = fix([0] * n, lambda s: [base[w] | m for w, m in enumerate(steps_and(s))])
            case TemporalUnary("EG", body):
                base = ev(body)
                out = fix(list(base), lambda s: [base[w] & m for w, m in enumerate(steps_or(s))])
            case TemporalUnary("AG", body):
                base = ev(body)
                out = fix(list(base), lambda s: [base[w] & m for w, m in enumerate(steps_and(s))])
            case TemporalBinary("EU", left, right):
                hold, goal = ev(left), ev(right)
                out = fix(
                    [0] * n,
                    lambda s: [goal[w] | (hold[w] & m) for w, m in enumerate(steps_or(s))],
                )
            case TemporalBinary("AU", left, right):
                hold, goal = ev(left), ev(right)
                out = fix(
                    [0] * n,
                    lambda s: [goal[w] | (hold[w] & m) for w, m in enumerate(steps_and(s))],
                )
            case _:
                raise TypeError(f"not a formula: {g!r}")
        cache[g] = out
        return out

    return ev(f)


def _or_over(masks: list[int], worlds: tuple[int, ...]) -> int:
    acc = 0
    for v in worlds:
        acc |= masks[v]
    return acc


def _and_over(masks: list[int], worlds: tuple[int, ...], full: int) -> int:
    acc = full
    for v in worlds:
        acc &= masks[v]
    return acc


def _decode_labeling(
    rank: int, n: int, props: tuple[str, ...]
) -> dict[int, set[str]]:
    k = len(props)
    labels: dict[int, set[str]] = {}
    for w in range(n):
        for j, p in enumerate(props):
            if rank >> _label_shift(n, k, w, j) & 1:
                labels.setdefault(w, set()).add(p)
    return labels


def brute_force_sat(
    f: Formula, max_worlds: int = 3, max_structures: int = 300_000_000
) -> SatSearchResult:
    """Search all total Kripke structures over f's propositions, smallest first.

    The witness, when one exists within the bounds, is the minimum candidate
    in the documented enumeration order (world count, then relation bitmask,
    then labeling bitmask) with the satisfying world fixed to 0.
    """
    props = tuple(sorted(propositions(f)))
    k = len(props)
    examined = 0
    for n in range(1, max_worlds + 1):
        bits = n * k
        per_relation = 1 << bits
        for successors in total_successor_maps(n):
            if examined + per_relation > max_structures:
                return SatSearchResult(BUDGET_EXHAUSTED, examined=examined)
            masks = labeling_truth(successors, f, props)
            examined += per_relation
            if masks[0]:
                rank = (masks[0] & -masks[0]).bit_length() - 1
                witness = KripkeStructure.of(
                    n,
                    [(w, v) for w in range(n) for v in successors[w]],
                    _decode_labeling(rank, n, props),
                    set(props),
                )
                if not model_check(witness, 0, f):
                    raise AssertionError("labeling engine and model checker disagree")
                return SatSearchResult(SAT, witness, 0, examined)
    return SatSearchResult(NO_MODEL, examined=examined)


# --- bounded tree search ---------------------------------------------------


@dataclass
class _TreeNode:
    label: frozenset[str]
    children: list["_TreeNode"] = field(default_factory=list)


def _require_ax_ex_nnf(f: Formula) -> None:
    if not is_nnf(f):
        raise ValueError("formula must be in negation normal form")
    extra = operator_set(f) - {"AX", "EX"}
    if extra:
        raise ValueError(f"operator {sorted(extra)[0]} is outside the AX/EX fragment")


def _choices(obligations: frozenset[Formula]):
    """Resolve the propositional structure of a set of obligations.

    Yields (pos, neg, ax_bodies, ex_bodies) tuples, one per way of choosing
    disjuncts, skipping propositionally inconsistent choices.
    """

    from .formulas import format_formula

    ordered = sorted(obligations, key=format_formula)

    def go(pending: list[Formula], pos: set, neg: set, ax: list, ex: list):
        if not pending:
            yield frozenset(pos), frozenset(neg), tuple(ax), tuple(ex)
            return
        g = pending[-1]
        rest = pending[:-1]
        match g:
            case Const(True):
                yield from go(rest, pos, neg, ax, ex)
            case Const(False):
                return
            case Prop(name):
                if name in neg:
                    return
                yield from go(rest, pos | {name}, neg, ax, ex)
            case Not(Prop(name)):
                if name in pos:
                    return
                yield from go(rest, pos, neg | {name}, ax, ex)
            case And(left, right):
                yield from go(rest + [right, left], pos, neg, ax, ex)
            case Or(left, right):
                yield from go(rest + [left], pos, neg, ax, ex)
                yield from go(rest + [right], pos, neg, ax, ex)
            case TemporalUnary("AX", body):
                yield from go(rest, pos, neg, ax + [body] if body not in ax else ax, ex)
            case TemporalUnary("EX", body):
                yield from go(rest, pos, neg, ax, ex + [body] if body not in ex else ex)
            case _:
                raise ValueError(f"obligation outside the NNF AX/EX fragment: {g!r}")

    yield from go(ordered, set(), set(), [], [])


def _leaf_label(
    obligations: frozenset[Formula], memo: dict
) -> frozenset[str] | None:
    """Label for a single self-looped world satisfying all obligations, if any.

    On a self-looped leaf, AX g and EX g both mean g at the leaf itself, so
    temporal obligations collapse into their bodies until only literals are
    left.
    """
    if obligations in memo:
        return memo[obligations]
    memo[obligations] = None
    result = None
    for pos, neg, ax, ex in _choices(obligations):
        pending = set(ax) | set(ex)
        if not pending:
            result = frozenset(pos)
            break
        nxt = frozenset(
            {Prop(p) for p in pos} | {Not(Prop(p)) for p in neg} | pending
        )
        found = _leaf_label(nxt, memo)
        if found is not None:
            result = found
            break
    memo[obligations] = result
    return result


def _solve(
    obligations: frozenset[Formula],
    depth: int,
    memo: dict,
    leaf_memo: dict,
) -> _TreeNode | None:
    key = (obligations, depth)
    if key in memo:
        return memo[key]
    result = None
    for pos, neg, ax, ex in _choices(obligations):
        label = _leaf_label(
            frozenset({Prop(p) for p in pos} | {Not(Prop(p)) for p in neg} | set(ax) | set(ex)),
            leaf_memo,
        )
        if label is not None:
            result = _TreeNode(label)
            break
        if depth == 0:
            continue
        if ex:
            children = []
            for body in ex:
                child = _solve(frozenset({body, *ax}), depth - 1, memo, leaf_memo)
                if child is None:
                    break
                children.append(child)
            else:
                result = _TreeNode(frozenset(pos), children)
                break
        elif ax:
            child = _solve(frozenset(ax), depth - 1, memo, leaf_memo)
            if child is not None:
                result = _TreeNode(frozenset(pos), [child])
                break
    memo[key] = result
    return result


def bounded_tree_model(
    f: Formula, depth: int
) -> tuple[KripkeStructure, int, int] | None:
    """Tree-shaped model of f with depth <= depth and self-looped leaves.

    Returns (structure, root, tree depth) or None. Requires f in NNF over
    {AX, EX}.
    """
    _require_ax_ex_nnf(f)
    root = _solve(frozenset({f}), depth, {}, {})
    if root is None:
        return None

    edges: list[tuple[int, int]] = []
    labels: dict[int, set[str]] = {}
    counter = itertools.count()

    def emit(node: _TreeNode) -> tuple[int, int]:
        idx = next(counter)
        labels[idx] = set(node.label)
        if not node.children:
            edges.append((idx, idx))
            return idx, 0
        height = 0
        for child in node.children:
            cidx, cheight = emit(child)
            edges.append((idx, cidx))
            height = max(height, cheight + 1)
        return idx, height

    root_idx, height = emit(root)
    k = KripkeStructure.of(next(counter), edges, labels, set(propositions(f)))
    return k, root_idx, height


def bounded_tree_sat(f: Formula, depth: int) -> bool:
    """Is f satisfiable by a depth-bounded tree model with self-looped leaves?"""
    return bounded_tree_model(f, depth) is not None
