"""Relational encodings of formulas and their graph views.

A formula becomes a finite relational structure: one universe element per
occurrence of each compound subformula, with proposition and constant leaves
shared. Unary predicates mark what an element represents (a variable, a
constant, a temporal operator, the root); binary and ternary tuples record
the argument-of relationships, always listing the parent last.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formulas import (
    And,
    BINARY_OPS,
    Const,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Prop,
    TemporalBinary,
    TemporalUnary,
    UNARY_OPS,
    format_formula,
    temporal_depth,
)

VOCABULARY: dict[str, int] = {
    "const_true": 1,
    "const_false": 1,
    "var": 1,
    "repr": 1,
    "reprPL": 1,
    "conn_and_1": 2,
    "conn_and_2": 2,
    "conn_or_1": 2,
    "conn_or_2": 2,
    "conn_not_1": 2,
}
for _op in UNARY_OPS:
    VOCABULARY[f"repr_{_op}"] = 1
    VOCABULARY[f"body_{_op}"] = 2
for _op in BINARY_OPS:
    VOCABULARY[f"repr_{_op}"] = 1
    VOCABULARY[f"body_{_op}"] = 3


@dataclass
class RelationalStructure:
    """A finite universe of named elements plus relations over the vocabulary.

    universe[i] is the display name of element i; relations maps every
    vocabulary predicate to its set of index tuples (possibly empty).
    """

    universe: tuple[str, ...]
    relations: dict[str, set[tuple[int, ...]]]

    def members(self, predicate: str) -> set[tuple[int, ...]]:
        return self.relations[predicate]


def validate_structure(a: RelationalStructure) -> str | None:
    """Return None if a is well formed over the vocabulary, else a message."""
    n = len(a.universe)
    for pred, tuples in a.relations.items():
        if pred not in VOCABULARY:
            return f"unknown predicate {pred!r}"
        arity = VOCABULARY[pred]
        for t in tuples:
            if len(t) != arity:
                return f"{pred} tuple {t} has arity {len(t)}, expected {arity}"
            for e in t:
                if not 0 <= e < n:
                    return f"{pred} tuple {t} mentions element {e} outside 0..{n - 1}"
    for pred in VOCABULARY:
        if pred not in a.relations:
            return f"missing relation table for {pred!r}"
    return None


def encode(f: Formula) -> RelationalStructure:
    """Encode a sugar-free formula as a relational structure.

    Elements are numbered in pre-order of the AST (root is element 0,
    children left to right); each proposition or constant gets a single
    shared element, while compound occurrences stay distinct. Element names
    are the printed subformula with spaces removed.
    """
    names: list[str] = []
    forms: list[Formula] = []
    relations: dict[str, set[tuple[int, ...]]] = {p: set() for p in VOCABULARY}
    leaf_ids: dict[Formula, int] = {}

    def add(pred: str, *t: int) -> None:
        relations[pred].add(t)

    def visit(g: Formula) -> int:
        if g in leaf_ids:
            return leaf_ids[g]
        idx = len(names)
        names.append(format_formula(g).replace(" ", ""))
        forms.append(g)
        match g:
            case Const(True):
                add("const_true", idx)
                leaf_ids[g] = idx
            case Const(False):
                add("const_false", idx)
                leaf_ids[g] = idx
            case Prop(_):
                add("var", idx)
                leaf_ids[g] = idx
            case Not(body):
                add("conn_not_1", visit(body), idx)
            case And(left, right):
                add("conn_and_1", visit(left), idx)
                add("conn_and_2", visit(right), idx)
            case Or(left, right):
                add("conn_or_1", visit(left), idx)
                add("conn_or_2", visit(right), idx)
            case TemporalUnary(op, body):
                add(f"repr_{op}", idx)
                add(f"body_{op}", visit(body), idx)
            case TemporalBinary(op, left, right):
                add(f"repr_{op}", idx)
                add(f"body_{op}", visit(left), visit(right), idx)
            case Implies() | Iff():
                raise ValueError("eliminate -> and <-> before encoding")
            case _:
                raise TypeError(f"not a formula: {g!r}")
        return idx

    root = visit(f)
    add("repr", root)
    for idx, g in enumerate(forms):
        if temporal_depth(g) == 0:
            add("reprPL", idx)
    return RelationalStructure(tuple(names), relations)


def gaifman_graph(a: RelationalStructure) -> list[tuple[int, int]]:
    """Undirected argument-to-parent edges, as drawn: each non-final tuple
    position connects to the final (parent) position. Sorted pairs (u, v),
    u < v."""
    edges: set[tuple[int, int]] = set()
    for tuples in a.relations.values():
        for t in tuples:
            parent = t[-1]
            for e in t[:-1]:
                if e != parent:
                    edges.add((min(e, parent), max(e, parent)))
    return sorted(edges)


def primal_edges(a: RelationalStructure) -> list[tuple[int, int]]:
    """All co-occurrence edges: u and v appear together in some tuple.

    Width computations use this graph so that every relation tuple (ternary
    included) ends up inside a single bag of any valid decomposition.
    """
    edges: set[tuple[int, int]] = set()
    for tuples in a.relations.values():
        for t in tuples:
            for i, u in enumerate(t):
                for v in t[i + 1 :]:
                    if u != v:
                        edges.add((min(u, v), max(u, v)))
    return sorted(edges)


def format_structure(a: RelationalStructure) -> str:
    """Text form: `element i name` lines, then `rel PRED i j ...` lines."""
    lines = [f"element {i} {name}" for i, name in enumerate(a.universe)]
    for pred in sorted(a.relations):
        for t in sorted(a.relations[pred]):
            lines.append(f"rel {pred} " + " ".join(str(e) for e in t))
    return "\n".join(lines) + "\n"


def parse_structure(text: str) -> RelationalStructure:
    """Parse the `element`/`rel` text format; `#` starts a comment."""
    elements: dict[int, str] = {}
    raw_rels: list[tuple[str, tuple[int, ...], int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "element" and len(parts) == 3:
                elements[int(parts[1])] = parts[2]
            elif parts[0] == "rel" and len(parts) >= 2:
                raw_rels.append((parts[1], tuple(int(x) for x in parts[2:]), lineno))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
    if not elements:
        raise ValueError("no element lines")
    if sorted(elements) != list(range(len(elements))):
        raise ValueError("element indices must be contiguous from 0")
    universe = tuple(elements[i] for i in range(len(elements)))
    relations: dict[str, set[tuple[int, ...]]] = {p: set() for p in VOCABULARY}
    for pred, t, lineno in raw_rels:
        if pred not in VOCABULARY:
            raise ValueError(f"line {lineno}: unknown predicate {pred!r}")
        if len(t) != VOCABULARY[pred]:
            raise ValueError(
                f"line {lineno}: {pred} takes {VOCABULARY[pred]} arguments, got {len(t)}"
            )
        relations[pred].add(t)
    a = RelationalStructure(universe, relations)
    problem = validate_structure(a)
    if problem is not None:
        raise ValueError(problem)
    return a
