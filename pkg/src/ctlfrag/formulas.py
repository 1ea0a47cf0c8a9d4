"""CTL formula ASTs, parsing, printing, and normal forms.

The concrete syntax accepted by :func:`parse_formula`:

    true, false          constants
    p, q_1, xyz          propositions ([A-Za-z0-9_]+, not a keyword)
    ~f                   negation
    f & g, f | g         conjunction, disjunction
    f -> g, f <-> g      implication, biconditional (right associative)
    AX f, EX f, AF f,    unary temporal operators (bind like ~)
    EF f, AG f, EG f
    A[f U g], E[f U g]   until

Binding strength: ~ and the unary temporal operators bind tighter than &,
then |, then ->, then <->.
"""

from __future__ import annotations

from dataclasses import dataclass

UNARY_OPS = ("AX", "EX", "AF", "EF", "AG", "EG")
BINARY_OPS = ("AU", "EU")
TEMPORAL_OPS = UNARY_OPS + BINARY_OPS

# Path-quantifier duals used when pushing negations inward.
DUAL_UNARY = {"AX": "EX", "EX": "AX", "AF": "EG", "EG": "AF", "AG": "EF", "EF": "AG"}

KEYWORDS = frozenset({"true", "false", "A", "E", "U", *UNARY_OPS})


class Formula:
    """Base class for CTL formula nodes. All nodes are immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Const(Formula):
    value: bool


@dataclass(frozen=True, slots=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True, slots=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, slots=True)
class TemporalUnary(Formula):
    """AX, EX, AF, EF, AG or EG applied to a formula."""

    op: str
    body: Formula

    def __post_init__(self) -> None:
        if self.op not in UNARY_OPS:
            raise ValueError(f"unknown unary temporal operator {self.op!r}")


@dataclass(frozen=True, slots=True)
class TemporalBinary(Formula):
    """A[left U right] or E[left U right]."""

    op: str
    left: Formula
    right: Formula

    def __post_init__(self) -> None:
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown binary temporal operator {self.op!r}")


TRUE = Const(True)
FALSE = Const(False)


class ParseError(ValueError):
    """Raised on malformed formula text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


_SYMBOLS = ("<->", "->", "~", "&", "|", "(", ")", "[", "]")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    """Return (kind, value, position) triples; kind is 'sym', 'name' or 'end'."""
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(("sym", sym, i))
                i += len(sym)
                break
        else:
            if c.isalnum() or c == "_":
                j = i
                while j < n and (text[j].isalnum() or text[j] == "_"):
                    j += 1
                tokens.append(("name", text[i:j], i))
                i = j
            else:
                raise ParseError(f"unexpected character {c!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str) -> None:
        kind, val, at = self.take()
        if val != value or kind == "end":
            raise ParseError(f"expected {value!r}, found {val or 'end of input'!r}", at)

    def formula(self) -> Formula:
        left = self.implication()
        if self.peek()[1] == "<->":
            self.take()
            return Iff(left, self.formula())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        node = self.conjunction()
        while self.peek()[1] == "|":
            self.take()
            node = Or(node, self.conjunction())
        return node

    def conjunction(self) -> Formula:
        node = self.unary()
        while self.peek()[1] == "&":
            self.take()
            node = And(node, self.unary())
        return node

    def unary(self) -> Formula:
        kind, val, at = self.peek()
        if val == "~":
            self.take()
            return Not(self.unary())
        if kind == "name" and val in UNARY_OPS:
            self.take()
            return TemporalUnary(val, self.unary())
        return self.primary()

    def primary(self) -> Formula:
        kind, val, at = self.take()
        if val == "(":
            inner = self.formula()
            self.expect(")")
            return inner
        if kind != "name":
            raise ParseError(f"expected a formula, found {val or 'end of input'!r}", at)
        if val == "true":
            return TRUE
        if val == "false":
            return FALSE
        if val in ("A", "E"):
            self.expect("[")
            left = self.formula()
            ukind, uval, uat = self.take()
            if uval != "U":
                raise ParseError(f"expected 'U', found {uval or 'end of input'!r}", uat)
            right = self.formula()
            self.expect("]")
            return TemporalBinary(val + "U", left, right)
        if val in KEYWORDS:
            raise ParseError(f"keyword {val!r} cannot be used as a proposition", at)
        return Prop(val)


def parse_formula(text: str) -> Formula:
    """Parse concrete syntax into a formula AST; raises ParseError on bad input."""
    parser = _Parser(text)
    node = parser.formula()
    kind, val, at = parser.peek()
    if kind != "end":
        raise ParseError(f"trailing input {val!r}", at)
    return node


# Printer precedence levels; higher binds tighter.
_PREC_IFF, _PREC_IMP, _PREC_OR, _PREC_AND, _PREC_UNARY, _PREC_ATOM = 1, 2, 3, 4, 5, 6


def _prec(f: Formula) -> int:
    match f:
        case Iff():
            return _PREC_IFF
        case Implies():
            return _PREC_IMP
        case Or():
            return _PREC_OR
        case And():
            return _PREC_AND
        case Not() | TemporalUnary():
            return _PREC_UNARY
        case _:
            return _PREC_ATOM


def format_formula(f: Formula) -> str:
    """Render a formula so that parse_formula(format_formula(f)) == f."""
    return _fmt(f, 0)


def _fmt(f: Formula, minprec: int) -> str:
    p = _prec(f)
    match f:
        case Const(value):
            out = "true" if value else "false"
        case Prop(name):
            out = name
        case Not(body):
            out = "~" + _fmt(body, _PREC_UNARY)
        case And(left, right):
            out = f"{_fmt(left, _PREC_AND)} & {_fmt(right, _PREC_AND + 1)}"
        case Or(left, right):
            out = f"{_fmt(left, _PREC_OR)} | {_fmt(right, _PREC_OR + 1)}"
        case Implies(left, right):
            out = f"{_fmt(left, _PREC_IMP + 1)} -> {_fmt(right, _PREC_IMP)}"
        case Iff(left, right):
            out = f"{_fmt(left, _PREC_IFF + 1)} <-> {_fmt(right, _PREC_IFF)}"
        case TemporalUnary(op, body):
            out = f"{op} {_fmt(body, _PREC_UNARY)}"
        case TemporalBinary(op, left, right):
            out = f"{op[0]}[{_fmt(left, 0)} U {_fmt(right, 0)}]"
        case _:
            raise TypeError(f"not a formula: {f!r}")
    if p < minprec:
        return f"({out})"
    return out


def to_nnf(f: Formula) -> Formula:
    """Negation normal form: ->/<-> eliminated, negations pushed to propositions.

    Negating A[f U g] uses E[~g U (~f & ~g)] | EG ~g. No negation-free
    equivalent of ~E[f U g] exists over the eight operators (a weak-until
    operator would be needed), so there the negation stays directly on the EU
    node; the result is still equivalent to the input.
    """
    match f:
        case Const() | Prop():
            return f
        case Not(body):
            return _nnf_negated(body)
        case And(left, right):
            return And(to_nnf(left), to_nnf(right))
        case Or(left, right):
            return Or(to_nnf(left), to_nnf(right))
        case Implies(left, right):
            return Or(_nnf_negated(left), to_nnf(right))
        case Iff(left, right):
            return And(
                Or(_nnf_negated(left), to_nnf(right)),
                Or(_nnf_negated(right), to_nnf(left)),
            )
        case TemporalUnary(op, body):
            return TemporalUnary(op, to_nnf(body))
        case TemporalBinary(op, left, right):
            return TemporalBinary(op, to_nnf(left), to_nnf(right))
    raise TypeError(f"not a formula: {f!r}")


def _nnf_negated(f: Formula) -> Formula:
    """NNF of ~f."""
    match f:
        case Const(value):
            return Const(not value)
        case Prop():
            return Not(f)
        case Not(body):
            return to_nnf(body)
        case And(left, right):
            return Or(_nnf_negated(left), _nnf_negated(right))
        case Or(left, right):
            return And(_nnf_negated(left), _nnf_negated(right))
        case Implies(left, right):
            return And(to_nnf(left), _nnf_negated(right))
        case Iff(left, right):
            return Or(
                And(to_nnf(left), _nnf_negated(right)),
                And(_nnf_negated(left), to_nnf(right)),
            )
        case TemporalUnary(op, body):
            return TemporalUnary(DUAL_UNARY[op], _nnf_negated(body))
        case TemporalBinary("AU", left, right):
            nleft, nright = _nnf_negated(left), _nnf_negated(right)
            return Or(
                TemporalBinary("EU", nright, And(nleft, nright)),
                TemporalUnary("EG", nright),
            )
        case TemporalBinary("EU", left, right):
            return Not(TemporalBinary("EU", to_nnf(left), to_nnf(right)))
    raise TypeError(f"not a formula: {f!r}")


def eliminate_sugar(f: Formula) -> Formula:
    """Rewrite -> and <-> in terms of ~, &, | without pushing negations."""
    match f:
        case Const() | Prop():
            return f
        case Not(body):
            return Not(eliminate_sugar(body))
        case And(left, right):
            return And(eliminate_sugar(left), eliminate_sugar(right))
        case Or(left, right):
            return Or(eliminate_sugar(left), eliminate_sugar(right))
        case Implies(left, right):
            return Or(Not(eliminate_sugar(left)), eliminate_sugar(right))
        case Iff(left, right):
            a, b = eliminate_sugar(left), eliminate_sugar(right)
            return And(Or(Not(a), b), Or(Not(b), a))
        case TemporalUnary(op, body):
            return TemporalUnary(op, eliminate_sugar(body))
        case TemporalBinary(op, left, right):
            return TemporalBinary(op, eliminate_sugar(left), eliminate_sugar(right))
    raise TypeError(f"not a formula: {f!r}")


def temporal_depth(f: Formula) -> int:
    """Maximum nesting depth of temporal operators."""
    match f:
        case Const() | Prop():
            return 0
        case Not(body):
            return temporal_depth(body)
        case And(left, right) | Or(left, right) | Implies(left, right) | Iff(left, right):
            return max(temporal_depth(left), temporal_depth(right))
        case TemporalUnary(_, body):
            return temporal_depth(body) + 1
        case TemporalBinary(_, left, right):
            return max(temporal_depth(left), temporal_depth(right)) + 1
    raise TypeError(f"not a formula: {f!r}")


def _children(f: Formula) -> tuple[Formula, ...]:
    match f:
        case Const() | Prop():
            return ()
        case Not(body) | TemporalUnary(_, body):
            return (body,)
        case And(left, right) | Or(left, right) | Implies(left, right) | Iff(left, right):
            return (left, right)
        case TemporalBinary(_, left, right):
            return (left, right)
    raise TypeError(f"not a formula: {f!r}")


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas in pre-order of first occurrence, including f."""
    seen: set[Formula] = set()
    out: list[Formula] = []
    stack = [f]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        out.append(node)
        stack.extend(reversed(_children(node)))
    return out


def operator_set(f: Formula) -> frozenset[str]:
    """The temporal operators occurring in f."""
    ops = set()
    for g in subformulas(f):
        match g:
            case TemporalUnary(op, _):
                ops.add(op)
            case TemporalBinary(op, _, _):
                ops.add(op)
    return frozenset(ops)


def propositions(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Prop))


def formula_size(f: Formula) -> int:
    """Node count of the AST (occurrences, not distinct subformulas)."""
    return 1 + sum(formula_size(c) for c in _children(f))


def is_nnf(f: Formula) -> bool:
    """True iff negations appear only on propositions and there is no ->/<->."""
    match f:
        case Const() | Prop():
            return True
        case Not(Prop()):
            return True
        case Not(_) | Implies(_, _) | Iff(_, _):
            return False
        case _:
            return all(is_nnf(c) for c in _children(f))
