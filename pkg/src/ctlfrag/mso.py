"""Monadic second-order formulas and their evaluation over finite structures.

The evaluator is Tarskian truth with short-circuiting, plus optimizations
that matter for the machine-built satisfiability formulas:

- guard fusion: a quantifier whose body is guarded by a relation atom or a
  set membership iterates the matching tuples or set bits instead of the
  whole universe;
- definable sets: an existential set variable pinned down by a biconditional
  conjunct (forall x (iff (member x X) psi)) is computed directly instead of
  enumerated;
- closed-conjunct filtering: under an existential set quantifier, a conjunct
  whose only free variable is the quantified set is solved once and its
  satisfying sets cached, shrinking the enumeration to those candidates;
- memoization on quantifier nodes keyed by the node and its free-variable
  bindings, which makes shared sub-DAGs cost linear work instead of
  exponential.

Set values are bitmasks internally; the public assignment type uses frozen
sets of element indices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .encoding import RelationalStructure, VOCABULARY


class MsoFormula:
    """Base class for MSO nodes. Immutable and hashable."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Atom(MsoFormula):
    """Relation membership P(x1, ..., xk) over the structure's vocabulary."""

    pred: str
    args: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class Eq(MsoFormula):
    left: str
    right: str


@dataclass(frozen=True, slots=True)
class Member(MsoFormula):
    """Set membership X(x): element variable `var` is in set variable `setvar`."""

    var: str
    setvar: str


@dataclass(frozen=True, slots=True)
class MsoNot(MsoFormula):
    body: MsoFormula


@dataclass(frozen=True, slots=True)
class MsoAnd(MsoFormula):
    left: MsoFormula
    right: MsoFormula


@dataclass(frozen=True, slots=True)
class MsoOr(MsoFormula):
    left: MsoFormula
    right: MsoFormula


@dataclass(frozen=True, slots=True)
class MsoImplies(MsoFormula):
    left: MsoFormula
    right: MsoFormula


@dataclass(frozen=True, slots=True)
class MsoIff(MsoFormula):
    left: MsoFormula
    right: MsoFormula


@dataclass(frozen=True, slots=True)
class Exists(MsoFormula):
    var: str
    body: MsoFormula


@dataclass(frozen=True, slots=True)
class Forall(MsoFormula):
    var: str
    body: MsoFormula


@dataclass(frozen=True, slots=True)
class ExistsSet(MsoFormula):
    var: str
    body: MsoFormula


@dataclass(frozen=True, slots=True)
class ForallSet(MsoFormula):
    var: str
    body: MsoFormula


@dataclass
class MsoAssignment:
    """Bindings for the free variables of a formula."""

    elements: dict[str, int] = field(default_factory=dict)
    sets: dict[str, frozenset[int]] = field(default_factory=dict)


def free_variables(f: MsoFormula) -> frozenset[str]:
    """Free element and set variables of f (one shared namespace)."""
    return _free_cached(f, {})


def _free_cached(f: MsoFormula, cache: dict[int, frozenset[str]]) -> frozenset[str]:
    got = cache.get(id(f))
    if got is not None:
        return got
    match f:
        case Atom(_, args):
            out = frozenset(args)
        case Eq(left, right):
            out = frozenset((left, right))
        case Member(var, setvar):
            out = frozenset((var, setvar))
        case MsoNot(body):
            out = _free_cached(body, cache)
        case MsoAnd(l, r) | MsoOr(l, r) | MsoImplies(l, r) | MsoIff(l, r):
            out = _free_cached(l, cache) | _free_cached(r, cache)
        case Exists(var, body) | Forall(var, body) | ExistsSet(var, body) | ForallSet(var, body):
            out = _free_cached(body, cache) - {var}
        case _:
            raise TypeError(f"not an MSO formula: {f!r}")
    cache[id(f)] = out
    return out


def _flatten_and(f: MsoFormula) -> list[MsoFormula]:
    if isinstance(f, MsoAnd):
        return _flatten_and(f.left) + _flatten_and(f.right)
    return [f]


class _Evaluator:
    def __init__(self, a: RelationalStructure):
        self.n = len(a.universe)
        self.rel = a.relations
        self.full = (1 << self.n) - 1
        self.free_cache: dict[int, frozenset[str]] = {}
        self.memo: dict[tuple, bool] = {}
        self.closed_masks: dict[int, tuple[int, ...]] = {}

    def free(self, f: MsoFormula) -> frozenset[str]:
        return _free_cached(f, self.free_cache)

    def ev(self, f: MsoFormula, env: dict) -> bool:
        match f:
            case Atom(pred, args):
                return tuple(env[v] for v in args) in self.rel[pred]
            case Eq(left, right):
                return env[left] == env[right]
            case Member(var, setvar):
                return env[setvar] >> env[var] & 1 == 1
            case MsoNot(body):
                return not self.ev(body, env)
            case MsoAnd(left, right):
                return self.ev(left, env) and self.ev(right, env)
            case MsoOr(left, right):
                return self.ev(left, env) or self.ev(right, env)
            case MsoImplies(left, right):
                return not self.ev(left, env) or self.ev(right, env)
            case MsoIff(left, right):
                return self.ev(left, env) == self.ev(right, env)
            case Exists(var, body):
                return self.quantifier(f, env, lambda: self.exists(var, body, env))
            case Forall(var, body):
                return self.quantifier(f, env, lambda: self.forall(var, body, env))
            case ExistsSet(var, body):
                return self.quantifier(f, env, lambda: self.exists_set(var, body, env))
            case ForallSet(var, body):
                return self.quantifier(f, env, lambda: self.forall_set(var, body, env))
            case _:
                raise TypeError(f"not an MSO formula: {f!r}")

    def quantifier(self, f: MsoFormula, env: dict, compute) -> bool:
        key = (id(f), tuple(sorted((v, env[v]) for v in self.free(f))))
        got = self.memo.get(key)
        if got is None:
            got = compute()
            self.memo[key] = got
        return got

    def bound_candidates(self, var: str, guard: MsoFormula, env: dict):
        """Values var can take so guard holds, or None when not fusible.

        Fusible guards: a relation atom over var plus already-bound
        variables, or membership of var in a bound set variable.
        """
        match guard:
            case Atom(pred, args) if var in args and all(
                x == var or x in env for x in args
            ):
                out = []
                for t in self.rel[pred]:
                    value = None
                    for x, e in zip(args, t):
                        if x == var:
                            if value is None:
                                value = e
                            elif value != e:
                                break
                        elif env[x] != e:
                            break
                    else:
                        out.append(value)
                return out
            case Member(mvar, setvar) if mvar == var and setvar in env:
                mask = env[setvar]
                out = []
                while mask:
                    out.append((mask & -mask).bit_length() - 1)
                    mask &= mask - 1
                return out
        return None

    def with_binding(self, env: dict, var: str, value, body_eval) -> bool:
        missing = var not in env
        old = env.get(var)
        env[var] = value
        try:
            return body_eval()
        finally:
            if missing:
                del env[var]
            else:
                env[var] = old

    def exists(self, var: str, body: MsoFormula, env: dict) -> bool:
        guard, rest = None, None
        match body:
            case MsoAnd(left, right):
                guard, rest = left, right
            case Atom() | Member():
                guard, rest = body, None
        if guard is not None:
            candidates = self.bound_candidates(var, guard, env)
            if candidates is not None:
                return any(
                    self.with_binding(
                        env, var, e, lambda: rest is None or self.ev(rest, env)
                    )
                    for e in candidates
                )
        return any(
            self.with_binding(env, var, e, lambda: self.ev(body, env))
            for e in range(self.n)
        )

    def forall(self, var: str, body: MsoFormula, env: dict) -> bool:
        if isinstance(body, MsoImplies):
            candidates = self.bound_candidates(var, body.left, env)
            if candidates is not None:
                rest = body.right
                return all(
                    self.with_binding(env, var, e, lambda: self.ev(rest, env))
                    for e in candidates
                )
        return all(
            self.with_binding(env, var, e, lambda: self.ev(body, env))
            for e in range(self.n)
        )

    def defined_mask(self, var: str, psi: MsoFormula, env: dict) -> int:
        mask = 0
        for e in range(self.n):
            if self.with_binding(env, var, e, lambda: self.ev(psi, env)):
                mask |= 1 << e
        return mask

    def conjunct_masks(self, c: MsoFormula, setvar: str) -> tuple[int, ...]:
        got = self.closed_masks.get(id(c))
        if got is None:
            scratch: dict = {}
            out = []
            for m in range(self.full + 1):
                scratch[setvar] = m
                if self.ev(c, scratch):
                    out.append(m)
            got = tuple(out)
            self.closed_masks[id(c)] = got
        return got

    def exists_set(self, var: str, body: MsoFormula, env: dict) -> bool:
        conjuncts = _flatten_and(body)
        for i, c in enumerate(conjuncts):
            match c:
                case Forall(xv, MsoIff(Member(mv, sv), psi)) if (
                    sv == var and mv == xv and var not in self.free(psi)
                ):
                    mask = self.defined_mask(xv, psi, env)
                    rest = conjuncts[:i] + conjuncts[i + 1 :]
                    return self.with_binding(
                        env, var, mask, lambda: all(self.ev(r, env) for r in rest)
                    )
        for i, c in enumerate(conjuncts):
            if self.free(c) <= {var}:
                rest = conjuncts[:i] + conjuncts[i + 1 :]
                return any(
                    self.with_binding(
                        env, var, m, lambda: all(self.ev(r, env) for r in rest)
                    )
                    for m in self.conjunct_masks(c, var)
                )
        return any(
            self.with_binding(env, var, m, lambda: self.ev(body, env))
            for m in range(self.full + 1)
        )

    def forall_set(self, var: str, body: MsoFormula, env: dict) -> bool:
        return all(
            self.with_binding(env, var, m, lambda: self.ev(body, env))
            for m in range(self.full + 1)
        )


def _check_syntax(a: RelationalStructure, f: MsoFormula) -> None:
    stack = [f]
    seen: set[int] = set()
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        match g:
            case Atom(pred, args):
                if pred not in a.relations:
                    raise ValueError(f"unknown predicate {pred!r}")
                arity = VOCABULARY.get(pred)
                if arity is not None and len(args) != arity:
                    raise ValueError(
                        f"{pred} takes {arity} arguments, got {len(args)}"
                    )
            case Eq() | Member():
                pass
            case MsoNot(body):
                stack.append(body)
            case MsoAnd(l, r) | MsoOr(l, r) | MsoImplies(l, r) | MsoIff(l, r):
                stack.extend((l, r))
            case Exists(_, body) | Forall(_, body) | ExistsSet(_, body) | ForallSet(_, body):
                stack.append(body)
            case _:
                raise TypeError(f"not an MSO formula: {g!r}")


def evaluate(
    a: RelationalStructure, f: MsoFormula, asg: MsoAssignment | None = None
) -> bool:
    """Truth of f in structure a under the assignment of its free variables."""
    _check_syntax(a, f)
    env: dict = {}
    if asg is not None:
        n = len(a.universe)
        for v, e in asg.elements.items():
            if not 0 <= e < n:
                raise ValueError(f"assignment binds {v} to {e}, outside the universe")
            env[v] = e
        for v, members in asg.sets.items():
            mask = 0
            for e in members:
                if not 0 <= e < n:
                    raise ValueError(
                        f"assignment puts {e} in {v}, outside the universe"
                    )
                mask |= 1 << e
            env[v] = mask
    missing = free_variables(f) - set(env)
    if missing:
        raise ValueError(f"unbound variable {sorted(missing)[0]!r}")
    return _Evaluator(a).ev(f, env)


# --- s-expression text form -------------------------------------------------

_FORMS = {
    "not", "and", "or", "implies", "iff",
    "exists", "forall", "exists-set", "forall-set",
    "member", "=",
}


def format_mso(f: MsoFormula) -> str:
    """Render as an s-expression; parse_mso inverts this."""
    match f:
        case Atom(pred, args):
            return "(" + " ".join((pred, *args)) + ")"
        case Eq(left, right):
            return f"(= {left} {right})"
        case Member(var, setvar):
            return f"(member {var} {setvar})"
        case MsoNot(body):
            return f"(not {format_mso(body)})"
        case MsoAnd(l, r):
            return f"(and {format_mso(l)} {format_mso(r)})"
        case MsoOr(l, r):
            return f"(or {format_mso(l)} {format_mso(r)})"
        case MsoImplies(l, r):
            return f"(implies {format_mso(l)} {format_mso(r)})"
        case MsoIff(l, r):
            return f"(iff {format_mso(l)} {format_mso(r)})"
        case Exists(var, body):
            return f"(exists {var} {format_mso(body)})"
        case Forall(var, body):
            return f"(forall {var} {format_mso(body)})"
        case ExistsSet(var, body):
            return f"(exists-set {var} {format_mso(body)})"
        case ForallSet(var, body):
            return f"(forall-set {var} {format_mso(body)})"
    raise TypeError(f"not an MSO formula: {f!r}")


def _sexp_tokens(text: str) -> list[str]:
    return text.replace("(", " ( ").replace(")", " ) ").split()


def parse_mso(text: str) -> MsoFormula:
    """Parse the s-expression form produced by format_mso."""
    tokens = _sexp_tokens(text)
    pos = 0

    def read() -> object:
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while pos < len(tokens) and tokens[pos] != ")":
                items.append(read())
            if pos >= len(tokens):
                raise ValueError("missing ')'")
            pos += 1
            return items
        if tok == ")":
            raise ValueError("unexpected ')'")
        return tok

    def build(node: object) -> MsoFormula:
        if isinstance(node, str):
            raise ValueError(f"expected a formula, found bare token {node!r}")
        head, *args = node
        if not isinstance(head, str):
            raise ValueError("expected a form name after '('")
        if head == "not" and len(args) == 1:
            return MsoNot(build(args[0]))
        if head in ("and", "or", "implies", "iff") and len(args) == 2:
            make = {"and": MsoAnd, "or": MsoOr, "implies": MsoImplies, "iff": MsoIff}[head]
            return make(build(args[0]), build(args[1]))
        if head in ("exists", "forall", "exists-set", "forall-set") and len(args) == 2:
            var = args[0]
            if not isinstance(var, str):
                raise ValueError(f"{head} needs a variable name")
            make = {
                "exists": Exists,
                "forall": Forall,
                "exists-set": ExistsSet,
                "forall-set": ForallSet,
            }[head]
            return make(var, build(args[1]))
        if head == "member" and len(args) == 2 and all(isinstance(x, str) for x in args):
            return Member(args[0], args[1])
        if head == "=" and len(args) == 2 and all(isinstance(x, str) for x in args):
            return Eq(args[0], args[1])
        if head in _FORMS:
            raise ValueError(f"malformed {head!r} form")
        if not all(isinstance(x, str) for x in args):
            raise ValueError(f"atom {head!r} takes variable names")
        return Atom(head, tuple(args))

    node = read()
    if pos != len(tokens):
        raise ValueError(f"trailing input {tokens[pos]!r}")
    return build(node)
