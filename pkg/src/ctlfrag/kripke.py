"""Kripke structures and CTL model checking by fixpoint labeling."""

from __future__ import annotations

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
    _children,
    propositions,
)


@dataclass(frozen=True)
class KripkeStructure:
    """Worlds 0..n-1 with a successor relation and propositional labels.

    The successor relation must be total (every world has at least one
    successor) for the temporal semantics to be well defined; `validate`
    checks this.
    """

    successors: tuple[frozenset[int], ...]
    labels: tuple[frozenset[str], ...]
    propositions: frozenset[str] = field(default=frozenset())

    @property
    def num_worlds(self) -> int:
        return len(self.successors)

    @staticmethod
    def of(
        num_worlds: int,
        edges: list[tuple[int, int]] | set[tuple[int, int]],
        labels: dict[int, set[str] | frozenset[str] | list[str]] | None = None,
        props: set[str] | frozenset[str] | None = None,
    ) -> "KripkeStructure":
        succ: list[set[int]] = [set() for _ in range(num_worlds)]
        for u, v in edges:
            succ[u].add(v)
        labels = labels or {}
        labs = [frozenset(labels.get(w, ())) for w in range(num_worlds)]
        universe = frozenset(props) if props is not None else frozenset().union(*labs, frozenset())
        return KripkeStructure(
            tuple(frozenset(s) for s in succ), tuple(labs), universe
        )

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.num_worlds) for v in sorted(self.successors[u])]


def validate(k: KripkeStructure) -> str | None:
    """Return None if k is well formed, else a message naming the first problem."""
    n = k.num_worlds
    if n == 0:
        return "structure has no worlds"
    if len(k.labels) != n:
        return f"label table covers {len(k.labels)} worlds, expected {n}"
    for w in range(n):
        for v in k.successors[w]:
            if not 0 <= v < n:
                return f"world {w} has successor {v} outside 0..{n - 1}"
        if not k.successors[w]:
            return f"world {w} has no successor (relation must be total)"
    for w in range(n):
        extra = k.labels[w] - k.propositions
        if extra:
            return f"world {w} is labeled with {sorted(extra)[0]!r}, not in the proposition universe"
    return None


def _predecessors(k: KripkeStructure) -> tuple[tuple[int, ...], ...]:
    pred: list[list[int]] = [[] for _ in range(k.num_worlds)]
    for u in range(k.num_worlds):
        for v in k.successors[u]:
            pred[v].append(u)
    return tuple(tuple(p) for p in pred)


def satisfying_worlds(k: KripkeStructure, f: Formula) -> frozenset[int]:
    """The set of worlds of k satisfying f, computed bottom-up over subformulas."""
    for p in propositions(f):
        if p not in k.propositions:
            raise ValueError(f"proposition {p!r} is not in the structure's universe")
    problem = validate(k)
    if problem is not None:
        raise ValueError(f"invalid Kripke structure: {problem}")

    n = k.num_worlds
    all_worlds = frozenset(range(n))
    sat: dict[Formula, frozenset[int]] = {}

    def pre_exists(target: frozenset[int]) -> frozenset[int]:
        return frozenset(w for w in range(n) if k.successors[w] & target)

    def pre_all(target: frozenset[int]) -> frozenset[int]:
        return frozenset(w for w in range(n) if k.successors[w] <= target)

    def lfp(step) -> frozenset[int]:
        current: frozenset[int] = frozenset()
        while True:
            nxt = step(current)
            if nxt == current:
                return current
            current = nxt

    def gfp(step) -> frozenset[int]:
        current = all_worlds
        while True:
            nxt = step(current)
            if nxt == current:
                return current
            current = nxt

    # Post-order walk; an explicit stack keeps wide machine-built formulas
    # clear of the recursion limit, and shared subterms are computed once.
    stack: list[Formula] = [f]
    while stack:
        g = stack[-1]
        if g in sat:
            stack.pop()
            continue
        missing = [c for c in _children(g) if c not in sat]
        if missing:
            stack.extend(missing)
            continue
        stack.pop()
        match g:
            case Const(value):
                sat[g] = all_worlds if value else frozenset()
            case Prop(name):
                sat[g] = frozenset(w for w in range(n) if name in k.labels[w])
            case Not(body):
                sat[g] = all_worlds - sat[body]
            case And(left, right):
                sat[g] = sat[left] & sat[right]
            case Or(left, right):
                sat[g] = sat[left] | sat[right]
            case Implies(left, right):
                sat[g] = (all_worlds - sat[left]) | sat[right]
            case Iff(left, right):
                both = sat[left] & sat[right]
                neither = all_worlds - (sat[left] | sat[right])
                sat[g] = both | neither
            case TemporalUnary("EX", body):
                sat[g] = pre_exists(sat[body])
            case TemporalUnary("AX", body):
                sat[g] = pre_all(sat[body])
            case TemporalUnary("EF", body):
                base = sat[body]
                sat[g] = lfp(lambda s: base | pre_exists(s))
            case TemporalUnary("AF", body):
                base = sat[body]
                sat[g] = lfp(lambda s: base | pre_all(s))
            case TemporalUnary("EG", body):
                base = sat[body]
                sat[g] = gfp(lambda s: base & pre_exists(s))
            case TemporalUnary("AG", body):
                base = sat[body]
                sat[g] = gfp(lambda s: base & pre_all(s))
            case TemporalBinary("EU", left, right):
                hold, goal = sat[left], sat[right]
                sat[g] = lfp(lambda s: goal | (hold & pre_exists(s)))
            case TemporalBinary("AU", left, right):
                hold, goal = sat[left], sat[right]
                sat[g] = lfp(lambda s: goal | (hold & pre_all(s)))
            case _:
                raise TypeError(f"not a formula: {g!r}")
    return sat[f]


def model_check(k: KripkeStructure, world: int, f: Formula) -> bool:
    """Does world w of k satisfy f?"""
    if not 0 <= world < k.num_worlds:
        raise ValueError(f"world {world} outside 0..{k.num_worlds - 1}")
    return world in satisfying_worlds(k, f)


def format_kripke(k: KripkeStructure) -> str:
    """Text form: `worlds N`, `props ...`, `edge i j`, `label i p q ...` lines."""
    lines = [f"worlds {k.num_worlds}"]
    if k.propositions:
        lines.append("props " + " ".join(sorted(k.propositions)))
    for u, v in k.edges():
        lines.append(f"edge {u} {v}")
    for w in range(k.num_worlds):
        if k.labels[w]:
            lines.append(f"label {w} " + " ".join(sorted(k.labels[w])))
    return "\n".join(lines) + "\n"


def parse_kripke(text: str) -> KripkeStructure:
    """Parse the `worlds`/`props`/`edge`/`label` text format; `#` starts a comment.

    The optional `props` line widens the proposition universe beyond the
    labels actually used, which matters when checking formulas that mention a
    proposition no world carries.
    """
    num = None
    edges: list[tuple[int, int]] = []
    labels: dict[int, set[str]] = {}
    props: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "worlds" and len(parts) == 2:
                num = int(parts[1])
            elif parts[0] == "props":
                props.update(parts[1:])
            elif parts[0] == "edge" and len(parts) == 3:
                edges.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "label" and len(parts) >= 2:
                w = int(parts[1])
                labels.setdefault(w, set()).update(parts[2:])
                props.update(parts[2:])
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
    if num is None:
        raise ValueError("missing 'worlds N' line")
    if num <= 0:
        raise ValueError("world count must be positive")
    for u, v in edges:
        if not (0 <= u < num and 0 <= v < num):
            raise ValueError(f"edge {u} {v} outside 0..{num - 1}")
    for w in labels:
        if not 0 <= w < num:
            raise ValueError(f"label line for world {w} outside 0..{num - 1}")
    k = KripkeStructure.of(num, edges, labels, props)
    problem = validate(k)
    if problem is not None:
        raise ValueError(problem)
    return k
