"""Path and tree decompositions of relational structures, widths, and the
satisfiability parameter.

Pathwidth is computed as the vertex separation number of the structure's
co-occurrence graph: a vertex ordering induces interval bags, the widest of
which (minus one) is the layout's cost. The heuristic takes the best of a
family of candidate orderings; the exact variant runs a subset dynamic
program, feasible up to a dozen elements.
"""

from __future__ import annotations

from dataclasses import dataclass

from .encoding import RelationalStructure, encode, primal_edges
from .formulas import Formula, eliminate_sugar, temporal_depth


@dataclass
class Decomposition:
    """Bags over element indices, arranged on a path or a tree.

    For kind "path", bags are adjacent in sequence order and links is empty;
    for kind "tree", links lists the tree edges between bag indices.
    """

    kind: str
    bags: list[frozenset[int]]
    links: list[tuple[int, int]]

    def __post_init__(self) -> None:
        if self.kind not in ("path", "tree"):
            raise ValueError(f"decomposition kind must be 'path' or 'tree', not {self.kind!r}")


def width(d: Decomposition) -> int:
    """Largest bag size minus one."""
    if not d.bags:
        raise ValueError("decomposition has no bags")
    return max(len(b) for b in d.bags) - 1


def _bag_adjacency(d: Decomposition) -> list[list[int]]:
    m = len(d.bags)
    adj: list[list[int]] = [[] for _ in range(m)]
    if d.kind == "path":
        for i in range(m - 1):
            adj[i].append(i + 1)
            adj[i + 1].append(i)
    else:
        for i, j in d.links:
            adj[i].append(j)
            adj[j].append(i)
    return adj


def validate_decomposition(a: RelationalStructure, d: Decomposition) -> str | None:
    """Return None if d is a valid decomposition of a, else name the violation.

    Checks the three conditions: every element is in some bag; every relation
    tuple fits inside one bag; the bags holding any given element form a
    connected stretch of the path or subtree of the tree.
    """
    n = len(a.universe)
    m = len(d.bags)
    if m == 0:
        return "condition 1: no bags but a nonempty universe" if n else None
    for bag in d.bags:
        for e in bag:
            if not 0 <= e < n:
                return f"bag element {e} outside 0..{n - 1}"
    if d.kind == "tree":
        for i, j in d.links:
            if not (0 <= i < m and 0 <= j < m):
                return f"link {i} {j} outside bag range"
        if len(d.links) != m - 1:
            return f"tree shape: {len(d.links)} links for {m} bags"
    adj = _bag_adjacency(d)
    # Shape: the bag graph must be connected (and, given m-1 links, acyclic).
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in adj[i]:
            if j not in seen:
                seen.add(j)
                frontier.append(j)
    if len(seen) != m:
        return "tree shape: bag graph is disconnected"

    holding: list[list[int]] = [[] for _ in range(n)]
    for i, bag in enumerate(d.bags):
        for e in bag:
            holding[e].append(i)
    for e in range(n):
        if not holding[e]:
            return f"condition 1: element {e} ({a.universe[e]}) is in no bag"
    for pred, tuples in a.relations.items():
        for t in tuples:
            need = set(t)
            if not any(need <= bag for bag in d.bags):
                return f"condition 2: tuple {pred}{t} fits in no bag"
    for e in range(n):
        bags_with_e = set(holding[e])
        start = holding[e][0]
        reached = {start}
        frontier = [start]
        while frontier:
            i = frontier.pop()
            for j in adj[i]:
                if j in bags_with_e and j not in reached:
                    reached.add(j)
                    frontier.append(j)
        if reached != bags_with_e:
            return f"condition 3: bags holding element {e} ({a.universe[e]}) are disconnected"
    return None


# --- pathwidth by vertex separation ----------------------------------------


def _adjacency(n: int, edges: list[tuple[int, int]]) -> list[set[int]]:
    adj: list[set[int]] = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _layout_bags(order: list[int], adj: list[set[int]]) -> list[frozenset[int]]:
    """Interval bags of a vertex ordering: bag i holds v_i plus every earlier
    vertex that still has a neighbor at position i or later."""
    pos = {v: i for i, v in enumerate(order)}
    bags = []
    for i, v in enumerate(order):
        bag = {v}
        for u in order[:i]:
            if any(pos[w] >= i for w in adj[u]):
                bag.add(u)
        bags.append(frozenset(bag))
    return bags


def _layout_width(order: list[int], adj: list[set[int]]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    worst = 0
    active: set[int] = set()
    for i, v in enumerate(order):
        active.add(v)
        active = {u for u in active if any(pos[w] >= i for w in adj[u])} | {v}
        worst = max(worst, len(active))
    return worst - 1


def _min_degree_order(n: int, adj: list[set[int]]) -> list[int]:
    remaining = set(range(n))
    degree = {v: len(adj[v]) for v in range(n)}
    order = []
    while remaining:
        v = min(remaining, key=lambda u: (degree[u], u))
        order.append(v)
        remaining.discard(v)
        for w in adj[v]:
            if w in remaining:
                degree[w] -= 1
    return order


def _bfs_order(n: int, adj: list[set[int]], start: int) -> list[int]:
    seen = {start}
    queue = [start]
    order = []
    while queue:
        v = queue.pop(0)
        order.append(v)
        for w in sorted(adj[v]):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    for v in range(n):
        if v not in seen:
            # Another component; continue the scan from its lowest vertex.
            seen.add(v)
            queue = [v]
            while queue:
                u = queue.pop(0)
                order.append(u)
                for w in sorted(adj[u]):
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
    return order


def pathwidth_upper(a: RelationalStructure) -> tuple[Decomposition, int]:
    """Heuristic path decomposition: best of several candidate orderings.

    The result is always valid; its width is an upper bound on the true
    pathwidth. Deterministic, with ties broken by the ordering itself.
    """
    n = len(a.universe)
    if n == 0:
        raise ValueError("structure has an empty universe")
    adj = _adjacency(n, primal_edges(a))
    candidates = [list(range(n)), _min_degree_order(n, adj)]
    # BFS from every vertex is quadratic overkill on big structures; evenly
    # spaced starts keep the result deterministic at a bounded cost
    starts = range(n) if n <= 64 else [i * n // 64 for i in range(64)]
    candidates += [_bfs_order(n, adj, s) for s in starts]
    best = min(candidates, key=lambda o: (_layout_width(o, adj), o))
    d = Decomposition("path", _layout_bags(best, adj), [])
    return d, width(d)


def pathwidth_exact(
    a: RelationalStructure, element_limit: int = 12
) -> tuple[Decomposition, int]:
    """Exact pathwidth by subset dynamic programming over vertex orderings.

    Feasible only for small universes; raises if the structure exceeds
    element_limit (use pathwidth_upper instead there).
    """
    n = len(a.universe)
    if n == 0:
        raise ValueError("structure has an empty universe")
    if n > element_limit:
        raise ValueError(
            f"{n} elements exceed the exact limit {element_limit}; use pathwidth_upper"
        )
    adj = _adjacency(n, primal_edges(a))
    adj_mask = [sum(1 << w for w in adj[v]) for v in range(n)]
    full = (1 << n) - 1

    cost = [0] * (full + 1)
    choice = [0] * (full + 1)
    for s in range(1, full + 1):
        outside = full ^ s
        sep = sum(1 for v in range(n) if s >> v & 1 and adj_mask[v] & outside)
        best, best_v = n + 1, -1
        rest = s
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            c = max(cost[s ^ (1 << v)], sep)
            if c < best:
                best, best_v = c, v
        cost[s] = best
        choice[s] = best_v
    order_rev = []
    s = full
    while s:
        v = choice[s]
        order_rev.append(v)
        s ^= 1 << v
    order = order_rev[::-1]
    d = Decomposition("path", _layout_bags(order, adj), [])
    return d, cost[full]


def treewidth_exact(a: RelationalStructure, element_limit: int = 10) -> int:
    """Exact treewidth by elimination-ordering subset dynamic programming.

    The cost of eliminating v after the set S is the number of vertices
    outside S reachable from v through S; treewidth is the minimax over
    orderings.
    """
    n = len(a.universe)
    if n == 0:
        raise ValueError("structure has an empty universe")
    if n > element_limit:
        raise ValueError(f"{n} elements exceed the exact limit {element_limit}")
    adj = _adjacency(n, primal_edges(a))

    def fill_degree(s: int, v: int) -> int:
        # Vertices outside s and distinct from v reachable from v via s.
        seen = {v}
        frontier = [v]
        out: set[int] = set()
        while frontier:
            u = frontier.pop()
            for w in adj[u]:
                if w in seen:
                    continue
                seen.add(w)
                if s >> w & 1:
                    frontier.append(w)
                else:
                    out.add(w)
        return len(out)

    full = (1 << n) - 1
    cost = [0] * (full + 1)
    for s in range(1, full + 1):
        best = n + 1
        rest = s
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            prev = s ^ (1 << v)
            best = min(best, max(cost[prev], fill_degree(prev, v)))
        cost[s] = best
    return cost[full]


# --- the parameter ----------------------------------------------------------


@dataclass(frozen=True)
class ParameterValue:
    """Pathwidth of the encoding plus temporal depth; exact says whether the
    pathwidth part came from the exact algorithm or the heuristic bound."""

    value: int
    pathwidth: int
    temporal_depth: int
    exact: bool


def parameter(f: Formula, element_limit: int = 12) -> ParameterValue:
    """The satisfiability parameter of a formula.

    Sugar is eliminated before encoding (the encoding has no implication
    connective); small encodings get exact pathwidth, larger ones the
    heuristic upper bound, flagged by `exact`.
    """
    a = encode(eliminate_sugar(f))
    td = temporal_depth(f)
    if len(a.universe) <= element_limit:
        _, pw = pathwidth_exact(a, element_limit)
        return ParameterValue(pw + td, pw, td, True)
    _, pw = pathwidth_upper(a)
    return ParameterValue(pw + td, pw, td, False)


def format_decomposition(d: Decomposition) -> str:
    """Text form: kind header, `bag i: e1 e2 ...` lines, `link i j` lines."""
    lines = [d.kind]
    for i, bag in enumerate(d.bags):
        lines.append(f"bag {i}: " + " ".join(str(e) for e in sorted(bag)))
    for i, j in d.links:
        lines.append(f"link {i} {j}")
    return "\n".join(lines) + "\n"


def parse_decomposition(text: str) -> Decomposition:
    """Parse the kind/bag/link text format; `#` starts a comment."""
    kind = None
    bags: dict[int, frozenset[int]] = {}
    links: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] in ("path", "tree") and len(parts) == 1:
                kind = parts[0]
            elif parts[0] == "bag" and len(parts) >= 2 and parts[1].endswith(":"):
                bags[int(parts[1][:-1])] = frozenset(int(x) for x in parts[2:])
            elif parts[0] == "link" and len(parts) == 3:
                links.append((int(parts[1]), int(parts[2])))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"line {lineno}: cannot parse {raw!r}") from None
    if kind is None:
        raise ValueError("missing 'path' or 'tree' header line")
    if sorted(bags) != list(range(len(bags))):
        raise ValueError("bag indices must be contiguous from 0")
    if kind == "path" and links:
        raise ValueError("path decompositions take no link lines")
    return Decomposition(kind, [bags[i] for i in range(len(bags))], links)
