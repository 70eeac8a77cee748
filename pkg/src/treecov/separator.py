"""Balanced separators: tree decompositions, PACE parsing, separator providers.

A separator here always means a vertex set whose removal leaves every
component with at most ceil(n/2) vertices (inclusive threshold). Providers
abstract where separators come from: a tree decomposition bag, a BFS
heuristic, or exhaustive search on tiny graphs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, GraphError, VertexSet, connected_components


class DecompositionError(ValueError):
    """Invalid tree decomposition or separator request."""


def balance_threshold(n: int) -> int:
    return (n + 1) // 2


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags plus a tree over bag ids. width = max bag size - 1."""
    bags: tuple[VertexSet, ...]
    tree: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def bag_neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree:
            adj[a].append(b)
            adj[b].append(a)
        for ns in adj:
            ns.sort()
        return adj


def validate_decomposition(td: TreeDecomposition, g: Graph) -> None:
    """Check the three decomposition properties; raise with a witness."""
    k = len(td.bags)
    for a, b in td.tree:
        if not (0 <= a < k and 0 <= b < k) or a == b:
            raise DecompositionError(f"bad bag-tree edge ({a},{b})")
    if k > 0 and len(td.tree) != k - 1:
        raise DecompositionError(
            f"bag tree has {len(td.tree)} edges for {k} bags")
    adj = td.bag_neighbors()
    if k > 0:
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != k:
            raise DecompositionError("bag tree is disconnected")
    covered: set[int] = set()
    for b in td.bags:
        covered.update(b.ids)
    for v in range(g.n):
        if v not in covered:
            raise DecompositionError(f"vertex {v} is in no bag")
    for u, v, _ in g.edges:
        if not any(u in b and v in b for b in td.bags):
            raise DecompositionError(f"edge ({u},{v}) is in no bag")
    # per-vertex bag subtrees must be connected
    for v in range(g.n):
        holding = [i for i, b in enumerate(td.bags) if v in b]
        if not holding:
            continue
        hold = set(holding)
        seen = {holding[0]}
        stack = [holding[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in hold and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if seen != hold:
            raise DecompositionError(
                f"bags containing vertex {v} are not connected in the tree")


def restrict_decomposition(td: TreeDecomposition,
                           keep: VertexSet) -> TreeDecomposition:
    """Intersect every bag with `keep`; the same bag tree stays valid for the
    induced subgraph (empty bags are kept as placeholders)."""
    return TreeDecomposition(
        tuple(b.intersection(keep) for b in td.bags), td.tree)


# ---------------------------------------------------------------------------
# PACE 2017 .td format (1-based vertex ids in the file, 0-based in memory)
# ---------------------------------------------------------------------------

def parse_pace_td(text: str) -> tuple[TreeDecomposition, int]:
    """Returns (decomposition, declared graph size n)."""
    header = None
    bags: dict[int, list[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise DecompositionError(f"line {lineno}: duplicate header")
            if len(parts) != 5 or parts[1] != "td":
                raise DecompositionError(
                    f"line {lineno}: header must be 's td <bags> <width+1> <n>'")
            header = (int(parts[2]), int(parts[3]), int(parts[4]))
        elif parts[0] == "b":
            if header is None:
                raise DecompositionError(f"line {lineno}: bag before header")
            bid = int(parts[1])
            if bid in bags:
                raise DecompositionError(f"line {lineno}: duplicate bag {bid}")
            bags[bid] = [int(x) - 1 for x in parts[2:]]
        else:
            if header is None:
                raise DecompositionError(f"line {lineno}: edge before header")
            if len(parts) != 2:
                raise DecompositionError(f"line {lineno}: bad record")
            edges.append((int(parts[0]) - 1, int(parts[1]) - 1))
    if header is None:
        raise DecompositionError("missing 's td' header")
    n_bags, width_plus_1, n = header
    if set(bags) != set(range(1, n_bags + 1)):
        raise DecompositionError(
            f"expected bags 1..{n_bags}, found {sorted(bags)}")
    ordered = []
    for bid in range(1, n_bags + 1):
        ids = bags[bid]
        for v in ids:
            if not 0 <= v < n:
                raise DecompositionError(
                    f"bag {bid} holds out-of-range vertex {v + 1}")
        ordered.append(VertexSet(ids))
    td = TreeDecomposition(tuple(ordered), tuple(edges))
    if td.width + 1 > width_plus_1:
        raise DecompositionError(
            f"declared width+1={width_plus_1} but a bag has {td.width + 1}")
    return td, n


def dump_pace_td(td: TreeDecomposition, n: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, b in enumerate(td.bags, 1):
        lines.append("b " + " ".join([str(i)] + [str(v + 1) for v in b.ids]))
    for a, b in td.tree:
        lines.append(f"{a + 1} {b + 1}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# separator extraction
# ---------------------------------------------------------------------------

def _components_without(g: Graph, blocked: VertexSet) -> list[tuple[int, ...]]:
    seen = [False] * g.n
    for v in blocked:
        if v < g.n:
            seen[v] = True
    comps = []
    for start in range(g.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        stack = [start]
        while stack:
            x = stack.pop()
            for y, _ in g.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        comps.append(tuple(sorted(comp)))
    return comps


def is_balanced_separator(g: Graph, sep: VertexSet) -> bool:
    cap = balance_threshold(g.n)
    return all(len(c) <= cap for c in _components_without(g, sep))


def separator_from_decomposition(g: Graph, td: TreeDecomposition) -> VertexSet:
    """A bag that is a balanced separator, found by walking the bag tree
    toward the unique too-heavy component; falls back to a full scan."""
    if g.n == 0:
        raise DecompositionError("empty graph has no separator")
    cap = balance_threshold(g.n)
    adj = td.bag_neighbors()
    bag_of_vertex: dict[int, int] = {}
    for i, b in enumerate(td.bags):
        for v in b.ids:
            bag_of_vertex.setdefault(v, i)
    for v in range(g.n):
        if v not in bag_of_vertex:
            raise DecompositionError(f"vertex {v} is in no bag")

    def heavy_component(bag_id: int):
        comps = _components_without(g, td.bags[bag_id])
        for c in comps:
            if len(c) > cap:
                return c
        return None

    cur = 0
    visited = set()
    for _ in range(len(td.bags) + 1):
        if cur in visited:
            break
        visited.add(cur)
        heavy = heavy_component(cur)
        if heavy is None:
            if len(td.bags[cur]) == 0:
                break  # empty bag: fall through to scan
            return td.bags[cur]
        # all of the heavy component's bags sit in one branch of the bag tree;
        # step to the neighbor on that side
        target = bag_of_vertex[heavy[0]]
        nxt = _first_step(adj, cur, target)
        if nxt is None:
            break
        cur = nxt
    # fallback: scan all bags, prefer balanced, then smaller bag, then id
    best = None
    for i, b in enumerate(td.bags):
        if len(b) == 0:
            continue
        worst = max((len(c) for c in _components_without(g, b)), default=0)
        key = (worst > cap, worst, len(b), i)
        if best is None or key < best[0]:
            best = (key, b)
    if best is None or best[0][0]:
        raise DecompositionError("no bag is a balanced separator")
    return best[1]


def _first_step(adj: list[list[int]], src: int, dst: int) -> int | None:
    """First bag on the src->dst path in the bag tree."""
    if src == dst:
        return None
    prev = {src: None}
    queue = [src]
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for y in adj[x]:
            if y not in prev:
                prev[y] = x
                if y == dst:
                    qi = len(queue)
                    break
                queue.append(y)
    if dst not in prev:
        return None
    x = dst
    while prev[x] != src:
        x = prev[x]
    return x


def _bfs_levels(g: Graph, root: int) -> list[list[int]]:
    level = {root: 0}
    queue = [root]
    qi = 0
    while qi < len(queue):
        v = queue[qi]
        qi += 1
        for nbr, _ in g.adj[v]:
            if nbr not in level:
                level[nbr] = level[v] + 1
                queue.append(nbr)
    out: list[list[int]] = [[] for _ in range(max(level.values()) + 1)]
    for v in sorted(level):
        out[level[v]].append(v)
    return out


def heuristic_separator(g: Graph) -> VertexSet:
    """Deterministic separator for a connected graph: best balanced BFS level
    cut vs the BFS-tree centroid, both re-verified on the actual graph."""
    if g.n == 0:
        raise GraphError("empty graph has no separator")
    if g.n == 1:
        return VertexSet([0])
    comps = connected_components(g)
    if len(comps) > 1:
        raise GraphError("heuristic separator expects a connected graph")
    # double sweep to find a deep root
    lv = _bfs_levels(g, 0)
    far = lv[-1][0]
    levels = _bfs_levels(g, far)
    cap = balance_threshold(g.n)
    candidates: list[VertexSet] = []
    prefix = 0
    for i, level in enumerate(levels):
        suffix = g.n - prefix - len(level)
        if prefix <= cap and suffix <= cap:
            candidates.append(VertexSet(level))
        prefix += len(level)
    # BFS-tree centroid candidate (exact for tree graphs)
    parent: dict[int, int | None] = {far: None}
    order = [far]
    for level in levels[1:]:
        for v in level:
            for nbr, _ in g.adj[v]:
                if nbr in parent and v not in parent:
                    parent[v] = nbr
                    order.append(v)
                    break
    size = {v: 1 for v in order}
    for v in reversed(order):
        p = parent[v]
        if p is not None:
            size[p] += size[v]
    best_c = None
    for v in sorted(order):
        heaviest = max((size[c] for c in order
                        if parent.get(c) == v), default=0)
        part = max(heaviest, g.n - size[v])
        if best_c is None or part < best_c[0]:
            best_c = (part, v)
    candidates.append(VertexSet([best_c[1]]))
    valid = [s for s in candidates if is_balanced_separator(g, s)]
    if not valid:
        raise GraphError("no balanced separator found (internal error)")
    valid.sort(key=lambda s: (len(s), s.ids))
    return valid[0]


def exact_small_separator(g: Graph, max_size: int) -> VertexSet | None:
    """Smallest balanced separator by exhaustive search; n <= 24 only.
    Returns None when no separator of size <= max_size exists."""
    if g.n > 24:
        raise GraphError(f"exact search limited to n <= 24, got {g.n}")
    if g.n == 0:
        raise GraphError("empty graph has no separator")
    for size in range(1, max(1, max_size) + 1):
        for combo in itertools.combinations(range(g.n), size):
            s = VertexSet(combo)
            if is_balanced_separator(g, s):
                return s
    return None


# ---------------------------------------------------------------------------
# providers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SeparatorBound:
    """Declared growth of separator size: t(theta) = value (flat) or
    theta**delta (power with delta = value)."""
    form: str  # "flat" | "power"
    value: Fraction

    def evaluate(self, theta: int) -> float:
        if self.form == "flat":
            return float(self.value)
        return float(theta) ** float(self.value)


class SeparatorProvider:
    """Produces balanced separators for induced subgraphs of one base graph.

    mode "td" restricts the given decomposition to the subgraph, "heuristic"
    runs the BFS heuristic, "exact" runs exhaustive search. The returned
    VertexSet is in the subgraph's local ids and is always re-verified.
    """

    def __init__(self, mode: str, td: TreeDecomposition | None = None,
                 bound: SeparatorBound | None = None, exact_max_size: int = 8):
        if mode not in ("td", "heuristic", "exact"):
            raise GraphError(f"unknown separator mode {mode!r}")
        if mode == "td" and td is None:
            raise DecompositionError("td mode requires a decomposition")
        self.mode = mode
        self.td = td
        self.exact_max_size = exact_max_size
        if bound is None:
            if mode == "td" and td is not None:
                bound = SeparatorBound("flat", Fraction(td.width + 1))
            else:
                bound = SeparatorBound("power", Fraction(1, 2))
        self.bound = bound

    def separator(self, sub: Graph, to_parent: tuple[int, ...]) -> VertexSet:
        if self.mode == "td":
            local_of = {p: i for i, p in enumerate(to_parent)}
            keep = VertexSet(to_parent)
            td = restrict_decomposition(self.td, keep)
            local_bags = tuple(
                VertexSet(local_of[v] for v in b.ids) for b in td.bags)
            sep = separator_from_decomposition(
                sub, TreeDecomposition(local_bags, td.tree))
        elif self.mode == "heuristic":
            sep = heuristic_separator(sub)
        else:
            sep = exact_small_separator(sub, self.exact_max_size)
            if sep is None:
                sep = heuristic_separator(sub)
        if not sep or not is_balanced_separator(sub, sep):
            raise GraphError("separator provider returned an unbalanced set")
        return sep
