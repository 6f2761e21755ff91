"""Edge colouring and 1-factorization machinery for simple graphs.

Three tools live here:

* ``vizing_color``: Misra-Gries fan rotation, at most ``max_degree + 1`` colours.
* ``complete_cross_edges``: finish a partial colouring of a regular graph so
  that every colour class becomes a perfect matching, repairing the base
  colouring with Kempe chain swaps when needed.
* ``exact_one_factorize``: a backtracking search used as an independent oracle.

Edges are always ``(u, v)`` tuples with ``u < v``.
"""

from __future__ import annotations

import heapq
import sys
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import BudgetExceeded, CompletionFailed, PreconditionError

Edge = tuple[int, int]

DEFAULT_BUDGET = 10**6


def edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class SimpleGraph:
    vertex_count: int
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        edges = tuple(sorted(edge(int(u), int(v)) for u, v in self.edges))
        object.__setattr__(self, "edges", edges)
        for i, (u, v) in enumerate(edges):
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u and v < self.vertex_count):
                raise ValueError(f"edge {(u, v)} out of range")
            if i and edges[i - 1] == (u, v):
                raise ValueError(f"duplicate edge {(u, v)}")

    @cached_property
    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for nbrs in adj:
            nbrs.sort()
        return adj

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency), default=0)

    def regular_valence(self) -> int | None:
        """The common degree, or ``None`` if the graph is not regular."""
        degrees = {len(a) for a in self.adjacency}
        if len(degrees) > 1:
            return None
        return degrees.pop() if degrees else 0


@dataclass(frozen=True, eq=False)
class EdgeColoring:
    graph: SimpleGraph
    color_of: Mapping[Edge, int]
    palette_size: int

    def classes(self) -> list[list[Edge]]:
        out: list[list[Edge]] = [[] for _ in range(self.palette_size)]
        for e in self.graph.edges:
            out[self.color_of[e]].append(e)
        return out

    def to_factorization(self) -> "Factorization":
        return Factorization(self.graph, tuple(tuple(c) for c in self.classes() if c)).canonical()


@dataclass(frozen=True, eq=False)
class Factorization:
    """An ordered list of edge classes; valid when each is a perfect matching."""

    graph: SimpleGraph
    classes: tuple[tuple[Edge, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "classes", tuple(tuple(sorted(edge(*e) for e in c)) for c in self.classes)
        )

    def canonical(self) -> "Factorization":
        """Classes ordered by their least edge."""
        return Factorization(self.graph, tuple(sorted(self.classes, key=lambda c: c[:1])))

    def as_lists(self) -> list[list[list[int]]]:
        return [[list(e) for e in c] for c in self.classes]

    def __len__(self) -> int:
        return len(self.classes)


class Violation(NamedTuple):
    kind: str
    where: tuple
    message: str


@dataclass
class Report:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, kind: str) -> int:
        return sum(1 for v in self.violations if v.kind == kind)

    def add(self, kind: str, where: tuple, message: str) -> None:
        self.violations.append(Violation(kind, where, message))

    def extend(self, other: "Report") -> None:
        self.violations.extend(other.violations)


# -- verification ----------------------------------------------------------


def verify_coloring(graph: SimpleGraph, coloring: EdgeColoring) -> Report:
    report = Report()
    seen: dict[tuple[int, int], Edge] = {}
    for e in coloring.color_of:
        if e not in graph.edge_set:
            report.add("unknown-edge", e, f"coloured edge {e} is not in the graph")
    for e in graph.edges:
        c = coloring.color_of.get(e)
        if c is None:
            report.add("uncolored", e, f"edge {e} has no colour")
            continue
        if not 0 <= c < coloring.palette_size:
            report.add("palette", e, f"edge {e} has colour {c} outside 0..{coloring.palette_size - 1}")
        for v in e:
            other = seen.setdefault((v, c), e)
            if other != e:
                report.add("improper", (v,), f"edges {other} and {e} share vertex {v} and colour {c}")
    return report


def verify_one_factorization(graph: SimpleGraph, fact: Factorization, valence: int | None = None) -> Report:
    """Check that ``fact`` partitions the edges of ``graph`` into perfect matchings.

    ``valence`` overrides the expected class count (defaults to the graph's
    common degree).
    """
    report = Report()
    owner: dict[Edge, int] = {}
    for i, cls in enumerate(fact.classes):
        hits = [0] * graph.vertex_count
        for e in cls:
            if e not in graph.edge_set:
                report.add("unknown-edge", e, f"class {i} contains non-edge {e}")
                continue
            if e in owner:
                report.add("duplicate-edge", e, f"edge {e} is in classes {owner[e]} and {i}")
            else:
                owner[e] = i
            hits[e[0]] += 1
            hits[e[1]] += 1
        for v, h in enumerate(hits):
            if h == 0:
                report.add("uncovered", (i, v), f"class {i} misses vertex {v}")
            elif h > 1:
                report.add("overcovered", (i, v), f"class {i} covers vertex {v} {h} times")
    for e in graph.edges:
        if e not in owner:
            report.add("missing-edge", e, f"edge {e} is in no class")
    expected = graph.regular_valence() if valence is None else valence
    if expected is None:
        report.add("class-count", (), "graph is not regular")
    elif len(fact.classes) != expected:
        report.add("class-count", (len(fact.classes), expected),
                   f"{len(fact.classes)} classes, valence is {expected}")
    return report


# -- Misra-Gries -----------------------------------------------------------


class _Palette:
    """Mutable partial colouring with per-vertex colour -> neighbour maps."""

    def __init__(self, n: int, size: int):
        self.size = size
        self.at: list[dict[int, int]] = [{} for _ in range(n)]
        self.color: dict[Edge, int] = {}

    def set(self, u: int, v: int, c: int) -> None:
        self.color[edge(u, v)] = c
        self.at[u][c] = v
        self.at[v][c] = u

    def clear(self, u: int, v: int) -> int:
        c = self.color.pop(edge(u, v))
        del self.at[u][c]
        del self.at[v][c]
        return c

    def is_free(self, v: int, c: int) -> bool:
        return c not in self.at[v]

    def first_free(self, v: int) -> int:
        at = self.at[v]
        return next(c for c in range(self.size) if c not in at)

    def chain(self, start: int, first: int, second: int) -> list[Edge]:
        """Edges of the maximal path leaving ``start`` along ``first`` then ``second`` ..."""
        path, x, c = [], start, first
        visited = set()
        while c in self.at[x]:
            y = self.at[x][c]
            e = edge(x, y)
            if e in visited:  # closed alternating cycle
                break
            visited.add(e)
            path.append(e)
            x, c = y, (second if c == first else first)
        return path

    def swap(self, path: Iterable[Edge], c1: int, c2: int) -> None:
        path = list(path)
        old = [self.clear(u, v) for u, v in path]
        for (u, v), c in zip(path, old):
            self.set(u, v, c2 if c == c1 else c1)


def vizing_color(graph: SimpleGraph) -> EdgeColoring:
    """Properly colour ``graph`` with at most ``max_degree + 1`` colours."""
    size = graph.max_degree + 1 if graph.edges else 0
    pal = _Palette(graph.vertex_count, size)
    adj = graph.adjacency
    for u, v in graph.edges:
        fan = _maximal_fan(pal, adj, u, v)
        c = pal.first_free(u)
        d = pal.first_free(fan[-1])
        pal.swap(pal.chain(u, d, c), c, d)
        for i in range(len(fan)):
            if pal.is_free(fan[i], d) and _is_fan(pal, u, fan[: i + 1]):
                break
        else:  # pragma: no cover - excluded by the Misra-Gries invariant
            raise AssertionError("no rotatable fan prefix")
        prefix = fan[: i + 1]
        shifted = [pal.clear(u, w) for w in prefix[1:]]
        for w, col in zip(prefix[:-1], shifted):
            pal.set(u, w, col)
        pal.set(u, prefix[-1], d)
    return EdgeColoring(graph, dict(pal.color), size)


def _maximal_fan(pal: _Palette, adj: list[list[int]], u: int, v: int) -> list[int]:
    fan, used = [v], {v}
    while True:
        last = fan[-1]
        for w in adj[u]:
            if w in used:
                continue
            c = pal.color.get(edge(u, w))
            if c is not None and pal.is_free(last, c):
                fan.append(w)
                used.add(w)
                break
        else:
            return fan


def _is_fan(pal: _Palette, u: int, fan: Sequence[int]) -> bool:
    if edge(u, fan[0]) in pal.color:
        return False
    for prev, w in zip(fan, fan[1:]):
        c = pal.color.get(edge(u, w))
        if c is None or not pal.is_free(prev, c):
            return False
    return True


def mirror_color(
    g1: SimpleGraph, iso: Sequence[int], g2: SimpleGraph
) -> tuple[EdgeColoring, EdgeColoring]:
    """Colour ``g1`` and copy the colours to ``g2`` along the isomorphism ``iso``."""
    if (
        g1.vertex_count != g2.vertex_count
        or len(iso) != g1.vertex_count
        or sorted(iso) != list(range(g2.vertex_count))
    ):
        raise PreconditionError("iso is not a vertex bijection")
    image = {edge(iso[u], iso[v]) for u, v in g1.edges}
    if image != g2.edge_set:
        raise PreconditionError("iso does not map edges onto edges")
    c1 = vizing_color(g1)
    c2 = {edge(iso[u], iso[v]): c for (u, v), c in c1.color_of.items()}
    return c1, EdgeColoring(g2, c2, c1.palette_size)


# -- cross-edge completion -------------------------------------------------


class _CrossLayout:
    """Components of the uncoloured cross edges, each a single edge or a cycle."""

    def __init__(self, n: int, cross: Sequence[Edge]):
        nbrs: dict[int, list[int]] = defaultdict(list)
        for u, v in cross:
            nbrs[u].append(v)
            nbrs[v].append(u)
        if any(len(a) > 2 for a in nbrs.values()):
            raise PreconditionError("cross edges must form a 1- or 2-regular subgraph")
        self.vertices = sorted(nbrs)
        self.components: list[list[int]] = []  # vertex order around the cycle, or an edge
        seen: set[int] = set()
        for start in self.vertices:
            if start in seen:
                continue
            order, prev, x = [start], None, start
            seen.add(start)
            while True:
                nxt = [w for w in nbrs[x] if w != prev and w not in seen]
                if not nxt:
                    break
                prev, x = x, nxt[0]
                seen.add(x)
                order.append(x)
            degs = {len(nbrs[w]) for w in order}
            if degs == {2} and start in nbrs[order[-1]] and len(order) > 2:
                self.components.append(order)
            elif degs == {1} and len(order) == 2:
                self.components.append(order)
            else:
                raise PreconditionError("cross edges must form disjoint edges or cycles")

    @staticmethod
    def is_cycle(comp: Sequence[int]) -> bool:
        return len(comp) > 2


def _free_colors(pal: _Palette, v: int) -> list[int]:
    return [c for c in range(pal.size) if c not in pal.at[v]]


def _solve_component(pal: _Palette, comp: list[int]):
    """Best assignment for one cross component against the current base colouring.

    Returns ``(assignment, conflicts)``. Each conflict ``(u, v, wanted, offered)``
    is a cross edge whose endpoints would need different colours; no conflicts
    means the assignment completes this component.
    """
    if not _CrossLayout.is_cycle(comp):
        u, v = comp
        fu, fv = _free_colors(pal, u), _free_colors(pal, v)
        if len(fu) != 1 or len(fv) != 1:
            raise PreconditionError("a lone cross edge needs exactly one free colour per end")
        conflicts = [] if fu == fv else [(u, v, fu[0], fv[0])]
        return [(edge(u, v), fu[0])], conflicts
    free = [_free_colors(pal, v) for v in comp]
    if any(len(f) != 2 for f in free):
        raise PreconditionError("each cross-cycle vertex needs exactly two free colours")
    L = len(comp)
    # state s at vertex i: free[i][s] goes on the edge to i+1, the other on the edge to i-1
    best = None
    for s0 in (0, 1):
        cost = {s0: (0, [s0])}
        for i in range(1, L):
            cost = {
                s: min(
                    (c + (free[i - 1][p] != free[i][1 - s]), path + [s])
                    for p, (c, path) in cost.items()
                )
                for s in (0, 1)
            }
        for s, (c, path) in cost.items():
            total = c + (free[L - 1][s] != free[0][1 - s0])
            if best is None or (total, path) < best:
                best = (total, path)
    states = best[1]
    assignment, conflicts = [], []
    for i in range(L):
        j = (i + 1) % L
        wanted, offered = free[i][states[i]], free[j][1 - states[j]]
        assignment.append((edge(comp[i], comp[j]), wanted))
        if wanted != offered:
            conflicts.append((comp[i], comp[j], wanted, offered))
    return assignment, conflicts


def _conflicts(pal: _Palette, layout: _CrossLayout) -> list[tuple[int, int, int, int]]:
    out = []
    for comp in layout.components:
        out.extend(_solve_component(pal, comp)[1])
    return out


def _candidate_moves(pal: _Palette, conflicts) -> list[tuple[int, int, int]]:
    """Kempe swaps ``(vertex, free colour, present colour)`` at conflict endpoints."""
    moves = []
    seen = set()
    for u, v, _, _ in conflicts:
        for x in (v, u):
            for f in _free_colors(pal, x):
                for c in sorted(pal.at[x]):
                    if (x, f, c) not in seen:
                        seen.add((x, f, c))
                        moves.append((x, f, c))
    return moves


def _apply_move(pal: _Palette, move: tuple[int, int, int]) -> list[Edge]:
    x, f, c = move
    path = pal.chain(x, c, f)
    pal.swap(path, c, f)
    return path


def complete_cross_edges(
    graph: SimpleGraph,
    base: Mapping[Edge, int],
    cross: Sequence[Edge],
    palette: int,
    search_budget: int = 2000,
) -> tuple[EdgeColoring, str]:
    """Colour the ``cross`` edges so every colour class is a perfect matching.

    ``base`` must properly colour every other edge of the ``palette``-regular
    ``graph`` such that each vertex has exactly as many free colours as cross
    edges. Three strategies run in order and the name of the one that
    succeeded is returned next to the colouring:

    ``"greedy"``
        assign free colours around each cross cycle with the base untouched;
    ``"kempe"``
        steepest-descent Kempe swaps on the base colouring;
    ``"backtrack"``
        best-first search over Kempe swap sequences, ``search_budget`` states.

    Raises ``CompletionFailed`` if all three give up.
    """
    if graph.regular_valence() != palette:
        raise PreconditionError("union graph must be regular with valence equal to the palette")
    cross = [edge(*e) for e in cross]
    if set(base) | set(cross) != graph.edge_set or set(base) & set(cross):
        raise PreconditionError("base and cross edges must partition the graph")
    pal = _Palette(graph.vertex_count, palette)
    for (u, v), c in base.items():
        if not 0 <= c < palette or c in pal.at[u] or c in pal.at[v]:
            raise PreconditionError(f"base colouring is not proper at {(u, v)}")
        pal.set(u, v, c)
    layout = _CrossLayout(graph.vertex_count, cross)

    conflicts = _conflicts(pal, layout)
    method = "greedy"
    if conflicts:
        method = "kempe"
        while conflicts:
            scored = []
            for move in _candidate_moves(pal, conflicts):
                path = _apply_move(pal, move)
                scored.append((len(_conflicts(pal, layout)), len(scored), move))
                pal.swap(path, move[1], move[2])
            if not scored or min(scored)[0] >= len(conflicts):
                break
            _apply_move(pal, min(scored)[2])
            conflicts = _conflicts(pal, layout)
    if conflicts:
        method = "backtrack"
        if not _best_first(pal, layout, search_budget):
            raise CompletionFailed("cross-edge completion exhausted its search budget")

    colors = dict(pal.color)
    for comp in layout.components:
        assignment, conflicts = _solve_component(pal, comp)
        if conflicts:
            raise CompletionFailed("cross component left unsolved")
        colors.update(assignment)
    result = EdgeColoring(graph, colors, palette)
    if not verify_coloring(graph, result).ok:
        raise CompletionFailed("completion produced an improper colouring")
    return result, method


def _best_first(pal: _Palette, layout: _CrossLayout, budget: int) -> bool:
    """Search Kempe swap sequences; leaves ``pal`` in a solved state on success."""
    edges_order = sorted(pal.color)

    def snapshot() -> tuple[int, ...]:
        return tuple(pal.color[e] for e in edges_order)

    def restore(state: tuple[int, ...]) -> None:
        for e in edges_order:
            pal.clear(*e)
        for e, c in zip(edges_order, state):
            pal.set(e[0], e[1], c)

    start = snapshot()
    heap = [(len(_conflicts(pal, layout)), 0, start)]
    visited = {start}
    counter = 1
    expanded = 0
    while heap and expanded < budget:
        total, _, state = heapq.heappop(heap)
        restore(state)
        if total == 0:
            return True
        expanded += 1
        for move in _candidate_moves(pal, _conflicts(pal, layout)):
            path = _apply_move(pal, move)
            child = snapshot()
            if child not in visited:
                visited.add(child)
                heapq.heappush(heap, (len(_conflicts(pal, layout)), counter, child))
                counter += 1
            pal.swap(path, move[1], move[2])
    restore(start)
    return False


# -- exact oracle ----------------------------------------------------------


def exact_one_factorize(graph: SimpleGraph, budget: int = DEFAULT_BUDGET) -> Factorization | None:
    """Search for a 1-factorization; ``None`` means none exists.

    Classes are built one at a time. Each new class takes the smallest unused
    neighbour of vertex 0 (classes are interchangeable, so this loses nothing),
    then repeatedly matches the least uncovered vertex. Raises
    ``BudgetExceeded`` after ``budget`` edge choices.
    """
    n = graph.vertex_count
    d = graph.regular_valence()
    if d is None or n % 2:
        return None
    if d == 0:
        return Factorization(graph, ())
    adj = graph.adjacency
    eid = {e: i for i, e in enumerate(graph.edges)}
    used = [False] * len(graph.edges)
    covered = [False] * n
    classes: list[list[int]] = []
    expansions = 0

    def has_option(x: int) -> bool:
        return any(not covered[y] and not used[eid[edge(x, y)]] for y in adj[x])

    def remaining_cycles_even() -> bool:
        rest = [[y for y in adj[x] if not used[eid[edge(x, y)]]] for x in range(n)]
        seen = [False] * n
        for s in range(n):
            if seen[s]:
                continue
            length, prev, x = 0, -1, s
            while not seen[x]:
                seen[x] = True
                length += 1
                nxt = rest[x][0] if rest[x][0] != prev else rest[x][1]
                prev, x = x, nxt
            if length % 2:
                return False
        return True

    def fill(current: list[int], first: bool) -> bool:
        nonlocal expansions
        v = next((x for x in range(n) if not covered[x]), None)
        if v is None:
            return close(current)
        candidates = [w for w in adj[v] if not covered[w] and not used[eid[edge(v, w)]]]
        if first:
            candidates = candidates[:1]
        for w in candidates:
            expansions += 1
            if expansions > budget:
                raise BudgetExceeded(f"exact solver exceeded {budget} expansions")
            e = eid[edge(v, w)]
            used[e] = covered[v] = covered[w] = True
            current.append(e)
            touched = [y for x in (v, w) for y in adj[x] if not covered[y]]
            if all(has_option(y) for y in touched) and fill(current, False):
                return True
            current.pop()
            used[e] = covered[v] = covered[w] = False
        return False

    def close(current: list[int]) -> bool:
        classes.append(list(current))
        left = d - len(classes)
        if left == 0 or left == 1:
            if left == 1:
                classes.append([i for i, u in enumerate(used) if not u])
            return True
        if left == 2 and not remaining_cycles_even():
            classes.pop()
            return False
        for x in range(n):
            covered[x] = False
        if fill([], True):
            return True
        for x in range(n):
            covered[x] = True
        classes.pop()
        return False

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 4 * d * (n // 2 + 2) + 200))
    try:
        found = fill([], True)
    finally:
        sys.setrecursionlimit(limit)
    if not found:
        return None
    return Factorization(graph, tuple(tuple(graph.edges[i] for i in c) for c in classes)).canonical()
