"""Finite groups stored as explicit multiplication tables.

Elements are the integers ``0..order-1``. Every constructor in this module puts
the identity at index 0. Direct products use the row-major encoding
``(i, j) -> i * |g2| + j``, so coordinates come back out with ``divmod``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import NotDecomposableError, PreconditionError, SizeLimitError

SIZE_CAP = 512


@dataclass(frozen=True, eq=False)
class Group:
    """A finite group given by its Cayley table.

    ``mul[a, b]`` is the index of the product ``a * b``. The group axioms are
    checked exhaustively at construction for orders up to ``SIZE_CAP``.
    """

    mul: np.ndarray
    identity: int
    inv: np.ndarray
    name: str = ""
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        mul = np.array(self.mul, dtype=np.int64)
        inv = np.array(self.inv, dtype=np.int64)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "inv", inv)
        mul.setflags(write=False)
        inv.setflags(write=False)
        n = mul.shape[0]
        if n < 1 or mul.shape != (n, n) or inv.shape != (n,):
            raise ValueError("multiplication table must be square and non-empty")
        if mul.min() < 0 or mul.max() >= n or inv.min() < 0 or inv.max() >= n:
            raise ValueError("table entries must lie in 0..order-1")
        if not 0 <= self.identity < n:
            raise ValueError("identity index out of range")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("need one label per element")
        if n <= SIZE_CAP:
            _check_axioms(mul, self.identity, inv)

    @classmethod
    def from_table(cls, table, name: str = "", labels=None) -> "Group":
        """Build a group from a bare table, locating the identity and inverses."""
        mul = np.asarray(table, dtype=np.int64)
        n = mul.shape[0]
        ids = [e for e in range(n) if np.array_equal(mul[e], np.arange(n))]
        if len(ids) != 1:
            raise ValueError("table has no unique left identity")
        e = ids[0]
        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.flatnonzero(mul[a] == e)
            if len(hits) != 1:
                raise ValueError(f"element {a} has no unique inverse")
            inv[a] = hits[0]
        return cls(mul, e, inv, name, labels)

    @property
    def order(self) -> int:
        return self.mul.shape[0]

    @cached_property
    def rows(self) -> list[list[int]]:
        # plain lists are much faster than numpy scalars in the hot loops
        return self.mul.tolist()

    @cached_property
    def inverses(self) -> list[int]:
        return self.inv.tolist()

    @cached_property
    def orders(self) -> list[int]:
        n = self.order
        result = np.zeros(n, dtype=np.int64)
        cur = np.arange(n)
        for k in range(1, n + 1):
            hit = (cur == self.identity) & (result == 0)
            result[hit] = k
            if result.all():
                break
            cur = self.mul[cur, np.arange(n)]
        return result.tolist()

    def op(self, a: int, b: int) -> int:
        return self.rows[a][b]

    def power(self, x: int, k: int) -> int:
        k %= self.orders[x]
        result, base = self.identity, x
        while k:
            if k & 1:
                result = self.rows[result][base]
            base = self.rows[base][base]
            k >>= 1
        return result

    def label(self, x: int) -> str:
        return self.labels[x] if self.labels is not None else str(x)

    def __repr__(self) -> str:
        return f"Group({self.name or '?'}, order={self.order})"


def _check_axioms(mul: np.ndarray, e: int, inv: np.ndarray) -> None:
    n = mul.shape[0]
    idx = np.arange(n)
    if not (np.array_equal(mul[e], idx) and np.array_equal(mul[:, e], idx)):
        raise ValueError("identity is not two-sided neutral")
    if not (np.all(mul[idx, inv] == e) and np.all(mul[inv, idx] == e)):
        raise ValueError("inverse table is wrong")
    for a in range(n):
        # (a*b)*c == a*(b*c) for all b, c
        if not np.array_equal(mul[mul[a]], mul[a][mul]):
            raise ValueError("multiplication is not associative")


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup of ``parent`` given by its sorted member indices."""

    parent: Group
    members: tuple[int, ...]

    def __post_init__(self) -> None:
        members = tuple(sorted(set(int(x) for x in self.members)))
        object.__setattr__(self, "members", members)
        g = self.parent
        if g.identity not in self._set:
            raise ValueError("subgroup must contain the identity")
        rows = g.rows
        for a in members:
            if g.inverses[a] not in self._set:
                raise ValueError("subset not closed under inverses")
            ra = rows[a]
            if any(ra[b] not in self._set for b in members):
                raise ValueError("subset not closed under multiplication")

    @cached_property
    def _set(self) -> frozenset[int]:
        return frozenset(self.members)

    @cached_property
    def index_of(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.members)}

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, x: int) -> bool:
        return x in self._set

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    @cached_property
    def as_group(self) -> Group:
        """The subgroup as a standalone group; local index ``i`` is ``members[i]``."""
        g = self.parent
        pos = np.full(g.order, -1, dtype=np.int64)
        mem = np.array(self.members, dtype=np.int64)
        pos[mem] = np.arange(len(mem))
        mul = pos[g.mul[np.ix_(mem, mem)]]
        inv = pos[g.inv[mem]]
        labels = tuple(g.label(x) for x in self.members) if g.labels else None
        name = f"<{g.name or 'G'} subgroup of order {len(mem)}>"
        return Group(mul, int(pos[g.identity]), inv, name, labels)


def as_generating_set(g: Group, xs: Iterable[int]) -> tuple[int, ...]:
    """Normalize ``xs`` into a sorted, duplicate-free tuple of valid non-identity elements."""
    gens = tuple(sorted(set(int(x) for x in xs)))
    for x in gens:
        if not 0 <= x < g.order:
            raise ValueError(f"element {x} is not in a group of order {g.order}")
    if g.identity in gens:
        raise PreconditionError("the identity cannot be a generator")
    return gens


# -- constructors ----------------------------------------------------------


def build_cyclic(n: int) -> Group:
    if n < 1:
        raise ValueError(f"cyclic group order must be positive, got {n}")
    if n > SIZE_CAP:
        raise SizeLimitError(f"Z{n} exceeds the size cap {SIZE_CAP}")
    idx = np.arange(n)
    mul = (idx[:, None] + idx[None, :]) % n
    return Group(mul, 0, (-idx) % n, f"Z{n}")


def direct_product(g1: Group, g2: Group, cap: int = SIZE_CAP) -> Group:
    """Componentwise product; element ``(i, j)`` has index ``i * |g2| + j``."""
    n1, n2 = g1.order, g2.order
    if n1 * n2 > cap:
        raise SizeLimitError(f"product order {n1 * n2} exceeds the size cap {cap}")
    mul = (g1.mul[:, None, :, None] * n2 + g2.mul[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    inv = (g1.inv[:, None] * n2 + g2.inv[None, :]).reshape(-1)
    labels = tuple(f"({g1.label(i)},{g2.label(j)})" for i in range(n1) for j in range(n2))
    name = f"{g1.name or 'G'}*{g2.name or 'H'}"
    return Group(mul, g1.identity * n2 + g2.identity, inv, name, labels)


def from_permutations(generators: Sequence[Sequence[int]], cap: int = SIZE_CAP, name: str = "") -> Group:
    """Close a list of permutations under composition.

    Elements are numbered in breadth-first discovery order starting from the
    identity. ``x * y`` means "apply ``y`` first, then ``x``", matching the
    left action used for Cayley graph edges.
    """
    gens = [tuple(int(v) for v in p) for p in generators]
    m = len(gens[0]) if gens else 0
    for p in gens:
        if len(p) != m or sorted(p) != list(range(m)):
            raise ValueError(f"{p} is not a permutation of 0..{m - 1}")
    ident = tuple(range(m))
    elements = [ident]
    index = {ident: 0}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for p in gens:
            y = tuple(p[v] for v in x)  # p after x
            if y not in index:
                if len(elements) >= cap:
                    raise SizeLimitError(f"closure exceeds the size cap {cap}")
                index[y] = len(elements)
                elements.append(y)
                queue.append(y)
    n = len(elements)
    mul = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            mul[i, j] = index[tuple(x[v] for v in y)]
    inv = np.empty(n, dtype=np.int64)
    for i, x in enumerate(elements):
        xi = [0] * m
        for v, w in enumerate(x):
            xi[w] = v
        inv[i] = index[tuple(xi)]
    labels = tuple(_cycle_notation(x) for x in elements)
    return Group(mul, 0, inv, name, labels)


def _cycle_notation(perm: Sequence[int]) -> str:
    seen, cycles = set(), []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cyc, v = [], start
        while v not in seen:
            seen.add(v)
            cyc.append(str(v))
            v = perm[v]
        cycles.append("(" + " ".join(cyc) + ")")
    return "".join(cycles) or "()"


def cycles_to_permutation(cycles: Sequence[Sequence[int]], degree: int | None = None) -> tuple[int, ...]:
    """Turn cycle notation like ``[(0, 1, 2), (3, 4)]`` into an image tuple."""
    points = [v for c in cycles for v in c]
    if len(points) != len(set(points)):
        raise ValueError("cycles must be disjoint")
    m = max(points, default=-1) + 1
    if degree is not None:
        if degree < m:
            raise ValueError("degree smaller than the largest moved point")
        m = degree
    perm = list(range(m))
    for c in cycles:
        for i, v in enumerate(c):
            perm[v] = c[(i + 1) % len(c)]
    return tuple(perm)


_CATALOG_PERMS = {
    "V4": [[(0, 1), (2, 3)], [(0, 2), (1, 3)]],
    "Q8": [[(0, 1, 3, 6), (2, 5, 7, 4)], [(0, 2, 3, 7), (1, 4, 6, 5)]],
    "D4": [[(0, 1, 2, 3)], [(1, 3)]],
    "S3": [[(0, 1)], [(0, 1, 2)]],
}


def catalog_group(name: str) -> Group:
    """Named groups: ``Z<n>``, ``V4``/``Z2xZ2``, ``Z2xZ4``, ``Z3xZ3``, ``Q8``, ``D4``, ``S3``."""
    if name in _CATALOG_PERMS:
        gens = [cycles_to_permutation(c) for c in _CATALOG_PERMS[name]]
        degree = max(len(p) for p in gens)
        gens = [p + tuple(range(len(p), degree)) for p in gens]
        return from_permutations(gens, name=name)
    if name == "Z2xZ2":
        return catalog_group("V4")
    if "x" in name:
        parts = name.split("x")
        g = catalog_group(parts[0])
        for p in parts[1:]:
            g = direct_product(g, catalog_group(p))
        return g
    if name.startswith("Z") and name[1:].isdigit():
        return build_cyclic(int(name[1:]))
    raise KeyError(f"unknown catalog group {name!r}")


# -- structure -------------------------------------------------------------


def element_order(g: Group, x: int) -> int:
    return g.orders[x]


def generated_subgroup(g: Group, xs: Iterable[int]) -> Subgroup:
    gens = sorted(set(int(x) for x in xs))
    rows = g.rows
    seen = {g.identity}
    queue = deque([g.identity])
    while queue:
        y = queue.popleft()
        for x in gens:
            z = rows[y][x]
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return Subgroup(g, tuple(seen))


def is_normal(g: Group, n: Subgroup) -> bool:
    members = np.array(n.members)
    mask = np.zeros(g.order, dtype=bool)
    mask[members] = True
    # conj[t, k] = t * n_k * t^-1
    conj = g.mul[g.mul[:, members], g.inv[:, None]]
    return bool(mask[conj].all())


def quotient_group(g: Group, n: Subgroup) -> tuple[Group, tuple[int, ...]]:
    """Return ``(G/N, projection)``.

    Cosets are numbered by their least member index, so the coset of the
    identity comes first whenever the identity is element 0.
    """
    if not is_normal(g, n):
        raise PreconditionError("quotient requires a normal subgroup")
    proj = np.full(g.order, -1, dtype=np.int64)
    reps = []
    members = np.array(n.members)
    for x in range(g.order):
        if proj[x] < 0:
            proj[g.mul[x, members]] = len(reps)
            reps.append(x)
    reps_arr = np.array(reps)
    qmul = proj[g.mul[np.ix_(reps_arr, reps_arr)]]
    qinv = proj[g.inv[reps_arr]]
    if not np.array_equal(proj[g.mul], qmul[proj[:, None], proj[None, :]]):
        raise AssertionError("coset projection is not a homomorphism")
    labels = tuple(g.label(r) + "N" for r in reps) if g.labels else None
    quotient = Group(qmul, int(proj[g.identity]), qinv, f"{g.name or 'G'}/N", labels)
    return quotient, tuple(proj.tolist())


def split_even_odd_parts(g: Group, a: int) -> tuple[int, int]:
    """Write ``a = a1 * a2`` with ``a1`` of 2-power order and ``a2`` of odd order.

    Both parts are powers of ``a``, so they commute. With ``ord(a) = 2^e * m``
    the exponents come from the Chinese remainder theorem.
    """
    k = g.orders[a]
    two = k & -k
    m = k // two
    if two == 1:
        return g.identity, a
    a1 = g.power(a, m * pow(m, -1, two))
    a2 = g.power(a, two * pow(two, -1, m)) if m > 1 else g.identity
    return a1, a2


def sylow_q2_decompose(g: Group) -> tuple[Subgroup, Subgroup]:
    """Split ``g`` as the internal direct product ``Q x H``.

    ``Q`` collects the elements of 2-power order and ``H`` those of odd order.
    Raises ``NotDecomposableError`` when either set fails to be a subgroup or
    the two do not commute elementwise, which happens exactly when the group
    is not of the form (2-group) x (odd group).
    """
    if g.order % 2:
        raise PreconditionError("sylow_q2_decompose needs a group of even order")
    orders = g.orders
    q = [x for x in range(g.order) if orders[x] & (orders[x] - 1) == 0]
    h = [x for x in range(g.order) if orders[x] % 2 == 1]
    try:
        qs, hs = Subgroup(g, q), Subgroup(g, h)
    except ValueError as exc:
        raise NotDecomposableError(f"{g.name or 'group'}: {exc}") from None
    if len(q) * len(h) != g.order:
        raise NotDecomposableError("orders of the 2-part and odd part do not multiply to |G|")
    qa, ha = np.array(q), np.array(h)
    if not np.array_equal(g.mul[np.ix_(qa, ha)], g.mul[np.ix_(ha, qa)].T):
        raise NotDecomposableError("2-part and odd part do not commute")
    if len(np.unique(g.mul[np.ix_(qa, ha)])) != g.order:
        raise NotDecomposableError("products q*h do not cover the group")
    return qs, hs


def right_transversal(g: Group, s: Subgroup) -> list[int]:
    """One representative per right coset ``s * t``: the identity, then least indices."""
    members = np.array(s.members)
    covered = np.zeros(g.order, dtype=bool)
    reps = [g.identity]
    covered[g.mul[members, g.identity]] = True
    for t in range(g.order):
        if not covered[t]:
            reps.append(t)
            covered[g.mul[members, t]] = True
    return reps


def is_two_power(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def random_generating_set(
    g: Group,
    rng: np.random.Generator,
    max_size: int = 4,
    max_tries: int = 1000,
) -> tuple[int, ...]:
    """Sample a generating set of ``g`` containing at least one even-order element.

    A size is drawn uniformly from ``1..max_size``, then that many distinct
    non-identity elements; non-generating draws are rejected and redrawn.
    """
    pool = [x for x in range(g.order) if x != g.identity]
    if not pool:
        raise PreconditionError("the trivial group has no generating set")
    for _ in range(max_tries):
        k = int(rng.integers(1, min(max_size, len(pool)) + 1))
        picks = rng.choice(len(pool), size=k, replace=False)
        gens = tuple(sorted(pool[i] for i in picks))
        if all(g.orders[x] % 2 for x in gens):
            continue
        if generated_subgroup(g, gens).order == g.order:
            return gens
    raise RuntimeError(f"no generating set found in {max_tries} draws")
