"""Cayley graphs, their components, and quotient fibrations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from .edge_color import Edge, SimpleGraph, edge
from .errors import PreconditionError
from .groups import (
    Group,
    Subgroup,
    as_generating_set,
    generated_subgroup,
    is_normal,
    quotient_group,
    right_transversal,
)


@dataclass(frozen=True, eq=False)
class CayleyGraph:
    """Gamma(S:G) with edges ``{g, s*g}`` for ``s`` in ``S`` and its inverses."""

    group: Group
    generators: tuple[int, ...]
    connection_set: tuple[int, ...]
    edges: tuple[Edge, ...]

    @property
    def valence(self) -> int:
        return len(self.connection_set)

    @cached_property
    def graph(self) -> SimpleGraph:
        return SimpleGraph(self.group.order, self.edges)

    def generator_of(self, u: int, v: int) -> int:
        """The element ``c`` of the connection set with ``c * u == v``."""
        g = self.group
        return g.rows[v][g.inverses[u]]


def connection_set(g: Group, gens: Iterable[int]) -> tuple[int, ...]:
    gens = as_generating_set(g, gens)
    return tuple(sorted(set(gens) | {g.inverses[s] for s in gens}))


def build_cayley(g: Group, gens: Iterable[int]) -> CayleyGraph:
    gens = as_generating_set(g, gens)
    if not gens:
        raise ValueError("a Cayley graph needs at least one generator")
    conn = connection_set(g, gens)
    xs = np.arange(g.order)
    pairs = set()
    for c in conn:
        ys = g.mul[c]
        pairs.update(zip(np.minimum(xs, ys).tolist(), np.maximum(xs, ys).tolist()))
    return CayleyGraph(g, gens, conn, tuple(sorted(pairs)))


def components_by_cosets(g: Group, gens: Iterable[int]) -> list[list[int]]:
    """Connected components of Gamma(S:G), one per right coset of <S>."""
    sub = generated_subgroup(g, gens)
    members = np.array(sub.members)
    return [sorted(g.mul[members, t].tolist()) for t in right_transversal(g, sub)]


@dataclass(frozen=True, eq=False)
class QuotientFibration:
    """The projection Gamma(S:G) -> Gamma(SN/N : G/N).

    ``fibers`` maps each target edge to the source edges lying over it.
    ``folds`` lists the source generators ``s`` with ``s^2`` in ``N`` but
    ``s^2 != 1``: their image is an involution, so a single target edge has
    a whole even cycle over it. ``covering`` records whether ``st`` and
    ``st^-1`` avoid ``N`` for all ``s != t^{+-1}`` in ``S``.
    """

    source: CayleyGraph
    target: CayleyGraph
    normal: Subgroup
    projection: tuple[int, ...]
    fibers: dict[Edge, tuple[Edge, ...]]
    folds: tuple[int, ...]
    covering: bool

    def is_fold_edge(self, u: int, v: int) -> bool:
        g = self.source.group
        c = self.source.generator_of(u, v)
        c2 = g.rows[c][c]
        return c2 != g.identity and c2 in self.normal


def covering_condition(g: Group, gens: Iterable[int], n: Subgroup) -> bool:
    gens = sorted(gens)
    inv = g.inverses
    for s in gens:
        for t in gens:
            if s == t or s == inv[t]:
                continue
            if g.rows[s][t] in n or g.rows[s][inv[t]] in n:
                return False
    return True


def quotient_graph(gamma: CayleyGraph, n: Subgroup) -> QuotientFibration:
    g = gamma.group
    if n.parent is not g:
        raise PreconditionError("N must be a subgroup of the Cayley graph's group")
    if not is_normal(g, n):
        raise PreconditionError("N is not normal")
    if any(s in n for s in gamma.generators):
        raise PreconditionError("N meets the generating set")
    qgroup, proj = quotient_group(g, n)
    target = build_cayley(qgroup, {proj[s] for s in gamma.generators})
    fibers: dict[Edge, list[Edge]] = {e: [] for e in target.edges}
    for u, v in gamma.edges:
        fibers[edge(proj[u], proj[v])].append((u, v))
    folds = tuple(
        s for s in gamma.generators
        if g.rows[s][s] != g.identity and g.rows[s][s] in n
    )
    return QuotientFibration(
        source=gamma,
        target=target,
        normal=n,
        projection=proj,
        fibers={e: tuple(f) for e, f in fibers.items()},
        folds=folds,
        covering=covering_condition(g, gamma.generators, n),
    )
