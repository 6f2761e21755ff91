"""Constructive 1-factorization of Cayley graphs of groups Q x H.

``factorize`` follows the induction on the size of the generating set:

* one generator: the graph is an even cycle (or a single edge);
* two or more even-order generators: drop one, factorize the subgroup the
  rest generate, copy it over the cosets, then add the dropped generator's
  edges as one or two new matchings;
* a single even-order generator ``a = a1 * a2``: pass to the quotient by
  ``N = <a1^2>``, which has the shape ``Z2 x H``, factorize it with the
  mirrored-colouring construction, and lift back.

Every stage is verified before it is used, and the path taken is recorded in
a :class:`Stage` tree so a run can be audited or replayed later.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable

from .cayley import CayleyGraph, QuotientFibration, build_cayley, connection_set, quotient_graph
from .edge_color import (
    DEFAULT_BUDGET,
    Edge,
    Factorization,
    Report,
    SimpleGraph,
    complete_cross_edges,
    edge,
    exact_one_factorize,
    mirror_color,
    verify_one_factorization,
)
from .errors import (
    CayleyFactorError,
    CompletionFailed,
    NotConnectedError,
    NotDecomposableError,
    OutOfScopeError,
    PreconditionError,
)
from .groups import (
    Group,
    Subgroup,
    as_generating_set,
    generated_subgroup,
    is_normal,
    right_transversal,
    split_even_odd_parts,
    sylow_q2_decompose,
)

BRANCHES = (
    "base-cycle",
    "replicate",
    "extend-even",
    "lemma1-involution",
    "lemma1-general",
    "quotient-lift",
    "fallback-exact",
)


class _StructureError(CayleyFactorError):
    """A structural check failed; the caller falls back to the exact solver."""


@dataclass
class Stage:
    """One node of a certificate: what was built, how, and whether it verified."""

    branch: str
    vertex_count: int
    valence: int
    edges: list[Edge]
    classes: list[list[Edge]]
    verified: bool
    data: dict[str, Any] = field(default_factory=dict)
    children: list["Stage"] = field(default_factory=list)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def to_dict(self) -> dict[str, Any]:
        return {
            "branch": self.branch,
            "verified": self.verified,
            "data": self.data,
            "vertex_count": self.vertex_count,
            "valence": self.valence,
            "edges": [list(e) for e in self.edges],
            "classes": [[list(e) for e in c] for c in self.classes],
            "children": [c.to_dict() for c in self.children],
        }

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "Stage":
        return cls(
            branch=d["branch"],
            vertex_count=d["vertex_count"],
            valence=d["valence"],
            edges=[tuple(e) for e in d["edges"]],
            classes=[[tuple(e) for e in c] for c in d["classes"]],
            verified=d["verified"],
            data=d.get("data", {}),
            children=[cls.from_dict(c) for c in d.get("children", [])],
        )


@dataclass(frozen=True)
class FactorizeOutcome:
    factorization: Factorization
    certificate: Stage


def verify_factorization(gamma: CayleyGraph | SimpleGraph, f: Factorization) -> Report:
    """All violations of "``f`` is a 1-factorization of ``gamma``"."""
    if isinstance(gamma, CayleyGraph):
        return verify_one_factorization(gamma.graph, f, gamma.valence)
    return verify_one_factorization(gamma, f)


def replay_certificate(root: Stage) -> Report:
    """Re-verify every stage marked verified from the data stored in it."""
    report = Report()
    for i, stage in enumerate(root.walk()):
        if not stage.verified:
            continue
        graph = SimpleGraph(stage.vertex_count, stage.edges)
        sub = verify_one_factorization(graph, Factorization(graph, stage.classes), stage.valence)
        for v in sub.violations:
            report.add(v.kind, (i,) + tuple(v.where), f"stage {i} ({stage.branch}): {v.message}")
    return report


def _stage(branch, graph: SimpleGraph, valence: int, fact: Factorization, data=None, children=()) -> Stage:
    report = verify_one_factorization(graph, fact, valence)
    if not report.ok:
        raise _StructureError(f"{branch} stage failed verification: {report.violations[0].message}")
    return Stage(
        branch=branch,
        vertex_count=graph.vertex_count,
        valence=valence,
        edges=list(graph.edges),
        classes=[list(c) for c in fact.classes],
        verified=True,
        data=dict(data or {}),
        children=list(children),
    )


# -- building blocks -------------------------------------------------------


def factorize_cycle_base(g: Group, a: int) -> Factorization:
    """Factorize Gamma({a}:G) for cyclic ``G = <a>`` of even order."""
    n = g.order
    if n % 2:
        raise OutOfScopeError("a cycle of odd length has no 1-factorization")
    if generated_subgroup(g, [a]).order != n:
        raise PreconditionError("a does not generate the group")
    graph = build_cayley(g, [a]).graph
    walk = [g.identity]
    for _ in range(n - 1):
        walk.append(g.rows[a][walk[-1]])
    if n == 2:
        return Factorization(graph, ((edge(walk[0], walk[1]),),))
    steps = [edge(walk[i], walk[(i + 1) % n]) for i in range(n)]
    return Factorization(graph, (tuple(steps[0::2]), tuple(steps[1::2])))


def replicate_over_cosets(sub_fact: Factorization, sub: Subgroup) -> Factorization:
    """Copy a factorization of Gamma(T:G1) onto every right coset ``G1 t``.

    ``sub_fact`` uses the local numbering of ``sub.as_group``; the result is a
    factorization of the (possibly disconnected) graph Gamma(T:G).
    """
    g = sub.parent
    members = sub.members
    classes: list[list[Edge]] = [[] for _ in sub_fact.classes]
    for t in right_transversal(g, sub):
        for i, cls in enumerate(sub_fact.classes):
            classes[i].extend(edge(g.rows[members[x]][t], g.rows[members[y]][t]) for x, y in cls)
    all_edges = [e for c in classes for e in c]
    return Factorization(SimpleGraph(g.order, all_edges), tuple(tuple(c) for c in classes))


def generator_cycles(g: Group, a: int) -> list[list[int]]:
    """Orbits of ``x -> a*x``, each listed from its least element."""
    seen = [False] * g.order
    cycles = []
    for start in range(g.order):
        if seen[start]:
            continue
        cyc, x = [], start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = g.rows[a][x]
        cycles.append(cyc)
    return cycles


def extend_by_even_generator(base: Factorization, g: Group, a: int) -> Factorization:
    """Add the edges ``{x, a*x}`` to a factorization as one or two new classes.

    The new edges form a perfect matching when ``a`` is an involution and
    otherwise a union of cycles of length ``ord(a)``, split into their two
    alternating halves. Existing classes keep their positions.
    """
    k = g.orders[a]
    if k % 2:
        raise PreconditionError("the added generator must have even order")
    if edge(g.identity, a) in base.graph.edge_set:
        return base
    cycles = generator_cycles(g, a)
    new: list[tuple[Edge, ...]]
    if k == 2:
        new = [tuple(edge(c[0], c[1]) for c in cycles)]
    else:
        halves: tuple[list[Edge], list[Edge]] = ([], [])
        for cyc in cycles:
            if len(cyc) % 2:
                raise _StructureError(f"odd cycle of length {len(cyc)} in extension")
            for i in range(len(cyc)):
                halves[i % 2].append(edge(cyc[i], cyc[(i + 1) % len(cyc)]))
        new = [tuple(halves[0]), tuple(halves[1])]
    graph = SimpleGraph(g.order, base.graph.edges + tuple(e for c in new for e in c))
    return Factorization(graph, base.classes + tuple(new))


def _lift(fib: QuotientFibration, qfact: Factorization) -> tuple[Factorization, list[int]]:
    if not fib.covering:
        raise PreconditionError("the covering condition fails; the lift is not defined")
    src = fib.source
    g = src.group
    classes: list[list[Edge]] = []
    spare: dict[int, list[Edge]] = {}
    fold_lengths: list[int] = []
    for qcls in qfact.classes:
        plain: list[Edge] = []
        folded: list[Edge] = []
        for te in qcls:
            for se in fib.fibers[te]:
                (folded if fib.is_fold_edge(*se) else plain).append(se)
        for cyc in _cycles_of(folded):
            fold_lengths.append(len(cyc))
            if len(cyc) % 2:
                raise _StructureError("odd fold cycle in lift")
            c = src.generator_of(cyc[0], cyc[1])
            key = min(c, g.inverses[c])
            for i in range(len(cyc)):
                e = edge(cyc[i], cyc[(i + 1) % len(cyc)])
                (plain if i % 2 == 0 else spare.setdefault(key, [])).append(e)
        classes.append(plain)
    classes.extend(spare[k] for k in sorted(spare))
    return Factorization(src.graph, tuple(tuple(c) for c in classes)), fold_lengths


def _cycles_of(edges: list[Edge]) -> list[list[int]]:
    """Vertex sequences of a 2-regular edge set, each starting at its least vertex."""
    nbrs: dict[int, list[int]] = {}
    for u, v in edges:
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    if any(len(x) != 2 for x in nbrs.values()):
        raise _StructureError("fold preimage is not 2-regular")
    seen: set[int] = set()
    cycles = []
    for start in sorted(nbrs):
        if start in seen:
            continue
        cyc, prev, x = [start], None, min(nbrs[start])
        seen.add(start)
        prev = start
        while x != start:
            cyc.append(x)
            seen.add(x)
            a, b = nbrs[x]
            prev, x = x, (b if a == prev else a)
        cycles.append(cyc)
    return cycles


def lift_from_quotient(fib: QuotientFibration, qfact: Factorization) -> Factorization:
    """Pull a factorization of the quotient graph back to the source graph.

    Over a non-fold quotient edge the fibre is a matching, so each quotient
    class lifts to a class of the same name. Over a fold edge the fibre is an
    even cycle: one alternating half stays with the lifted class and the other
    half joins an extra class collecting the spare halves of that fold
    generator, which comes out as a perfect matching because the fold cycles
    cover every vertex.
    """
    return _lift(fib, qfact)[0]


# -- the Z2 x H construction ----------------------------------------------


def lemma1_factorize(g: Group, gens: Iterable[int], budget: int = DEFAULT_BUDGET) -> FactorizeOutcome:
    """Factorize Gamma(S : Z2 x H) when ``S`` has exactly one even-order element.

    The odd part of ``S`` spans a graph on ``H``; a copy of it on ``zH`` gets the
    same colours through ``x -> zx``. The remaining edges run between the two
    copies and are coloured by :func:`complete_cross_edges`; if that gives up,
    the exact solver finishes the job and the certificate says so.
    """
    gens = as_generating_set(g, gens)
    if generated_subgroup(g, gens).order != g.order:
        raise PreconditionError("S does not generate the group")
    try:
        q, h = sylow_q2_decompose(g)
    except NotDecomposableError as exc:
        raise PreconditionError(f"not of shape Z2 x H: {exc}") from None
    if q.order != 2:
        raise PreconditionError("not of shape Z2 x H: the 2-part has order > 2")
    evens = [s for s in gens if g.orders[s] % 2 == 0]
    if len(evens) != 1:
        raise PreconditionError(f"need exactly one even-order generator, got {len(evens)}")
    a = evens[0]
    z = q.members[1] if q.members[0] == g.identity else q.members[0]
    rest = [s for s in gens if s != a]
    involution = g.rows[a][a] == g.identity
    branch = "lemma1-involution" if involution else "lemma1-general"

    gamma = build_cayley(g, gens)
    inner = set(build_cayley(g, rest).edges) if rest else set()
    h_verts = list(h.members)
    zh_verts = sorted(g.rows[z][x] for x in h_verts)
    h_pos = {x: i for i, x in enumerate(h_verts)}
    zh_pos = {x: i for i, x in enumerate(zh_verts)}
    g1 = SimpleGraph(len(h_verts), [(h_pos[u], h_pos[v]) for u, v in inner if u in h_pos and v in h_pos])
    g2 = SimpleGraph(len(zh_verts), [(zh_pos[u], zh_pos[v]) for u, v in inner if u in zh_pos and v in zh_pos])
    iso = [zh_pos[g.rows[z][x]] for x in h_verts]
    c1, c2 = mirror_color(g1, iso, g2)

    base = {edge(h_verts[u], h_verts[v]): c for (u, v), c in c1.color_of.items()}
    base.update({edge(zh_verts[u], zh_verts[v]): c for (u, v), c in c2.color_of.items()})
    cross = [e for e in gamma.edges if e not in inner]
    data = {
        "group": g.name,
        "order": g.order,
        "generators": list(gens),
        "a": a,
        "z": z,
        "inner_palette": c1.palette_size,
    }
    try:
        coloring, method = complete_cross_edges(gamma.graph, base, cross, gamma.valence)
        fact = coloring.to_factorization()
        data["completion"] = method
        stage = _stage(branch, gamma.graph, gamma.valence, fact, data)
    except (CompletionFailed, _StructureError) as exc:
        data["completion"] = "failed"
        data["reason"] = str(exc)
        fact, stage = _exact_stage(gamma, budget, data)
    return FactorizeOutcome(fact, stage)


def _exact_stage(gamma: CayleyGraph, budget: int, data: dict | None = None) -> tuple[Factorization, Stage]:
    fact = exact_one_factorize(gamma.graph, budget)
    if fact is None:
        raise CayleyFactorError("the exact solver proved the graph is not 1-factorizable")
    return fact, _stage("fallback-exact", gamma.graph, gamma.valence, fact, data)


# -- induction -------------------------------------------------------------


def factorize(g: Group, gens: Iterable[int], budget: int = DEFAULT_BUDGET) -> FactorizeOutcome:
    """1-factorize the connected Cayley graph Gamma(S:G) for ``G = Q x H``.

    Raises ``NotConnectedError`` if ``S`` does not generate ``G`` and
    ``OutOfScopeError`` if ``G`` is not a nontrivial 2-group times an odd
    group. Any failed internal check degrades to the exact solver, whose
    ``BudgetExceeded`` is the only remaining failure.
    """
    gens = as_generating_set(g, gens)
    if not gens or generated_subgroup(g, gens).order != g.order:
        raise NotConnectedError("S does not generate G")
    if g.order % 2:
        raise OutOfScopeError("groups of odd order are out of scope")
    try:
        q, h = sylow_q2_decompose(g)
    except NotDecomposableError as exc:
        raise OutOfScopeError(str(exc)) from None
    gamma = build_cayley(g, gens)
    try:
        fact, stage = _induct(g, gens, gamma, q, h, budget)
    except _StructureError as exc:
        fact, stage = _exact_stage(gamma, budget, {"group": g.name, "order": g.order, "reason": str(exc)})
    return FactorizeOutcome(fact.canonical(), stage)


def factorize_nilpotent(g: Group, gens: Iterable[int], budget: int = DEFAULT_BUDGET) -> FactorizeOutcome:
    """Entry point for nilpotent groups of even order via their Sylow splitting."""
    if g.order % 2:
        raise OutOfScopeError("the group has odd order")
    try:
        sylow_q2_decompose(g)
    except NotDecomposableError as exc:
        raise OutOfScopeError(f"not a 2-group times an odd group: {exc}") from None
    return factorize(g, gens, budget)


def _induct(g, gens, gamma, q, h, budget) -> tuple[Factorization, Stage]:
    info = {"group": g.name, "order": g.order, "generators": list(gens)}
    if len(gens) == 1:
        fact = factorize_cycle_base(g, gens[0])
        return fact, _stage("base-cycle", gamma.graph, gamma.valence, fact, info)

    evens = [s for s in gens if g.orders[s] % 2 == 0]
    if len(evens) >= 2:
        a = evens[0]
        rest = [s for s in gens if s != a]
        sub = generated_subgroup(g, rest)
        local = [sub.index_of[s] for s in rest]
        inner = factorize(sub.as_group, local, budget)
        copied = replicate_over_cosets(inner.factorization, sub)
        rest_gamma = build_cayley(g, rest)
        copy_stage = _stage(
            "replicate", rest_gamma.graph, rest_gamma.valence, copied,
            {"subgroup": list(sub.members), "cosets": len(right_transversal(g, sub))},
            [inner.certificate],
        )
        fact = extend_by_even_generator(copied, g, a)
        lengths = [] if fact is copied else [len(c) for c in generator_cycles(g, a)]
        return fact, _stage(
            "extend-even", gamma.graph, gamma.valence, fact,
            {**info, "a": a, "cycle_lengths": lengths,
             "odd_cycles": sum(1 for n in lengths if n % 2), "unchanged": fact is copied},
            [copy_stage],
        )
    if len(evens) != 1:
        raise _StructureError("no even-order generator")

    a = evens[0]
    a1, a2 = split_even_odd_parts(g, a)
    if generated_subgroup(g, [a1]).members != q.members:
        raise _StructureError("the 2-part of the group is not generated by a1")
    n = generated_subgroup(g, [g.rows[a1][a1]])
    if not is_normal(g, n) or any(s in n for s in gens):
        raise _StructureError("N = <a1^2> is not normal or meets S")
    fib = quotient_graph(gamma, n)
    if not fib.covering:
        raise _StructureError("covering condition fails")
    quotient = fib.target.group
    if quotient.order != 2 * h.order:
        raise _StructureError("quotient does not have order 2|H|")
    try:
        if sylow_q2_decompose(quotient)[0].order != 2:
            raise _StructureError("quotient is not of shape Z2 x H")
    except NotDecomposableError as exc:
        raise _StructureError(f"quotient is not of shape Z2 x H: {exc}") from None
    inner = lemma1_factorize(quotient, fib.target.generators, budget)
    fact, fold_lengths = _lift(fib, inner.factorization)
    return fact, _stage(
        "quotient-lift", gamma.graph, gamma.valence, fact,
        {**info, "a": a, "a1": a1, "a2": a2, "normal": list(n.members),
         "quotient_order": quotient.order, "folds": list(fib.folds),
         "fold_cycle_lengths": fold_lengths},
        [inner.certificate],
    )
