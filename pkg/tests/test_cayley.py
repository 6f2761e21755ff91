import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayleyfactor.cayley import (
    build_cayley,
    components_by_cosets,
    connection_set,
    covering_condition,
    quotient_graph,
)
from cayleyfactor.errors import PreconditionError
from cayleyfactor.groups import (
    build_cyclic,
    catalog_group,
    direct_product,
    generated_subgroup,
    is_normal,
    random_generating_set,
)


def z2z3():
    return direct_product(build_cyclic(2), build_cyclic(3))


class TestConnectionSet:
    def test_involution(self):
        g = catalog_group("V4")
        assert connection_set(g, [1]) == (1,)

    def test_z6(self):
        assert connection_set(build_cyclic(6), [1]) == (1, 5)

    def test_product_negation(self, z4z3):
        # -(1,1) = (3,2) -> index 3*3 + 2
        assert connection_set(z4z3, [4]) == (4, 11)

    def test_identity_rejected(self):
        with pytest.raises(PreconditionError):
            connection_set(build_cyclic(4), [0, 1])


class TestBuild:
    def test_single_edge(self):
        gamma = build_cayley(build_cyclic(2), [1])
        assert gamma.edges == ((0, 1),) and gamma.valence == 1

    def test_four_cycle(self):
        gamma = build_cayley(build_cyclic(4), [1])
        assert gamma.edges == ((0, 1), (0, 3), (1, 2), (2, 3)) and gamma.valence == 2

    def test_octahedron(self):
        g = z2z3()
        gamma = build_cayley(g, [4, 1])  # (1,1), (0,1)
        # enumerate on coordinates directly: x ~ y iff y - x in +-(1,1), +-(0,1)
        steps = {(1, 1), (1, 2), (0, 1), (0, 2)}
        expected = set()
        for a in range(2):
            for b in range(3):
                for da, db in steps:
                    u, v = a * 3 + b, ((a + da) % 2) * 3 + (b + db) % 3
                    expected.add((min(u, v), max(u, v)))
        assert set(gamma.edges) == expected and len(expected) == 12
        assert gamma.valence == 4
        # octahedron: every vertex misses exactly one other vertex
        assert all(len(n) == 4 for n in gamma.graph.adjacency)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            build_cayley(build_cyclic(4), [])


class TestComponents:
    def test_connected(self):
        assert components_by_cosets(catalog_group("Q8"), [1, 2]) == [list(range(8))]

    def test_z4_by_two(self):
        assert components_by_cosets(build_cyclic(4), [2]) == [[0, 2], [1, 3]]

    def test_z12_by_four(self):
        comps = components_by_cosets(build_cyclic(12), [4])
        assert len(comps) == 4 and all(len(c) == 3 for c in comps)
        assert comps[0] == [0, 4, 8]


class TestQuotientGraph:
    def test_z4_fold(self):
        g = build_cyclic(4)
        fib = quotient_graph(build_cayley(g, [1]), generated_subgroup(g, [2]))
        assert fib.target.edges == ((0, 1),)
        assert fib.folds == (1,)
        assert sorted(fib.fibers[(0, 1)]) == [(0, 1), (0, 3), (1, 2), (2, 3)]

    def test_z4z3_no_fold(self, z4z3):
        gamma = build_cayley(z4z3, [4, 1])
        fib = quotient_graph(gamma, generated_subgroup(z4z3, [6]))
        assert fib.target.group.order == 6 and fib.target.valence == 4
        assert fib.folds == () and fib.covering
        assert all(len(f) == 2 for f in fib.fibers.values())

    def test_trivial_normal(self):
        g = catalog_group("D4")
        gamma = build_cayley(g, [1, 2])
        fib = quotient_graph(gamma, generated_subgroup(g, []))
        assert fib.target.edges == gamma.edges
        assert all(f == (e,) for e, f in fib.fibers.items())

    def test_preconditions(self):
        g = catalog_group("S3")
        with pytest.raises(PreconditionError):
            quotient_graph(build_cayley(g, [1, 2]), generated_subgroup(g, [1]))
        z = build_cyclic(4)
        with pytest.raises(PreconditionError):
            quotient_graph(build_cayley(z, [2, 1]), generated_subgroup(z, [2]))

    def test_covering_violation_is_reported(self):
        g = build_cyclic(8)
        # 1 + 3 = 4 lies in <4>
        fib = quotient_graph(build_cayley(g, [1, 3]), generated_subgroup(g, [4]))
        assert not fib.covering
        assert not covering_condition(g, [1, 3], generated_subgroup(g, [4]))


def _cayley_cases():
    names = ["Z4*Z3", "Q8", "D4*Z3", "V4*Z5", "Z3xZ3", "Z2xZ4"]
    return st.tuples(st.sampled_from(names), st.integers(0, 2**32))


def _group(name):
    parts = name.split("*")
    g = catalog_group(parts[0])
    for p in parts[1:]:
        g = direct_product(g, catalog_group(p))
    return g


@settings(max_examples=40, deadline=None)
@given(_cayley_cases())
def test_regular_and_right_translation_invariant(case):
    name, seed = case
    g = _group(name)
    if g.order % 2:
        gens = (1,)
    else:
        gens = random_generating_set(g, np.random.default_rng(seed))
    gamma = build_cayley(g, gens)
    assert all(len(a) == gamma.valence for a in gamma.graph.adjacency)
    edges = set(gamma.edges)
    for t in range(g.order):
        moved = {tuple(sorted((g.op(u, t), g.op(v, t)))) for u, v in edges}
        assert moved == edges


def test_odd_order_has_even_valence():
    for name in ["Z3", "Z5", "Z9", "Z3xZ3", "Z7"]:
        g = catalog_group(name)
        for x in range(1, g.order):
            assert build_cayley(g, [x]).valence % 2 == 0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["Z4*Z3", "Z8*Z3", "Q8*Z3", "Z4*Z5", "D4"]), st.integers(0, 2**32))
def test_fibration_partitions_and_is_local_iso(name, seed):
    g = _group(name)
    gens = random_generating_set(g, np.random.default_rng(seed))
    gamma = build_cayley(g, gens)
    for x in range(g.order):
        n = generated_subgroup(g, [x])
        if n.order > 2 or any(s in n for s in gens):
            continue
        if not is_normal(g, n):
            continue
        fib = quotient_graph(gamma, n)
        assert sum(len(f) for f in fib.fibers.values()) == len(gamma.edges)
        seen = [e for f in fib.fibers.values() for e in f]
        assert len(seen) == len(set(seen))
        if fib.covering and not fib.folds:
            proj = fib.projection
            for v in range(g.order):
                images = {tuple(sorted((proj[v], proj[w]))) for w in gamma.graph.adjacency[v]}
                assert len(images) == gamma.valence
