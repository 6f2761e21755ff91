import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cayleyfactor.bench import theorem_catalog
from cayleyfactor.cayley import build_cayley, quotient_graph
from cayleyfactor.edge_color import Factorization, exact_one_factorize
from cayleyfactor.errors import NotConnectedError, OutOfScopeError, PreconditionError
from cayleyfactor.factorizer import (
    BRANCHES,
    Stage,
    extend_by_even_generator,
    factorize,
    factorize_cycle_base,
    factorize_nilpotent,
    lemma1_factorize,
    lift_from_quotient,
    replay_certificate,
    replicate_over_cosets,
    verify_factorization,
)
from cayleyfactor.formats import GroupSpec, parse_generators
from cayleyfactor.groups import (
    build_cyclic,
    catalog_group,
    direct_product,
    generated_subgroup,
    random_generating_set,
)


def spec(text):
    return GroupSpec.parse(text)


class TestBaseCycle:
    def test_single_edge(self):
        f = factorize_cycle_base(build_cyclic(2), 1)
        assert f.classes == (((0, 1),),)

    @pytest.mark.parametrize("n", [4, 6, 10, 16])
    def test_even_cycle(self, n):
        g = build_cyclic(n)
        f = factorize_cycle_base(g, 1)
        assert len(f) == 2 and all(len(c) == n // 2 for c in f.classes)
        assert verify_factorization(build_cayley(g, [1]), f).ok

    def test_rejects_odd(self):
        with pytest.raises(OutOfScopeError):
            factorize_cycle_base(build_cyclic(5), 1)


class TestPipelineExamples:
    @pytest.mark.parametrize(
        "text,gens,valence",
        [
            ("Z2", "1", 1),
            ("Z4", "1", 2),
            ("V4", "1,2", 2),
            ("Z4*Z3", "(1,1),(0,1)", 4),
            ("Z2*Z3", "(1,1),(0,1)", 4),
            ("Q8", "1,2", 4),
            ("D4", "1,2", None),
            ("Q8*Z3", "(1,0),(2,1)", None),
            ("Z2*Z4*Z3", "(1,0,0),(0,1,0),(0,0,1)", None),
        ],
    )
    def test_verifies(self, text, gens, valence):
        sp = spec(text)
        s = parse_generators(gens, sp)
        out = factorize(sp.group, s)
        gamma = build_cayley(sp.group, s)
        assert verify_factorization(gamma, out.factorization).ok
        assert len(out.factorization) == gamma.valence
        if valence is not None:
            assert gamma.valence == valence
        assert out.certificate.branch in BRANCHES
        assert replay_certificate(out.certificate).ok

    def test_single_even_generator_uses_quotient(self, z4z3):
        out = factorize(z4z3, [4, 1])
        assert out.certificate.branch == "quotient-lift"
        assert out.certificate.data["normal"] == [0, 6]
        assert out.certificate.children[0].branch.startswith("lemma1")

    def test_two_even_generators_extend(self):
        g = catalog_group("V4")
        out = factorize(g, [1, 2])
        assert out.certificate.branch == "extend-even"
        assert out.certificate.data["odd_cycles"] == 0

    def test_disconnected(self):
        with pytest.raises(NotConnectedError):
            factorize(build_cyclic(4), [2])

    def test_out_of_scope(self):
        with pytest.raises(OutOfScopeError):
            factorize(catalog_group("S3"), [1, 2])
        with pytest.raises(OutOfScopeError):
            factorize_nilpotent(build_cyclic(9), [1])


class TestViolations:
    def _fact(self, z4z3):
        gamma = build_cayley(z4z3, [4, 1])
        return gamma, factorize(z4z3, [4, 1]).factorization

    def test_drop_edge(self, z4z3):
        gamma, f = self._fact(z4z3)
        classes = list(f.classes)
        classes[0] = classes[0][1:]
        r = verify_factorization(gamma, Factorization(f.graph, tuple(classes)))
        assert r.count("uncovered") == 2 and r.count("missing-edge") == 1

    def test_merge_classes(self, z4z3):
        gamma, f = self._fact(z4z3)
        merged = (f.classes[0] + f.classes[1],) + f.classes[2:]
        r = verify_factorization(gamma, Factorization(f.graph, merged))
        assert r.count("overcovered") == z4z3.order
        assert r.count("class-count") == 1


class TestCertificate:
    def test_roundtrip_json(self, z4z3):
        cert = factorize(z4z3, [4, 1]).certificate
        again = Stage.from_dict(json.loads(json.dumps(cert.to_dict())))
        assert again.to_dict() == cert.to_dict()
        assert replay_certificate(again).ok

    def test_tampered(self, z4z3):
        cert = factorize(z4z3, [4, 1]).certificate
        d = cert.to_dict()
        d["classes"][0] = d["classes"][0][1:]
        assert not replay_certificate(Stage.from_dict(d)).ok

    def test_deterministic(self):
        g = spec("D4*Z3").group
        gens = random_generating_set(g, np.random.default_rng(5))
        a = factorize(g, gens)
        b = factorize(g, gens)
        assert a.factorization.classes == b.factorization.classes
        assert a.certificate.to_dict() == b.certificate.to_dict()


class TestBuildingBlocks:
    def test_replicate(self):
        g = build_cyclic(8)
        sub = generated_subgroup(g, [2])
        inner = factorize_cycle_base(sub.as_group, 1)
        f = replicate_over_cosets(inner, sub)
        assert verify_factorization(build_cayley(g, [2]), f).ok

    def test_extend_involution(self):
        g = catalog_group("V4")
        base = factorize_cycle_base(generated_subgroup(g, [1]).as_group, 1)
        copied = replicate_over_cosets(base, generated_subgroup(g, [1]))
        f = extend_by_even_generator(copied, g, 2)
        assert len(f) == 2 and verify_factorization(build_cayley(g, [1, 2]), f).ok

    def test_extend_rejects_odd(self, z4z3):
        with pytest.raises(PreconditionError):
            extend_by_even_generator(factorize_cycle_base(build_cyclic(2), 1), z4z3, 1)

    def test_lift_fold(self):
        g = build_cyclic(4)
        fib = quotient_graph(build_cayley(g, [1]), generated_subgroup(g, [2]))
        qfact = factorize_cycle_base(build_cyclic(2), 1)
        f = lift_from_quotient(fib, qfact)
        assert verify_factorization(fib.source, f).ok and len(f) == 2

    def test_lift_covering(self, z4z3):
        gamma = build_cayley(z4z3, [4, 1])
        fib = quotient_graph(gamma, generated_subgroup(z4z3, [6]))
        qfact = lemma1_factorize(fib.target.group, fib.target.generators).factorization
        f = lift_from_quotient(fib, qfact)
        assert verify_factorization(gamma, f).ok and len(f) == 4

    def test_lift_requires_covering(self):
        g = build_cyclic(8)
        fib = quotient_graph(build_cayley(g, [1, 3]), generated_subgroup(g, [4]))
        with pytest.raises(PreconditionError):
            lift_from_quotient(fib, factorize_cycle_base(build_cyclic(4), 1))

    def test_lemma1_preconditions(self, z4z3):
        with pytest.raises(PreconditionError):
            lemma1_factorize(z4z3, [4, 1])  # 2-part has order 4
        g = spec("Z2*Z3").group
        with pytest.raises(PreconditionError):
            lemma1_factorize(g, [3, 5])  # two even generators


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([n for n, g in theorem_catalog() if g.order <= 16]), st.integers(0, 2**32))
def test_agrees_with_exact_oracle(name, seed):
    g = dict(theorem_catalog())[name]
    gens = random_generating_set(g, np.random.default_rng(seed))
    gamma = build_cayley(g, gens)
    out = factorize(g, gens)
    assert verify_factorization(gamma, out.factorization).ok
    assert exact_one_factorize(gamma.graph) is not None


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["Z2", "Z4", "Q8", "D4"]), st.sampled_from(["Z3", "Z5"]), st.integers(0, 2**32))
def test_every_certificate_stage_replays(q, h, seed):
    g = direct_product(catalog_group(q), catalog_group(h))
    out = factorize(g, random_generating_set(g, np.random.default_rng(seed)))
    assert replay_certificate(out.certificate).ok
    assert all(s.verified for s in out.certificate.walk())
