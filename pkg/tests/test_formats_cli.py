import json
import re

import jsonschema
import pytest

from cayleyfactor.cayley import build_cayley
from cayleyfactor.cli import main
from cayleyfactor.errors import ParseError, SizeLimitError
from cayleyfactor.factorizer import factorize
from cayleyfactor.formats import (
    FACTOR_SCHEMA,
    GRAPH_SCHEMA,
    GroupSpec,
    factorization_document,
    graph_document,
    parse_generators,
    to_dot,
    validate_document,
)


class TestGroupSpec:
    @pytest.mark.parametrize(
        "text,order",
        [("Z4*Z3", 12), ("Q8*Z3", 24), ("D4", 8), ("V4*Z5", 20), ("Z1", 1),
         ("perm:(0 1)(2 3),(0 2)(1 3)", 4), ("perm:(0 1 2);(0 1)", 6)],
    )
    def test_orders(self, text, order):
        assert GroupSpec.parse(text).group.order == order

    def test_encode(self):
        sp = GroupSpec.parse("Z4*Z3")
        assert sp.encode((1, 1)) == 4 and sp.encode((3, 2)) == 11
        with pytest.raises(ValueError):
            sp.encode((4, 0))

    @pytest.mark.parametrize("text,pos", [("Z4**Z3", 3), ("Zx", 1), ("W7", 0), ("Z4*perm:(0 1", 8), ("", 0)])
    def test_errors_have_positions(self, text, pos):
        with pytest.raises(ParseError) as info:
            GroupSpec.parse(text)
        assert info.value.position == pos

    def test_cap(self):
        with pytest.raises(SizeLimitError):
            GroupSpec.parse("Z32*Z32")

    def test_table_file(self, tmp_path):
        p = tmp_path / "z3.txt"
        p.write_text("# cyclic of order 3\n3\n0 1 2\n1 2 0\n2 0 1\n")
        g = GroupSpec.parse(f"table:{p}").group
        assert g.order == 3 and max(g.orders) == 3

    def test_bad_table_file(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("3\n0 1 2\n1 2 0\n")
        with pytest.raises(ParseError):
            GroupSpec.parse(f"table:{p}")
        p.write_text("2\n0 1\n0 1\n")
        with pytest.raises(ParseError):
            GroupSpec.parse(f"table:{p}")

    def test_generators(self):
        sp = GroupSpec.parse("Z4*Z3")
        assert parse_generators("(1,1),(0,1)", sp) == (4, 1)
        assert parse_generators("4, 1", sp) == (4, 1)
        with pytest.raises(ParseError):
            parse_generators("12", sp)
        with pytest.raises(ParseError):
            parse_generators("(1,1,1)", sp)


class TestDocuments:
    def test_schemas(self, z4z3):
        gamma = build_cayley(z4z3, [4, 1])
        validate_document(graph_document(gamma), GRAPH_SCHEMA)
        doc = factorization_document(gamma, factorize(z4z3, [4, 1]))
        validate_document(doc, FACTOR_SCHEMA)
        doc["version"] = "cayley-factor/0"
        with pytest.raises(jsonschema.ValidationError):
            validate_document(doc, FACTOR_SCHEMA)

    def test_dot_invariant(self, z4z3):
        gamma = build_cayley(z4z3, [4, 1])
        fact = factorize(z4z3, [4, 1]).factorization
        text = to_dot(gamma, fact)
        colored = re.findall(r"(\d+) -- (\d+) \[color=c(\d+)\]", text)
        assert len(colored) == len(gamma.edges)
        # every vertex sees each colour exactly once
        seen = {}
        for u, v, c in colored:
            for x in (u, v):
                seen.setdefault(x, []).append(c)
        assert all(sorted(cs) == sorted(str(i) for i in range(gamma.valence)) for cs in seen.values())


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCli:
    def _files(self, tmp_path, capsys, spec="Z4*Z3", gens="(1,1),(0,1)"):
        g, f = tmp_path / "g.json", tmp_path / "f.json"
        assert run(capsys, "export", "--spec", spec, "--gens", gens, "--out", str(g))[0] == 0
        assert run(capsys, "factorize", "--spec", spec, "--gens", gens, "--out", str(f))[0] == 0
        return g, f

    def test_roundtrip(self, tmp_path, capsys):
        g, f = self._files(tmp_path, capsys)
        code, out, _ = run(capsys, "verify", str(g), str(f))
        assert code == 0 and out.strip() == "ok"

    def test_tampered_class(self, tmp_path, capsys):
        g, f = self._files(tmp_path, capsys)
        doc = json.loads(f.read_text())
        a, b = doc["classes"][0][0], doc["classes"][1][0]
        doc["classes"][0][0], doc["classes"][1][0] = b, a
        f.write_text(json.dumps(doc))
        assert run(capsys, "verify", str(g), str(f))[0] == 1

    def test_truncated(self, tmp_path, capsys):
        g, f = self._files(tmp_path, capsys)
        f.write_text(f.read_text()[:40])
        assert run(capsys, "verify", str(g), str(f))[0] == 4

    def test_out_of_scope_and_exact(self, capsys):
        assert run(capsys, "factorize", "--spec", "S3", "--gens", "1,2")[0] == 2
        code, out, _ = run(capsys, "factorize", "--spec", "S3", "--gens", "1,2", "--exact")
        assert code == 0 and json.loads(out)["certificate"] is None

    def test_disconnected_and_components(self, capsys):
        assert run(capsys, "factorize", "--spec", "Z8", "--gens", "2")[0] == 2
        code, out, _ = run(capsys, "factorize", "--spec", "Z8", "--gens", "2", "--components")
        assert code == 0 and len(json.loads(out)["classes"]) == 2

    def test_bad_input(self, capsys):
        assert run(capsys, "factorize", "--spec", "Z4**Z3", "--gens", "1")[0] == 4
        assert run(capsys, "factorize", "--spec", "Z4", "--gens", "0")[0] == 4

    def test_not_factorizable(self, capsys):
        # odd-order graph: the exact solver proves no factorization exists
        assert run(capsys, "factorize", "--spec", "Z5", "--gens", "1", "--exact")[0] == 1

    def test_budget(self, capsys):
        args = ("factorize", "--spec", "Z4*Z3", "--gens", "(1,1),(0,1)", "--exact", "--budget", "2")
        assert run(capsys, *args)[0] == 3

    def test_dot_format(self, capsys):
        code, out, _ = run(capsys, "factorize", "--spec", "Z4", "--gens", "1", "--format", "dot")
        assert code == 0 and out.startswith('graph "Z4"') and out.count("color=c") == 4

    def test_bench(self, capsys):
        code, out, _ = run(capsys, "bench", "--filter", "Z4*Z3", "--seed", "42", "--trials", "2")
        lines = out.strip().splitlines()
        assert code == 0 and len(lines) == 3
        assert lines[0].startswith("group,trial")
        assert all(",true," in line for line in lines[1:])
