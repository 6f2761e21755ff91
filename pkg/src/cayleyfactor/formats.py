"""Group specifications, JSON documents and DOT output.

Group specification grammar::

    spec := atom ("*" atom)*
    atom := "Z" int | "Q8" | "D4" | "S3" | "V4" | "perm:" cycle-list | "table:" path

Products associate to the left and use the row-major encoding of
:func:`cayleyfactor.groups.direct_product`, so the element with coordinates
``(c0, c1, ..., ck)`` over factors of orders ``(n0, ..., nk)`` has index
``(...((c0 * n1 + c1) * n2 + c2)...)``.

A ``perm:`` atom lists generators separated by ``,`` or ``;``, each written as
disjoint cycles: ``perm:(0 1)(2 3),(0 2)(1 3)``. A ``table:`` file holds the
order followed by the row-major multiplication table, whitespace separated,
with ``#`` starting a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import jsonschema

from .cayley import CayleyGraph
from .edge_color import Factorization, SimpleGraph
from .errors import ParseError, SizeLimitError
from .factorizer import FactorizeOutcome
from .groups import (
    SIZE_CAP,
    Group,
    build_cyclic,
    catalog_group,
    cycles_to_permutation,
    direct_product,
    from_permutations,
)

GRAPH_VERSION = "cayley-graph/1"
FACTOR_VERSION = "cayley-factor/1"

CATALOG_ATOMS = ("Q8", "D4", "S3", "V4")


@dataclass(frozen=True, eq=False)
class GroupSpec:
    text: str
    group: Group
    factor_orders: tuple[int, ...]

    @classmethod
    def parse(cls, text: str, cap: int = SIZE_CAP) -> "GroupSpec":
        atoms = _split_atoms(text)
        if not atoms:
            raise ParseError("empty group specification", 0)
        groups = [_parse_atom(body, pos, cap) for body, pos in atoms]
        g = groups[0]
        for other, (_, pos) in zip(groups[1:], atoms[1:]):
            try:
                g = direct_product(g, other, cap)
            except SizeLimitError as exc:
                raise SizeLimitError(f"{exc} (at position {pos})") from None
        g = Group(g.mul, g.identity, g.inv, text.strip(), g.labels)
        return cls(text.strip(), g, tuple(x.order for x in groups))

    def encode(self, coords: tuple[int, ...]) -> int:
        if len(coords) != len(self.factor_orders):
            raise ValueError(f"expected {len(self.factor_orders)} coordinates, got {len(coords)}")
        index = 0
        for c, n in zip(coords, self.factor_orders):
            if not 0 <= c < n:
                raise ValueError(f"coordinate {c} out of range for a factor of order {n}")
            index = index * n + c
        return index


def parse_group_spec(text: str, cap: int = SIZE_CAP) -> Group:
    return GroupSpec.parse(text, cap).group


def _split_atoms(text: str) -> list[tuple[str, int]]:
    atoms, start = [], 0
    for i, ch in enumerate(text + "*"):
        if ch == "*":
            body = text[start:i]
            lead = len(body) - len(body.lstrip())
            if not body.strip():
                raise ParseError("missing group atom", start)
            atoms.append((body.strip(), start + lead))
            start = i + 1
    return atoms


_CYCLE = re.compile(r"\(\s*(\d+(?:\s+\d+)*)\s*\)")


def _parse_atom(body: str, pos: int, cap: int) -> Group:
    if body.startswith("perm:"):
        return _parse_perm(body[5:], pos + 5, cap)
    if body.startswith("table:"):
        return load_table(body[6:].strip(), cap, pos + 6)
    if body in CATALOG_ATOMS:
        return catalog_group(body)
    if body.startswith("Z"):
        if not body[1:].isdigit():
            raise ParseError(f"expected an integer after 'Z' in {body!r}", pos + 1)
        n = int(body[1:])
        if n < 1:
            raise ParseError("cyclic group order must be positive", pos + 1)
        if n > cap:
            raise SizeLimitError(f"Z{n} exceeds the size cap {cap} (at position {pos})")
        return build_cyclic(n)
    raise ParseError(f"unknown group atom {body!r}", pos)


def _parse_perm(text: str, pos: int, cap: int) -> Group:
    gens = []
    for chunk in re.split(r"[,;]", text):
        stripped = chunk.strip()
        offset = pos + len(chunk) - len(chunk.lstrip())
        if not stripped:
            raise ParseError("empty permutation generator", offset)
        cycles, at = [], 0
        while at < len(stripped):
            m = _CYCLE.match(stripped, at)
            if not m:
                raise ParseError("expected a cycle like (0 1 2)", offset + at)
            cycles.append([int(v) for v in m.group(1).split()])
            at = m.end()
            while at < len(stripped) and stripped[at].isspace():
                at += 1
        gens.append((cycles, offset))
        pos += len(chunk) + 1
    degree = max((v + 1 for cycles, _ in gens for c in cycles for v in c), default=0)
    perms = []
    for cycles, offset in gens:
        try:
            perms.append(cycles_to_permutation(cycles, degree))
        except ValueError as exc:
            raise ParseError(str(exc), offset) from None
    return from_permutations(perms, cap=cap, name="perm")


def load_table(path: str | Path, cap: int = SIZE_CAP, pos: int = 0) -> Group:
    """Read a multiplication-table document (order, then the table row by row)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read table file: {exc}", pos) from None
    tokens = " ".join(line.split("#", 1)[0] for line in text.splitlines()).split()
    try:
        values = [int(t) for t in tokens]
    except ValueError:
        raise ParseError("table file contains a non-integer token", pos) from None
    if not values:
        raise ParseError("table file is empty", pos)
    n = values[0]
    if n < 1:
        raise ParseError("table order must be positive", pos)
    if n > cap:
        raise SizeLimitError(f"table order {n} exceeds the size cap {cap}")
    if len(values) != 1 + n * n:
        raise ParseError(f"expected {n * n} table entries, found {len(values) - 1}", pos)
    rows = [values[1 + i * n : 1 + (i + 1) * n] for i in range(n)]
    try:
        return Group.from_table(rows, name=Path(path).name)
    except ValueError as exc:
        raise ParseError(f"malformed table: {exc}", pos) from None


_TUPLE = re.compile(r"\(([^()]*)\)|(-?\d+)")


def parse_generators(text: str, spec: GroupSpec) -> tuple[int, ...]:
    """Parse ``"1,5"`` or ``"(1,1),(0,1)"`` (coordinates over the spec's factors)."""
    out, at = [], 0
    text = text.strip()
    while at < len(text):
        while at < len(text) and text[at] in " ,":
            at += 1
        if at >= len(text):
            break
        m = _TUPLE.match(text, at)
        if not m:
            raise ParseError("expected an element index or a coordinate tuple", at)
        try:
            if m.group(1) is not None:
                coords = tuple(int(c) for c in m.group(1).replace(",", " ").split())
                out.append(spec.encode(coords))
            else:
                x = int(m.group(2))
                if not 0 <= x < spec.group.order:
                    raise ValueError(f"element {x} out of range")
                out.append(x)
        except ValueError as exc:
            raise ParseError(str(exc), at) from None
        at = m.end()
    return tuple(out)


# -- JSON ------------------------------------------------------------------

_EDGE_LIST = {
    "type": "array",
    "items": {
        "type": "array",
        "items": {"type": "integer", "minimum": 0},
        "minItems": 2,
        "maxItems": 2,
    },
}
_GROUP = {
    "type": "object",
    "required": ["name", "order"],
    "properties": {"name": {"type": "string"}, "order": {"type": "integer", "minimum": 1}},
}

GRAPH_SCHEMA = {
    "type": "object",
    "required": ["version", "group", "generators", "connection_set", "valence", "edges"],
    "properties": {
        "version": {"const": GRAPH_VERSION},
        "group": _GROUP,
        "generators": {"type": "array", "items": {"type": "integer"}},
        "connection_set": {"type": "array", "items": {"type": "integer"}},
        "valence": {"type": "integer", "minimum": 0},
        "edges": _EDGE_LIST,
    },
}

FACTOR_SCHEMA = {
    "type": "object",
    "required": ["version", "group", "generators", "valence", "classes"],
    "properties": {
        "version": {"const": FACTOR_VERSION},
        "group": _GROUP,
        "generators": {"type": "array", "items": {"type": "integer"}},
        "valence": {"type": "integer", "minimum": 0},
        "classes": {"type": "array", "items": _EDGE_LIST},
        "certificate": {"type": ["object", "null"]},
    },
}


def graph_document(gamma: CayleyGraph) -> dict[str, Any]:
    return {
        "version": GRAPH_VERSION,
        "group": {"name": gamma.group.name, "order": gamma.group.order},
        "generators": list(gamma.generators),
        "connection_set": list(gamma.connection_set),
        "valence": gamma.valence,
        "edges": [list(e) for e in gamma.edges],
    }


def factorization_document(gamma: CayleyGraph, outcome: FactorizeOutcome | Factorization) -> dict[str, Any]:
    if isinstance(outcome, FactorizeOutcome):
        fact, cert = outcome.factorization, outcome.certificate.to_dict()
    else:
        fact, cert = outcome, None
    return {
        "version": FACTOR_VERSION,
        "group": {"name": gamma.group.name, "order": gamma.group.order},
        "generators": list(gamma.generators),
        "valence": gamma.valence,
        "classes": fact.as_lists(),
        "certificate": cert,
    }


def validate_document(doc: Any, schema: dict) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` does not match ``schema``."""
    jsonschema.validate(doc, schema)


def graph_from_document(doc: dict[str, Any]) -> SimpleGraph:
    validate_document(doc, GRAPH_SCHEMA)
    return SimpleGraph(doc["group"]["order"], [tuple(e) for e in doc["edges"]])


def factorization_from_document(doc: dict[str, Any], graph: SimpleGraph) -> Factorization:
    validate_document(doc, FACTOR_SCHEMA)
    return Factorization(graph, tuple(tuple(tuple(e) for e in c) for c in doc["classes"]))


# -- DOT -------------------------------------------------------------------


def to_dot(gamma: CayleyGraph, fact: Factorization | None = None, labels: bool = False) -> str:
    """Undirected DOT text; with a factorization, class ``i`` gets ``color=c<i>``."""
    color = {}
    if fact is not None:
        color = {e: i for i, cls in enumerate(fact.classes) for e in cls}
    name = gamma.group.name.replace('"', "'") or "G"
    lines = [f'graph "{name}" {{']
    for v in range(gamma.group.order):
        label = gamma.group.label(v) if labels else str(v)
        lines.append(f'  {v} [label="{label}"];')
    for u, v in gamma.edges:
        attr = f" [color=c{color[(u, v)]}]" if (u, v) in color else ""
        lines.append(f"  {u} -- {v}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
