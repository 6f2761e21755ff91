"""Seeded theorem-scope instances and the benchmark harness."""

from __future__ import annotations

import csv
import io
import time
import zlib
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .cayley import build_cayley
from .edge_color import exact_one_factorize
from .errors import BudgetExceeded
from .factorizer import factorize, verify_factorization
from .formats import GroupSpec
from .groups import Group, random_generating_set

Q_PARTS = ("Z2", "Z4", "Z8", "V4", "Z2*Z4", "D4", "Q8")
H_PARTS = ("Z1", "Z3", "Z5", "Z7", "Z9", "Z3*Z3")
MAX_ORDER = 72

BENCH_BUDGET = 10**5
CSV_HEADER = ("group", "trial", "generators", "gens_size", "valence", "verified", "exact",
              "pipeline_ms", "exact_ms")
TIMING_COLUMNS = ("pipeline_ms", "exact_ms")


@lru_cache(maxsize=None)
def theorem_catalog() -> tuple[tuple[str, Group], ...]:
    """Every ``Q*H`` from the catalog parts with order at most ``MAX_ORDER``."""
    out = []
    for q in Q_PARTS:
        for h in H_PARTS:
            spec = GroupSpec.parse(f"{q}*{h}")
            if spec.group.order <= MAX_ORDER:
                out.append((spec.text, spec.group))
    return tuple(out)


def instance_rng(seed: int, name: str) -> np.random.Generator:
    """Independent stream per (seed, group), so filtering never shifts other groups."""
    return np.random.default_rng([seed % 2**64, zlib.crc32(name.encode())])


def theorem_instances(
    seed: int, trials: int, names: Iterable[str] | None = None
) -> Iterator[tuple[str, Group, int, tuple[int, ...]]]:
    wanted = None if names is None else set(names)
    for name, g in theorem_catalog():
        if wanted is not None and name not in wanted:
            continue
        rng = instance_rng(seed, name)
        for trial in range(trials):
            yield name, g, trial, random_generating_set(g, rng)


def run_bench(seed: int, trials: int, names: Iterable[str] | None = None,
              budget: int = BENCH_BUDGET) -> str:
    """CSV text with one row per instance; only the ``*_ms`` columns vary between runs."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for name, g, trial, gens in theorem_instances(seed, trials, names):
        gamma = build_cayley(g, gens)
        t0 = time.perf_counter()
        outcome = factorize(g, gens)
        pipeline_ms = (time.perf_counter() - t0) * 1e3
        verified = verify_factorization(gamma, outcome.factorization).ok
        t0 = time.perf_counter()
        try:
            found = exact_one_factorize(gamma.graph, budget)
            exact = "found" if found is not None else "none"
            exact_ms = f"{(time.perf_counter() - t0) * 1e3:.3f}"
        except BudgetExceeded:
            exact, exact_ms = "timeout", "timeout"
        writer.writerow((name, trial, " ".join(map(str, gens)), len(gens), gamma.valence,
                         str(verified).lower(), exact, f"{pipeline_ms:.3f}", exact_ms))
    return buf.getvalue()


def strip_timing(csv_text: str) -> list[list[str]]:
    rows = list(csv.reader(io.StringIO(csv_text)))
    if not rows:
        return rows
    keep = [i for i, col in enumerate(rows[0]) if col not in TIMING_COLUMNS]
    return [[row[i] for i in keep] for row in rows]
