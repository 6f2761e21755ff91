import itertools

import pytest

from cayleyfactor.edge_color import SimpleGraph
from cayleyfactor.groups import build_cyclic, catalog_group, direct_product

CATALOG_NAMES = ["Z1", "Z2", "Z6", "Z12", "V4", "Z2xZ4", "Z3xZ3", "Q8", "D4", "S3"]


@pytest.fixture(params=CATALOG_NAMES)
def catalog(request):
    return catalog_group(request.param)


@pytest.fixture
def z4z3():
    return direct_product(build_cyclic(4), build_cyclic(3))


def petersen() -> SimpleGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return SimpleGraph(10, outer + inner + spokes)


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph(n, list(itertools.combinations(range(n), 2)))


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
