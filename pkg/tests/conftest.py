import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from torickit.exactla import IntMatrix
from torickit.fan import (
    hirzebruch_fan,
    product_fan,
    projective_space_fan,
    simplex_fan,
    star_subdivision,
)
from torickit.morphism import ToricMorphism


@pytest.fixture
def P1():
    return projective_space_fan(1)


@pytest.fixture
def P2():
    return projective_space_fan(2)


@pytest.fixture
def P112():
    return simplex_fan([(1, 0), (0, 1), (-1, -2)])


@pytest.fixture
def blowup_P2(P2):
    return star_subdivision(P2, (1, 1))


@pytest.fixture
def blowdown(blowup_P2, P2):
    return ToricMorphism(blowup_P2, P2, IntMatrix.identity(2))


@pytest.fixture
def P1xP1(P1):
    return product_fan(P1, P1)


def scale(n, k):
    return IntMatrix([[k * int(i == j) for j in range(n)] for i in range(n)])


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def record(number, ok, detail):
        lines.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        print(lines[-1])
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
