from __future__ import annotations

from fractions import Fraction

import pytest

from shintani.classdata import build_datum
from shintani.qfield import QuadElem, QuadIdeal, field, modulus_data


def make_datum(D: int, modulus: QuadElem | None = None, a: QuadIdeal | None = None):
    ctx = field(D)
    f_ideal = QuadIdeal.unit(D) if modulus is None else QuadIdeal.principal(modulus)
    f = modulus_data(f_ideal, ctx)
    return build_datum(a or QuadIdeal.unit(D), f, ctx)


@pytest.fixture(scope="session")
def golden():
    """D = 5, f = (4 - sqrt 5), class of O_K."""
    return make_datum(5, QuadElem(4, -1, 5))


@pytest.fixture(scope="session")
def trivial5():
    return make_datum(5)


@pytest.fixture(scope="session")
def trivial12():
    return make_datum(12)


def F(p, q=1):
    return Fraction(p, q)


ACCEPTANCE_LINES = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_LINES] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
