import pytest
from hypothesis import settings

from isoclass.algebra import Algebra
from isoclass.latin import parse_pls, ring_of

# first calls build cached tables such as GL(3, 3); wall-clock deadlines only add noise
settings.register_profile("default", deadline=None)
settings.load_profile("default")


def products(p, dim, *quads):
    return Algebra.from_products(p, dim, quads)


@pytest.fixture
def pair_f2():
    """Rings of the squares 12 20 and 12 21 over F2 (isotopic, isomorphic)."""
    return ring_of(parse_pls("12 20"), 2), ring_of(parse_pls("12 21"), 2)


@pytest.fixture
def pair_f3():
    return ring_of(parse_pls("12 20"), 3), ring_of(parse_pls("12 21"), 3)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
