import random
from fractions import Fraction

import pytest
from hypothesis import strategies as st

from tiltwall.chern_core import ChernVector
from tiltwall.variety import blowup_p3, p3

O_L = ChernVector(7, 4, 1, Fraction(1, 6))


@pytest.fixture(scope="session")
def bl():
    return blowup_p3()


@pytest.fixture(scope="session")
def proj3():
    return p3()


def rationals(max_num=40, max_den=12):
    return st.builds(
        Fraction,
        st.integers(-max_num, max_num),
        st.integers(1, max_den),
    )


def chern_vectors(max_num=30, max_den=6):
    q = rationals(max_num, max_den)
    return st.builds(ChernVector, q, q, q, q)


def random_lattice_class(rng: random.Random, size: int = 6) -> ChernVector:
    """Random class in the blow-up lattice 7Z x Z x (1/2)Z x (1/6)Z."""
    return ChernVector(
        7 * rng.randint(-size, size),
        rng.randint(-4 * size, 4 * size),
        Fraction(rng.randint(-8 * size, 8 * size), 2),
        Fraction(rng.randint(-24 * size, 24 * size), 6),
    )


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
