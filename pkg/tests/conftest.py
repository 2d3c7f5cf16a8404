import random
from decimal import Decimal, getcontext

import pytest

from fullgroup.circle import ClopenSet
from fullgroup.quadext import QuadExt
from fullgroup.rotation import gamma, phi_power, swap, unit_arc

getcontext().prec = 80

D = 2
ALPHA = QuadExt(0, 1, 10, D)


def as_decimal(x: QuadExt) -> Decimal:
    """High-precision float image of a QuadExt; an oracle independent of sign_of."""
    return (Decimal(x.p) + Decimal(x.q) * Decimal(x.d).sqrt()) / Decimal(x.r)


def random_point(rng: random.Random, alpha: QuadExt = ALPHA) -> QuadExt:
    k = rng.randint(-30, 30)
    j = rng.randint(0, 39)
    return (alpha * k + QuadExt.rational(j, 40, alpha.d)).mod1()


def random_set(rng: random.Random, alpha: QuadExt = ALPHA, max_arcs: int = 3) -> ClopenSet:
    pairs = [(random_point(rng, alpha), random_point(rng, alpha)) for _ in range(rng.randint(0, max_arcs))]
    return ClopenSet.make(pairs, alpha.d)


def random_swap_set(rng: random.Random, alpha: QuadExt = ALPHA) -> ClopenSet:
    """A random V with V and V + alpha disjoint: a subset of a translate of [0, alpha)."""
    U = unit_arc(alpha).rotate(rng.randint(-20, 20), alpha)
    return U & random_set(rng, alpha)


def random_element(rng: random.Random, alpha: QuadExt = ALPHA, length: int = 4):
    U = unit_arc(alpha)
    g = phi_power(alpha, 0)
    for _ in range(rng.randint(1, length)):
        choice = rng.randrange(4)
        if choice == 0:
            h = phi_power(alpha, rng.choice([-2, -1, 1, 3]))
        elif choice == 1:
            h = swap(alpha, U.rotate(rng.randint(-9, 9), alpha))
        elif choice == 2:
            h = swap(alpha, random_swap_set(rng, alpha))
        else:
            h = gamma(alpha, U.rotate(rng.randint(-9, 9), alpha) & random_set(rng, alpha))
        g = g * h
    return g


@pytest.fixture
def alpha():
    return ALPHA


@pytest.fixture
def U():
    return unit_arc(ALPHA)


@pytest.fixture
def rng():
    return random.Random(20261016)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
