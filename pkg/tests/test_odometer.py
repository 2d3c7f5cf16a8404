import random

import pytest

from fullgroup import odometer as od
from fullgroup.errors import LevelError, NonElementError

T = od.OdoType((2, 4, 8, 16))


def rand_elem(rng, k, tower=T):
    m = tower.m(k)
    tau = list(range(m))
    rng.shuffle(tau)
    return od.unsplit(tower, k, [rng.randint(-4, 4) for _ in range(m)], tuple(tau))


def test_tower_validation():
    with pytest.raises(LevelError):
        od.OdoType((4, 6))
    with pytest.raises(LevelError):
        od.OdoType((4, 4))
    assert od.OdoType.parse("2,4,8,16") == T
    assert od.OdoType.dyadic(8).levels[-1] == 256
    with pytest.raises(LevelError):
        T.m(5)


def test_make_examples():
    assert od.make(T, 3, [0] * 8) == od.identity(T, 3)
    sec = od.make(T, 1, [1, -1])
    assert sec.perm() == (1, 0)
    phi = od.make(T, 1, [1, 1])
    assert phi.perm() == (1, 0)
    with pytest.raises(NonElementError):
        od.make(T, 1, [1, 0])
    with pytest.raises(LevelError):
        od.make(T, 1, [0, 0, 0])


def test_compose_examples():
    rng = random.Random(0)
    g = rand_elem(rng, 2)
    assert g * od.identity(T, 2) == g == od.identity(T, 2) * g
    sec = od.make(T, 1, [1, -1])
    assert (sec * sec) == od.identity(T, 1)
    with pytest.raises(LevelError):
        od.compose(sec, od.identity(T, 2))


def test_compose_matches_residue_oracle():
    rng = random.Random(1)
    for k in (1, 2):
        for _ in range(1000):
            g, h = rand_elem(rng, k), rand_elem(rng, k)
            j = k + 2
            assert od.residue_action(g * h, j) == od.compose_perms(od.residue_action(g, j), od.residue_action(h, j))


def test_lift_examples_and_homomorphism():
    assert od.lift(od.identity(T, 1)) == od.identity(T, 2)
    assert od.lift(od.make(T, 1, [1, -1])).c == (1, -1, 1, -1)
    rng = random.Random(2)
    for _ in range(500):
        g, h = rand_elem(rng, 2), rand_elem(rng, 2)
        assert od.lift(g * h) == od.lift(g) * od.lift(h)
        assert od.lift(od.lift(g)) == od.lift_to(g, 4)
    with pytest.raises(LevelError):
        od.lift(od.identity(T, 4))


def test_split_examples():
    # c[l] = m * n[tau(l)] + (tau(l) - l)
    assert od.split(od.identity(T, 1)) == ((0, 0), (0, 1))
    assert od.split(od.make(T, 1, [2, 2])) == ((1, 1), (0, 1))
    # tau = (1 0): c0 = 1 = 2*n1 + 1 -> n1 = 0; c1 = -1 = 2*n0 - 1 -> n0 = 0
    assert od.split(od.make(T, 1, [1, -1])) == ((0, 0), (1, 0))
    # phi at level 1: c0 = 1 = 2*n1 + 1 -> n1 = 0; c1 = 1 = 2*n0 - 1 -> n0 = 1
    assert od.split(od.make(T, 1, [1, 1])) == ((1, 0), (1, 0))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_semidirect_law(k):
    rng = random.Random(10 + k)
    for _ in range(1000):
        g, h = rand_elem(rng, k), rand_elem(rng, k)
        assert od.split(g * h) == od.pair_product(od.split(g), od.split(h))
        n, tau = od.split(g)
        assert od.unsplit(T, k, n, tau) == g


def test_section_is_homomorphic_right_inverse():
    rng = random.Random(4)
    for _ in range(300):
        t1 = tuple(rng.sample(range(4), 4))
        t2 = tuple(rng.sample(range(4), 4))
        s = od.section(T, 2, t1) * od.section(T, 2, t2)
        assert s == od.section(T, 2, od.compose_perms(t1, t2))
        assert od.section(T, 2, t1).perm() == t1
        assert od.split(od.section(T, 2, t1))[0] == (0, 0, 0, 0)


def test_kernel_is_coordinatewise():
    n = (1, -2, 0, 3)
    g = od.kernel(T, 2, n)
    assert od.split(g) == (n, (0, 1, 2, 3))
    assert g * od.kernel(T, 2, (1, 1, 1, 1)) == od.kernel(T, 2, (2, -1, 1, 4))


def test_inverse():
    rng = random.Random(6)
    for _ in range(200):
        g = rand_elem(rng, 3)
        assert g * g.inverse() == od.identity(T, 3) == g.inverse() * g


@pytest.mark.parametrize("k", [1, 2])
def test_standard_generators_generate_level(k):
    # every kernel unit and every section is reachable from {phi, section of (0 1)}
    gens = od.standard_generators(T, k)
    gens = gens + [g.inverse() for g in gens]
    m = T.m(k)
    targets = {od.kernel(T, k, [1 if j == i else 0 for j in range(m)]) for i in range(m)}
    seen = {od.identity(T, k)}
    frontier = list(seen)
    for _ in range(12):
        frontier = [g * s for g in frontier for s in gens if g * s not in seen]
        seen.update(frontier)
        if targets <= seen:
            break
    assert targets <= seen
