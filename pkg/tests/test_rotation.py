import random

import pytest

from fullgroup.circle import ClopenSet, parity_independent
from fullgroup.errors import NonElementError, PreconditionError, ResourceError
from fullgroup.quadext import QuadExt
from fullgroup.rotation import (
    GenWord,
    RotElement,
    find_lamp_set,
    first_return,
    gamma,
    gamma_word,
    index,
    lamplighter_in_derived,
    lamplighter_pair,
    phi_power,
    psi_orbit,
    sample_points,
    swap,
    unit_arc,
)

from conftest import ALPHA, random_element, random_set, random_swap_set

a = ALPHA
ID = phi_power(a, 0)
ZERO, ONE = QuadExt.integer(0, 2), QuadExt.integer(1, 2)


def test_phi_power():
    assert phi_power(a, 0).is_identity()
    assert index(phi_power(a, 1)) == 1
    assert (phi_power(a, 2) * phi_power(a, -2)).is_identity()
    assert phi_power(a, 3) * phi_power(a, 4) == phi_power(a, 7)
    assert phi_power(a, 1)(ZERO) == a


def test_swap(U):
    assert swap(a, ClopenSet.empty(2)).is_identity()
    s = swap(a, U)
    assert (s * s).is_identity()
    assert s.pieces == ((ZERO, a, 1), (a, a * 2, -1), (a * 2, ONE, 0))
    assert index(s) == 0
    with pytest.raises(PreconditionError):
        swap(a, ClopenSet.make([(ZERO, a * 2)]))


def test_gamma(U):
    assert gamma(a, ClopenSet.empty(2)).is_identity()
    g = gamma(a, U)
    assert (g * g * g).is_identity() and not (g * g).is_identity()
    assert index(g) == 0
    with pytest.raises(PreconditionError):
        gamma(a, ClopenSet.make([(ZERO, a * 3 / 2)]))


def test_from_pieces_rejects_non_bijections():
    with pytest.raises(NonElementError):
        RotElement.from_pieces(a, [(ZERO, a, 1), (a, ONE, 0)])
    with pytest.raises(NonElementError):
        RotElement.from_pieces(a, [(ZERO, a, 0)])


def test_compose_pointwise(rng):
    pts = sample_points(a, 100)
    for _ in range(30):
        g, h = random_element(rng), random_element(rng)
        gh = g * h
        assert gh == RotElement.from_pieces(a, gh.pieces)  # canonical and bijective
        for x in pts:
            assert gh(x) == g(h(x))
            assert gh.cocycle_at(x) == g.cocycle_at(h(x)) + h.cocycle_at(x)


def test_inverse(rng):
    assert ID.inverse() == ID
    for n in (-3, 1, 5):
        assert phi_power(a, n).inverse() == phi_power(a, -n)
    for _ in range(20):
        V = random_swap_set(rng)
        assert swap(a, V).inverse() == swap(a, V)
        g = random_element(rng)
        assert (g * g.inverse()).is_identity() and (g.inverse() * g).is_identity()


def test_index_homomorphism(rng):
    for _ in range(200):
        g, h = random_element(rng, length=3), random_element(rng, length=3)
        assert index(g * h) == index(g) + index(h)
        assert index(g * h * g.inverse() * h.inverse()) == 0


def _orbit_scan_return_time(x, U, cap=100):
    y = x
    for n in range(1, cap):
        y = (y + a).mod1()
        if y in U:
            return n
    raise AssertionError("no return")


def test_first_return(U):
    assert first_return(a, ClopenSet.full(2)) == phi_power(a, 1)
    psi = first_return(a, U)
    assert psi.cocycle_values(U) == {7, 8}
    assert index(psi) == 1
    assert psi.support() == U
    for x in sample_points(a, 400):
        if x in U:
            assert psi.cocycle_at(x) == _orbit_scan_return_time(x, U)
        else:
            assert psi(x) == x


def test_first_return_scattered_set(rng):
    for _ in range(10):
        V = random_set(rng)
        if not V:
            continue
        psi = first_return(a, V)
        assert index(psi) == 1  # one full return per unit of measure: Kac
        assert psi.image(V) == V
        for x in sample_points(a, 60):
            if x in V:
                assert psi.cocycle_at(x) == _orbit_scan_return_time(x, V, cap=10_000)


def test_first_return_cap():
    tiny = ClopenSet.make([(ZERO, QuadExt.rational(1, 10**4, 2))])
    with pytest.raises(ResourceError):
        first_return(a, tiny, cap=50)
    with pytest.raises(PreconditionError):
        first_return(a, ClopenSet.empty(2))


def test_image_matches_pointwise(rng):
    probes = sample_points(a, 300)
    for _ in range(20):
        g, A = random_element(rng), random_set(rng)
        B = g.image(A)
        assert B.measure() == A.measure()
        for x in probes:
            assert (g(x) in B) == (x in A)


def test_lamplighter_pair(U):
    r, s = lamplighter_pair(a, U, ClopenSet.empty(2))
    assert s.is_identity()
    psi = first_return(a, U)
    O, k, _ = find_lamp_set(a, U, psi, 5)
    r, s = lamplighter_pair(a, U, O, psi)
    assert (r.support() | s.support()).issubset(U | U.rotate(1, a))
    V = ClopenSet.make([(ZERO, QuadExt.rational(1, 50, 2))])
    assert r * swap(a, V) * r.inverse() == swap(a, psi.image(V))
    with pytest.raises(PreconditionError):
        lamplighter_pair(a, U, U.rotate(1, a))
    with pytest.raises(PreconditionError):
        lamplighter_pair(QuadExt(0, 1, 4, 2), unit_arc(QuadExt(0, 1, 4, 2)), ClopenSet.empty(2))


def test_lamplighter_relations(U):
    N = 5
    psi = first_return(a, U)
    O, _, verdict = find_lamp_set(a, U, psi, N)
    assert verdict.rank == 2 * N + 1
    r, s = lamplighter_pair(a, U, O, psi)
    orbit = psi_orbit(psi, O, N)
    conj = {k: r**k * s * r**-k for k in range(-N, N + 1)}
    for k in range(-N, N + 1):
        assert conj[k] == swap(a, orbit[N + k])
    for i in conj:
        for j in conj:
            assert conj[i] * conj[j] == conj[j] * conj[i]
    assert all(not (r**k).is_identity() for k in range(1, N + 1))


def test_lamplighter_in_derived(U):
    psi = first_return(a, U)
    O, _, _ = find_lamp_set(a, U, psi, 5)
    r, s = lamplighter_pair(a, U, O, psi)
    rp, sp = lamplighter_in_derived(a, r, s, U)
    assert index(rp) == index(sp) == 0
    assert (sp * sp).is_identity()
    far = U.rotate(2, a) | U.rotate(3, a)
    assert rp.support().issubset(U | U.rotate(1, a) | far)
    assert (phi_power(a, 2) * r.inverse() * phi_power(a, -2)).support().issubset(far)
    with pytest.raises(PreconditionError):
        lamplighter_in_derived(a, phi_power(a, 1), s, U)


def test_gamma_word_examples(U):
    w = gamma_word(a, 0, 0)
    assert w.evaluate(a) == gamma(a, U)
    w = gamma_word(a, 7, 0)
    W = ClopenSet.make([(ZERO, a * 8 - 1)])
    assert W == U & U.rotate(7, a)
    assert U.rotate(7, a) == ClopenSet.make([((a * 7).mod1(), a * 8 - 1)])
    assert w.evaluate(a) == gamma(a, W)
    with pytest.raises(PreconditionError):
        gamma_word(a, 0, 1)
    with pytest.raises(PreconditionError):
        gamma_word(QuadExt(0, 1, 8, 2), 0, 0)


def test_gamma_word_all_pairs(U):
    for m in range(-8, 9):
        for n in range(-8, 9):
            W = U.rotate(m, a) & U.rotate(n, a)
            if not W:
                continue
            assert gamma_word(a, m, n).evaluate(a) == gamma(a, W)


def test_genword_algebra():
    w = GenWord("PPspp")
    assert str(w.inverse()) == "PPspp"
    assert str(GenWord("PpsPp").reduced()) == "s"
    assert (w * w.inverse()).evaluate(a).is_identity()
    assert GenWord("P").evaluate(a) == phi_power(a, 1)
    assert GenWord("p").evaluate(a) == phi_power(a, -1)
    with pytest.raises(ValueError):
        GenWord("x")


def test_group_axioms(rng):
    for _ in range(60):
        f, g, h = (random_element(rng, length=3) for _ in range(3))
        assert (f * g) * h == f * (g * h)
        assert f * ID == f == ID * f


def test_canonical_form_soundness(rng):
    pts = sample_points(a, 1000)
    for _ in range(10):
        g = random_element(rng)
        h = random_element(rng)
        agree = all(g(x) == h(x) for x in pts)
        if g == h:
            assert agree
        if not agree:
            assert g != h
        # equal elements reached by different words
        assert g * h * h.inverse() == g
        assert all(g(x) == (g * h * h.inverse())(x) for x in pts[:100])


def test_conjugation_covariance(rng):
    for n in range(-10, 11):
        V = random_swap_set(rng)
        assert phi_power(a, n) * swap(a, V) * phi_power(a, -n) == swap(a, V.rotate(n, a))


def test_gamma_order_random(rng):
    U = unit_arc(a)
    for _ in range(40):
        W = U.rotate(rng.randint(-20, 20), a) & random_set(rng)
        g = gamma(a, W)
        assert (g * g * g).is_identity()


def test_parity_of_lamp_orbit_is_certificate(U):
    psi = first_return(a, U)
    O, _, _ = find_lamp_set(a, U, psi, 3)
    assert parity_independent(psi_orbit(psi, O, 3)).independent
