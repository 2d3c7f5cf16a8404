import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fullgroup.errors import BadFieldError, MalformedNumberError, ParseError
from fullgroup.quadext import QuadExt, check_field, parse_quadext

from conftest import ALPHA, as_decimal

ints = st.integers(min_value=-10**6, max_value=10**6)
dens = st.integers(min_value=1, max_value=10**4)


@st.composite
def quads(draw, d=2):
    return QuadExt(draw(ints), draw(ints), draw(dens), d)


def test_canonicalize_examples():
    assert QuadExt(2, 2, 4, 2).key() == (1, 1, 2)
    assert QuadExt(0, 0, 5, 2).key() == (0, 0, 1)
    assert QuadExt(-3, 0, -6, 2).key() == (1, 0, 2)


def test_canonicalize_errors():
    with pytest.raises(MalformedNumberError):
        QuadExt(1, 1, 0, 2)
    for d in (4, 9, 12, 18, 1, 0, -3):
        with pytest.raises(BadFieldError):
            QuadExt(1, 1, 1, d)
    assert check_field(30) == 30


def test_compare_examples():
    x = QuadExt(1, 1, 2, 2)
    assert x.compare(QuadExt(6, 0, 5, 2)) == 1
    assert QuadExt(0, 1, 10, 2).compare(QuadExt(0, 1, 10, 2)) == 0
    assert QuadExt(0, 0, 1, 2).compare(QuadExt(0, 1, 10, 2)) == -1
    with pytest.raises(BadFieldError):
        QuadExt(0, 1, 1, 2).compare(QuadExt(0, 1, 1, 3))


def test_floor_examples():
    assert QuadExt(0, 5, 1, 2).floor() == 7
    assert QuadExt(0, -1, 10, 2).floor() == -1
    assert QuadExt(3, 0, 1, 2).floor() == 3


def test_mod1_examples():
    assert QuadExt(0, 1, 1, 2).mod1() == QuadExt(-1, 1, 1, 2)
    assert (ALPHA * 7).mod1() == QuadExt(0, 7, 10, 2)
    assert QuadExt(1, 0, 1, 2).mod1() == 0


@settings(max_examples=300)
@given(quads(), quads())
def test_compare_matches_high_precision(x, y):
    dx, dy = as_decimal(x), as_decimal(y)
    want = (dx > dy) - (dx < dy)
    assert x.compare(y) == want


@settings(max_examples=300)
@given(quads())
def test_floor_matches_high_precision(x):
    n = x.floor()
    assert n <= as_decimal(x) < n + 1
    assert 0 <= x.mod1() < 1


@settings(max_examples=200)
@given(quads(), quads(), quads())
def test_total_order(x, y, z):
    assert sum([x < y, x == y, x > y]) == 1
    if x <= y and y <= z:
        assert x <= z


@settings(max_examples=200)
@given(quads(), quads(), st.integers(-50, 50))
def test_arithmetic_closure(x, y, n):
    assert (x + y) - y == x
    assert (x + n).mod1() == x.mod1()
    assert x * abs(n) == sum([x] * abs(n), QuadExt.integer(0, 2))


@settings(max_examples=200)
@given(quads())
def test_canonicalize_idempotent(x):
    again = QuadExt(x.p, x.q, x.r, x.d)
    assert again.key() == x.key()
    assert math.gcd(math.gcd(x.p, x.q), x.r) == 1 and x.r > 0


def test_rotation_orbit_injective():
    seen = {}
    for k in range(-100, 101):
        pt = (ALPHA * k).mod1()
        assert pt not in seen, (k, seen.get(pt))
        seen[pt] = k


@pytest.mark.parametrize(
    "text, key",
    [
        ("(0+1*sqrt(2))/10", (0, 1, 10)),
        ("  ( 3 - 2 * sqrt( 2 ) ) / -4 ", (-3, 2, 4)),
        ("(-6+-4*sqrt(2))/2", (-3, -2, 1)),
    ],
)
def test_parse(text, key):
    assert parse_quadext(text).key() == key


@pytest.mark.parametrize(
    "text, pos",
    [
        ("0+1*sqrt(2))/10", 0),
        ("(0+1*sqr(2))/10", 8),
        ("(0+1*sqrt(4))/10", 10),
        ("(0+1*sqrt(2))/0", 14),
        ("(0+1*sqrt(2))/10x", 16),
        ("(0 * 1*sqrt(2))/10", 3),
    ],
)
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_quadext(text)
    assert info.value.position == pos


def test_str_roundtrip():
    rng = random.Random(3)
    for _ in range(100):
        x = QuadExt(rng.randint(-99, 99), rng.randint(-99, 99), rng.randint(1, 99), 5)
        assert parse_quadext(str(x)) == x
