"""Exact arithmetic in a real quadratic field Q(sqrt(d)).

Every number is stored as ``(p + q*sqrt(d)) / r`` with integers ``p, q, r``,
``r > 0`` and ``gcd(p, q, r) == 1``.  Comparisons never touch floating point:
the sign of ``a + b*sqrt(d)`` is decided by comparing ``a**2`` with ``b**2 * d``.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Union

from .errors import BadFieldError, MalformedNumberError, ParseError

__all__ = ["QuadExt", "CirclePoint", "check_field", "parse_quadext", "sign_of"]

Number = Union["QuadExt", int]


@lru_cache(maxsize=None)
def check_field(d: int) -> int:
    """Validate ``d`` as a square-free integer >= 2 and return it."""
    if not isinstance(d, int) or d < 2:
        raise BadFieldError(f"field parameter must be an integer >= 2, got {d!r}")
    if math.isqrt(d) ** 2 == d:
        raise BadFieldError(f"d = {d} is a perfect square")
    f = 2
    while f * f <= d:
        if d % (f * f) == 0:
            raise BadFieldError(f"d = {d} is not square-free (divisible by {f * f})")
        f += 1
    return d


def sign_of(a: int, b: int, d: int) -> int:
    """Sign of ``a + b*sqrt(d)`` for non-square ``d``."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # opposite signs; a*a == b*b*d is impossible for non-square d
    if a * a > b * b * d:
        return 1 if a > 0 else -1
    return 1 if b > 0 else -1


class QuadExt:
    """An element ``(p + q*sqrt(d)) / r`` of Q(sqrt(d)); immutable."""

    __slots__ = ("p", "q", "r", "d", "_hash")

    def __init__(self, p: int, q: int = 0, r: int = 1, d: int = 2):
        if r == 0:
            raise MalformedNumberError("denominator r must be nonzero")
        check_field(d)
        if r < 0:
            p, q, r = -p, -q, -r
        g = math.gcd(math.gcd(p, q), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        self.p = p
        self.q = q
        self.r = r
        self.d = d
        self._hash = None

    @classmethod
    def _raw(cls, p: int, q: int, r: int, d: int) -> "QuadExt":
        # r > 0 is required from callers; the gcd reduction happens here
        g = math.gcd(math.gcd(p, q), r)
        if g > 1:
            p, q, r = p // g, q // g, r // g
        obj = object.__new__(cls)
        obj.p = p
        obj.q = q
        obj.r = r
        obj.d = d
        obj._hash = None
        return obj

    @classmethod
    def integer(cls, n: int, d: int) -> "QuadExt":
        check_field(d)
        return cls._raw(n, 0, 1, d)

    @classmethod
    def rational(cls, num: int, den: int, d: int) -> "QuadExt":
        return cls(num, 0, den, d)

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other: Number) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise BadFieldError(f"mixed fields sqrt({self.d}) and sqrt({other.d})")
            return other
        if isinstance(other, int):
            return QuadExt._raw(other, 0, 1, self.d)
        raise TypeError(f"cannot combine QuadExt with {type(other).__name__}")

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: Number) -> "QuadExt":
        if isinstance(other, int):
            return QuadExt._raw(self.p + other * self.r, self.q, self.r, self.d)
        o = self._coerce(other)
        if self.r == o.r:
            return QuadExt._raw(self.p + o.p, self.q + o.q, self.r, self.d)
        return QuadExt._raw(
            self.p * o.r + o.p * self.r, self.q * o.r + o.q * self.r, self.r * o.r, self.d
        )

    __radd__ = __add__

    def __neg__(self) -> "QuadExt":
        return QuadExt._raw(-self.p, -self.q, self.r, self.d)

    def __sub__(self, other: Number) -> "QuadExt":
        if isinstance(other, int):
            return QuadExt._raw(self.p - other * self.r, self.q, self.r, self.d)
        o = self._coerce(other)
        if self.r == o.r:
            return QuadExt._raw(self.p - o.p, self.q - o.q, self.r, self.d)
        return QuadExt._raw(
            self.p * o.r - o.p * self.r, self.q * o.r - o.q * self.r, self.r * o.r, self.d
        )

    def __rsub__(self, other: Number) -> "QuadExt":
        return (-self) + other

    def __mul__(self, other: Number) -> "QuadExt":
        if isinstance(other, int):
            return QuadExt._raw(self.p * other, self.q * other, self.r, self.d)
        o = self._coerce(other)
        return QuadExt._raw(
            self.p * o.p + self.q * o.q * self.d,
            self.p * o.q + self.q * o.p,
            self.r * o.r,
            self.d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: int) -> "QuadExt":
        if not isinstance(other, int):
            # division by an irrational is not needed anywhere in the workbench
            return NotImplemented
        if other == 0:
            raise ZeroDivisionError("division of QuadExt by zero")
        if other < 0:
            return QuadExt._raw(-self.p, -self.q, -self.r * other, self.d)
        return QuadExt._raw(self.p, self.q, self.r * other, self.d)

    # -- order ------------------------------------------------------------

    def sign(self) -> int:
        return sign_of(self.p, self.q, self.d)

    def compare(self, other: Number) -> int:
        """Return -1, 0 or 1 as ``self`` is less than, equal to or greater than ``other``."""
        if isinstance(other, int):
            return sign_of(self.p - other * self.r, self.q, self.d)
        o = self._coerce(other)
        if self.r == o.r:
            return sign_of(self.p - o.p, self.q - o.q, self.d)
        return sign_of(self.p * o.r - o.p * self.r, self.q * o.r - o.q * self.r, self.d)

    def __lt__(self, other: Number) -> bool:
        return self.compare(other) < 0

    def __le__(self, other: Number) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: Number) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: Number) -> bool:
        return self.compare(other) >= 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadExt):
            return (
                self.p == other.p and self.q == other.q and self.r == other.r and self.d == other.d
            )
        if isinstance(other, int):
            return self.q == 0 and self.r == 1 and self.p == other
        return NotImplemented

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            if self.q == 0 and self.r == 1:
                h = hash(self.p)
            else:
                h = hash((self.p, self.q, self.r, self.d))
            self._hash = h
        return h

    # -- integer part -----------------------------------------------------

    def floor(self) -> int:
        """Greatest integer ``n`` with ``n <= self``."""
        if self.q == 0:
            return self.p // self.r
        s = math.isqrt(self.q * self.q * self.d)
        approx = self.p + s if self.q > 0 else self.p - s
        n = approx // self.r
        # |true numerator - approx| < 1, so n is off by at most one step
        while self.compare(n) < 0:
            n -= 1
        while self.compare(n + 1) >= 0:
            n += 1
        return n

    def mod1(self) -> "QuadExt":
        """The representative of ``self`` in [0, 1)."""
        if self.q == 0 and 0 <= self.p < self.r:
            return self
        return self - self.floor()

    def is_rational(self) -> bool:
        return self.q == 0

    def is_integer(self) -> bool:
        return self.q == 0 and self.r == 1

    def __float__(self) -> float:
        return (self.p + self.q * math.sqrt(self.d)) / self.r

    def key(self) -> tuple[int, int, int]:
        return (self.p, self.q, self.r)

    # -- text -------------------------------------------------------------

    def __str__(self) -> str:
        sign = "+" if self.q >= 0 else "-"
        return f"({self.p}{sign}{abs(self.q)}*sqrt({self.d}))/{self.r}"

    def __repr__(self) -> str:
        return f"QuadExt({self.p}, {self.q}, {self.r}, {self.d})"

    @classmethod
    def parse(cls, text: str) -> "QuadExt":
        return parse_quadext(text)


# Points of the circle R/Z are QuadExt values kept in [0, 1).
CirclePoint = QuadExt


def circle_point(x: QuadExt) -> QuadExt:
    return x.mod1()


class _Cursor:
    """Walks a string while skipping whitespace, keeping original positions."""

    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def skip(self) -> None:
        while self.i < len(self.text) and self.text[self.i].isspace():
            self.i += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.i] if self.i < len(self.text) else ""

    def expect(self, literal: str) -> None:
        for ch in literal:
            self.skip()
            if self.i >= len(self.text) or self.text[self.i] != ch:
                found = self.text[self.i] if self.i < len(self.text) else "end of input"
                raise ParseError(f"expected {ch!r}, found {found!r}", self.i)
            self.i += 1

    def integer(self) -> int:
        self.skip()
        start = self.i
        neg = False
        if self.i < len(self.text) and self.text[self.i] in "+-":
            neg = self.text[self.i] == "-"
            self.i += 1
            self.skip()
        digits_at = self.i
        while self.i < len(self.text) and self.text[self.i].isdigit():
            self.i += 1
        if self.i == digits_at:
            raise ParseError("expected an integer literal", start)
        value = int(self.text[digits_at : self.i])
        return -value if neg else value


def parse_quadext(text: str) -> QuadExt:
    """Parse ``(p + q*sqrt(d))/r``; whitespace is ignored.

    >>> str(parse_quadext("(0 + 1*sqrt(2)) / 10"))
    '(0+1*sqrt(2))/10'
    """
    cur = _Cursor(text)
    cur.expect("(")
    p = cur.integer()
    op_at = (cur.skip(), cur.i)[1]
    op = cur.peek()
    if op not in ("+", "-"):
        raise ParseError("expected '+' or '-'", op_at)
    cur.i += 1
    q = cur.integer()
    if op == "-":
        q = -q
    cur.expect("*sqrt(")
    d_at = (cur.skip(), cur.i)[1]
    d = cur.integer()
    cur.expect("))/")
    r_at = (cur.skip(), cur.i)[1]
    r = cur.integer()
    cur.skip()
    if cur.i != len(text):
        raise ParseError("trailing characters", cur.i)
    if r == 0:
        raise ParseError("zero denominator", r_at)
    try:
        check_field(d)
    except BadFieldError as exc:
        raise ParseError(str(exc), d_at) from None
    return QuadExt(p, q, r, d)
