"""Finite unions of half-open arcs on R/Z.

These model the clopen subsets of the Sturmian system that the workbench
manipulates: Boolean combinations of rotation translates of ``[0, alpha)``.
An arc crossing 0 is stored as two pieces ``[a, 1)`` and ``[0, b)``, so a
canonical set is a sorted tuple of disjoint, non-adjacent, nonempty
``(a, b)`` pairs with ``0 <= a < b <= 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

from .errors import BadFieldError
from .quadext import QuadExt

__all__ = [
    "ClopenSet",
    "ParityVerdict",
    "parity_independent",
    "parity_independent_bruteforce",
    "rotation_offset",
]

Arc = tuple[QuadExt, QuadExt]


@lru_cache(maxsize=4096)
def rotation_offset(alpha: QuadExt, n: int) -> QuadExt:
    """``n * alpha mod 1``."""
    return (alpha * n).mod1()


def _normalize(arcs: Iterable[Arc]) -> tuple[Arc, ...]:
    # input arcs are linear (a < b within [0, 1]) and pairwise disjoint
    ordered = sorted((a for a in arcs if a[0] < a[1]), key=lambda ab: ab[0])
    out: list[Arc] = []
    for a, b in ordered:
        if out and out[-1][1] == a:
            out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return tuple(out)


def _translate_arcs(arcs: Iterable[Arc], t: QuadExt) -> list[Arc]:
    """Shift linear arcs by ``t`` in [0, 1), splitting at 0 where needed."""
    out: list[Arc] = []
    for a, b in arcs:
        s = a + t
        if s >= 1:
            s = s - 1
        e = s + (b - a)
        if e <= 1:
            out.append((s, e))
        else:
            out.append((s, QuadExt.integer(1, t.d)))
            out.append((QuadExt.integer(0, t.d), e - 1))
    return out


@dataclass(frozen=True)
class ClopenSet:
    """Canonical finite union of half-open circle arcs over Q(sqrt(d))."""

    d: int
    arcs: tuple[Arc, ...] = ()

    # -- construction ------------------------------------------------------

    @classmethod
    def empty(cls, d: int) -> "ClopenSet":
        return cls(d, ())

    @classmethod
    def full(cls, d: int) -> "ClopenSet":
        return cls(d, ((QuadExt.integer(0, d), QuadExt.integer(1, d)),))

    @classmethod
    def make(cls, pairs: Sequence[tuple[QuadExt, QuadExt]], d: Optional[int] = None) -> "ClopenSet":
        """Union of arcs ``[a, b)`` given by endpoint pairs.

        Endpoints are reduced mod 1; ``a > b`` after reduction wraps through
        0, ``a == b`` is empty, and ``b - a >= 1`` before reduction is the
        whole circle.
        """
        if d is None:
            if not pairs:
                raise BadFieldError("cannot infer the field of an empty arc list; pass d")
            d = pairs[0][0].d
        zero, one = QuadExt.integer(0, d), QuadExt.integer(1, d)
        linear: list[Arc] = []
        for a, b in pairs:
            if a.d != d or b.d != d:
                raise BadFieldError("arc endpoints from a different field")
            if b - a >= 1:
                return cls.full(d)
            a, b = a.mod1(), b.mod1()
            if a < b:
                linear.append((a, b))
            elif b < a:
                linear.append((a, one))
                if b > 0:
                    linear.append((zero, b))
        return cls(d, ())._union_arcs(linear)

    @classmethod
    def _from_disjoint(cls, d: int, arcs: Iterable[Arc]) -> "ClopenSet":
        return cls(d, _normalize(arcs))

    def _union_arcs(self, linear: list[Arc]) -> "ClopenSet":
        # possibly overlapping linear arcs: sweep and merge
        ordered = sorted(linear, key=lambda ab: ab[0])
        out: list[Arc] = []
        for a, b in ordered:
            if out and a <= out[-1][1]:
                if b > out[-1][1]:
                    out[-1] = (out[-1][0], b)
            else:
                out.append((a, b))
        return ClopenSet(self.d, tuple(out))

    # -- queries -----------------------------------------------------------

    def __bool__(self) -> bool:
        return bool(self.arcs)

    def is_empty(self) -> bool:
        return not self.arcs

    def __contains__(self, x: QuadExt) -> bool:
        x = x.mod1()
        return any(a <= x < b for a, b in self.arcs)

    def measure(self) -> QuadExt:
        total = QuadExt.integer(0, self.d)
        for a, b in self.arcs:
            total = total + (b - a)
        return total

    def endpoints(self) -> list[QuadExt]:
        return [e for arc in self.arcs for e in arc]

    def key(self) -> tuple:
        return tuple((a.key(), b.key()) for a, b in self.arcs)

    def to_json(self) -> list[list[str]]:
        return [[str(a), str(b)] for a, b in self.arcs]

    def __str__(self) -> str:
        if not self.arcs:
            return "{}"
        return " u ".join(f"[{float(a):.6f}, {float(b):.6f})" for a, b in self.arcs)

    # -- Boolean algebra ---------------------------------------------------

    def _combine(self, other: "ClopenSet", keep: Callable[[bool, bool], bool]) -> "ClopenSet":
        if other.d != self.d:
            raise BadFieldError("mixed fields in Boolean operation")
        zero, one = QuadExt.integer(0, self.d), QuadExt.integer(1, self.d)
        cuts = sorted(set(self.endpoints()) | set(other.endpoints()) | {zero, one})
        A, B = self.arcs, other.arcs
        ia = ib = 0
        pieces: list[Arc] = []
        for lo, hi in zip(cuts, cuts[1:]):
            while ia < len(A) and A[ia][1] <= lo:
                ia += 1
            while ib < len(B) and B[ib][1] <= lo:
                ib += 1
            in_a = ia < len(A) and A[ia][0] <= lo
            in_b = ib < len(B) and B[ib][0] <= lo
            if keep(in_a, in_b):
                pieces.append((lo, hi))
        return ClopenSet._from_disjoint(self.d, pieces)

    def union(self, other: "ClopenSet") -> "ClopenSet":
        return self._combine(other, lambda x, y: x or y)

    def intersection(self, other: "ClopenSet") -> "ClopenSet":
        return self._combine(other, lambda x, y: x and y)

    def difference(self, other: "ClopenSet") -> "ClopenSet":
        return self._combine(other, lambda x, y: x and not y)

    def symmetric_difference(self, other: "ClopenSet") -> "ClopenSet":
        return self._combine(other, lambda x, y: x != y)

    def complement(self) -> "ClopenSet":
        return ClopenSet.full(self.d).difference(self)

    __or__ = union
    __and__ = intersection
    __sub__ = difference
    __xor__ = symmetric_difference

    def issubset(self, other: "ClopenSet") -> bool:
        return not (self - other)

    def isdisjoint(self, other: "ClopenSet") -> bool:
        return not (self & other)

    # -- rotation ----------------------------------------------------------

    def translate(self, t: QuadExt) -> "ClopenSet":
        """Shift by ``t`` (any real in the field; reduced mod 1)."""
        t = t.mod1()
        if t == 0 or not self.arcs:
            return self
        return ClopenSet._from_disjoint(self.d, _translate_arcs(self.arcs, t))

    def rotate(self, n: int, alpha: QuadExt) -> "ClopenSet":
        """Image under the n-th power of the rotation ``x -> x + alpha``."""
        if alpha.d != self.d:
            raise BadFieldError("rotation number from a different field")
        return self.translate(rotation_offset(alpha, n))


def arc(a: QuadExt, b: QuadExt) -> ClopenSet:
    """Convenience for a single arc ``[a, b)``."""
    return ClopenSet.make([(a, b)], a.d)


@dataclass(frozen=True)
class ParityVerdict:
    """Outcome of an F_2 independence check on set indicators.

    ``witness`` is ``None`` when the family is independent, otherwise an
    inclusion-minimal set of indices whose symmetric difference is empty.
    """

    independent: bool
    rank: int
    size: int
    witness: Optional[tuple[int, ...]] = None


def _atom_masks(sets: Sequence[ClopenSet]) -> list[int]:
    d = sets[0].d
    zero, one = QuadExt.integer(0, d), QuadExt.integer(1, d)
    cuts = sorted({e for s in sets for e in s.endpoints()} | {zero, one})
    index = {c: i for i, c in enumerate(cuts)}
    masks = []
    for s in sets:
        m = 0
        for a, b in s.arcs:
            # atoms are [cuts[i], cuts[i+1]); arc covers indices index[a] .. index[b]-1
            m |= ((1 << (index[b] - index[a])) - 1) << index[a]
        masks.append(m)
    return masks


def parity_independent(sets: Sequence[ClopenSet]) -> ParityVerdict:
    """Decide whether the indicators of ``sets`` are linearly independent over F_2.

    Works on the common atom partition with incremental Gaussian
    elimination. The first vector that reduces to zero yields the witness;
    because the earlier vectors are independent, that dependency is a
    circuit, hence minimal.
    """
    if not sets:
        raise ValueError("parity_independent needs a nonempty family")
    masks = _atom_masks(sets)
    basis: dict[int, tuple[int, int]] = {}
    witness = None
    for i, v in enumerate(masks):
        combo = 1 << i
        while v:
            pivot = v.bit_length() - 1
            if pivot not in basis:
                basis[pivot] = (v, combo)
                break
            bv, bc = basis[pivot]
            v ^= bv
            combo ^= bc
        if not v and witness is None:
            witness = tuple(j for j in range(len(sets)) if combo >> j & 1)
    return ParityVerdict(witness is None, len(basis), len(sets), witness)


def parity_independent_bruteforce(sets: Sequence[ClopenSet]) -> ParityVerdict:
    """Exhaustive reference: try every nonempty subfamily, smallest first."""
    n = len(sets)
    empty = ClopenSet.empty(sets[0].d)
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            acc = empty
            for i in idx:
                acc = acc ^ sets[i]
            if not acc:
                # rank is not tracked by the brute-force route
                return ParityVerdict(False, -1, n, idx)
    return ParityVerdict(True, n, n, None)
