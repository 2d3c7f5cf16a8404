"""Elements of the topological full group of the alpha-rotation.

A :class:`RotElement` is a partition of the circle into half-open arcs with an
integer cocycle ``c`` on each arc; it sends ``x`` to ``x + c*alpha mod 1``.
The canonical form (sorted pieces, equal-cocycle neighbours merged, split at
0) is unique, so two elements are equal as maps iff their pieces are equal.
Composition is right to left: ``g * h`` applies ``h`` first.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Optional, Sequence

from .circle import ClopenSet, ParityVerdict, parity_independent, rotation_offset
from .errors import InvariantViolation, NonElementError, PreconditionError, ResourceError
from .quadext import QuadExt

__all__ = [
    "RotElement",
    "GenWord",
    "unit_arc",
    "phi_power",
    "swap",
    "gamma",
    "compose",
    "inverse",
    "index",
    "first_return",
    "lamplighter_pair",
    "lamplighter_in_derived",
    "find_lamp_set",
    "gamma_word",
    "sample_points",
    "DEFAULT_RETURN_CAP",
]

DEFAULT_RETURN_CAP = 10**6

Piece = tuple[QuadExt, QuadExt, int]


def _merge(pieces: list[Piece]) -> tuple[Piece, ...]:
    out: list[Piece] = []
    for a, b, c in pieces:
        if out and out[-1][2] == c and out[-1][1] == a:
            out[-1] = (out[-1][0], b, c)
        else:
            out.append((a, b, c))
    return tuple(out)


def _check_tiling(spans: Sequence[tuple[QuadExt, QuadExt]], what: str) -> None:
    pos = 0
    for a, b in spans:
        if a != pos or not a < b:
            raise NonElementError(f"{what} arcs do not tile the circle near {float(a):.6f}")
        pos = b
    if pos != 1:
        raise NonElementError(f"{what} arcs stop at {float(pos):.6f} instead of 1")


@dataclass(frozen=True, eq=True)
class RotElement:
    alpha: QuadExt
    pieces: tuple[Piece, ...]

    @classmethod
    def from_pieces(cls, alpha: QuadExt, pieces: Iterable[Piece]) -> "RotElement":
        """Validate and canonicalize a piecewise description."""
        ordered = sorted((p for p in pieces if p[0] < p[1]), key=lambda p: p[0])
        _check_tiling([(a, b) for a, b, _ in ordered], "domain")
        g = cls(alpha, _merge(ordered))
        _check_tiling(sorted(((s, e) for s, e, _, _ in g._images()), key=lambda se: se[0]), "image")
        return g

    @classmethod
    def from_assignments(cls, alpha: QuadExt, parts: Sequence[tuple[ClopenSet, int]]) -> "RotElement":
        """Build from disjoint clopen sets with cocycle values; 0 elsewhere."""
        d = alpha.d
        covered = ClopenSet.empty(d)
        pieces: list[Piece] = []
        for s, c in parts:
            if not covered.isdisjoint(s):
                raise PreconditionError("cocycle assignments overlap")
            covered = covered | s
            pieces.extend((a, b, c) for a, b in s.arcs)
        pieces.extend((a, b, 0) for a, b in covered.complement().arcs)
        return cls.from_pieces(alpha, pieces)

    def _images(self) -> list[tuple[QuadExt, QuadExt, QuadExt, int]]:
        """Image arcs as ``(start, end, preimage_start, c)``, split at 0."""
        out = []
        one = QuadExt.integer(1, self.alpha.d)
        zero = QuadExt.integer(0, self.alpha.d)
        for a, b, c in self.pieces:
            t = rotation_offset(self.alpha, c)
            s = a + t
            if s >= 1:
                s = s - 1
            e = s + (b - a)
            if e <= 1:
                out.append((s, e, a, c))
            else:
                out.append((s, one, a, c))
                out.append((zero, e - 1, a + (one - s), c))
        return out

    # -- group law ----------------------------------------------------------

    def __mul__(self, other: "RotElement") -> "RotElement":
        return compose(self, other)

    def inverse(self) -> "RotElement":
        return inverse(self)

    def __pow__(self, k: int) -> "RotElement":
        if k < 0:
            return inverse(self) ** (-k)
        result = phi_power(self.alpha, 0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return len(self.pieces) == 1 and self.pieces[0][2] == 0

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x: QuadExt) -> QuadExt:
        x = x.mod1()
        starts = [a for a, _, _ in self.pieces]
        a, b, c = self.pieces[bisect_right(starts, x) - 1]
        return (x + self.alpha * c).mod1()

    def cocycle_at(self, x: QuadExt) -> int:
        starts = [a for a, _, _ in self.pieces]
        return self.pieces[bisect_right(starts, x.mod1()) - 1][2]

    def image(self, A: ClopenSet) -> ClopenSet:
        """``self(A)`` as a clopen set."""
        parts: list[tuple[QuadExt, QuadExt]] = []
        arcs = A.arcs
        i = 0
        for a, b, c in self.pieces:
            t = rotation_offset(self.alpha, c)
            while i < len(arcs) and arcs[i][1] <= a:
                i += 1
            j = i
            while j < len(arcs) and arcs[j][0] < b:
                lo, hi = max(arcs[j][0], a), min(arcs[j][1], b)
                if lo < hi:
                    parts.append((lo, hi, t))
                j += 1
        pieces = []
        for lo, hi, t in parts:
            pieces.extend(ClopenSet._from_disjoint(A.d, [(lo, hi)]).translate(t).arcs)
        return ClopenSet._from_disjoint(A.d, pieces)

    def support(self) -> ClopenSet:
        """Points moved by ``self``; ``c != 0`` moves every point since alpha is irrational."""
        return ClopenSet._from_disjoint(self.alpha.d, [(a, b) for a, b, c in self.pieces if c != 0])

    def cocycle_values(self, A: Optional[ClopenSet] = None) -> set[int]:
        if A is None:
            return {c for _, _, c in self.pieces}
        return {c for a, b, c in self.pieces if A & ClopenSet._from_disjoint(A.d, [(a, b)])}

    # -- serialization ------------------------------------------------------

    def key(self) -> tuple:
        return tuple((a.key(), b.key(), c) for a, b, c in self.pieces)

    def to_json(self) -> list:
        return [[[str(a), str(b)], c] for a, b, c in self.pieces]

    def __repr__(self) -> str:
        body = ", ".join(f"[{float(a):.4f},{float(b):.4f})->{c:+d}" for a, b, c in self.pieces)
        return f"RotElement({body})"


def unit_arc(alpha: QuadExt) -> ClopenSet:
    """The set ``U = [0, alpha)``."""
    return ClopenSet.make([(QuadExt.integer(0, alpha.d), alpha)], alpha.d)


@lru_cache(maxsize=1024)
def phi_power(alpha: QuadExt, n: int) -> RotElement:
    zero, one = QuadExt.integer(0, alpha.d), QuadExt.integer(1, alpha.d)
    return RotElement(alpha, ((zero, one, n),))


def compose(g: RotElement, h: RotElement) -> RotElement:
    """``g o h``; cocycle ``c(x) = c_g(h(x)) + c_h(x)``."""
    if g.alpha != h.alpha:
        raise PreconditionError("composing elements of different rotation systems")
    if h.is_identity():
        return g
    if g.is_identity():
        return h
    imgs = sorted(h._images(), key=lambda t: t[0])
    gp = g.pieces
    out: list[Piece] = []
    i = j = 0
    while i < len(imgs) and j < len(gp):
        s, e, pre, ch = imgs[i]
        a, b, cg = gp[j]
        lo = s if s > a else a
        hi = e if e < b else b
        if lo < hi:
            start = pre + (lo - s)
            out.append((start, start + (hi - lo), cg + ch))
        if e <= b:
            i += 1
        if b <= e:
            j += 1
    out.sort(key=lambda p: p[0])
    pieces = _merge(out)
    try:
        _check_tiling([(a, b) for a, b, _ in pieces], "composed domain")
    except NonElementError as exc:
        raise InvariantViolation(str(exc)) from None
    return RotElement(g.alpha, pieces)


def inverse(g: RotElement) -> RotElement:
    imgs = sorted(((s, e, -c) for s, e, _, c in g._images()), key=lambda p: p[0])
    return RotElement(g.alpha, _merge(imgs))


def index(g: RotElement) -> int:
    """Integral of the cocycle against Lebesgue measure; always an integer."""
    total = QuadExt.integer(0, g.alpha.d)
    for a, b, c in g.pieces:
        total = total + (b - a) * c
    if not total.is_integer():
        raise InvariantViolation(f"index {total} is not an integer; not a full-group element")
    return total.p


def swap(alpha: QuadExt, V: ClopenSet) -> RotElement:
    """Exchange ``V`` and ``V + alpha``: cocycle +1 on V, -1 on its translate."""
    V1 = V.rotate(1, alpha)
    overlap = V & V1
    if overlap:
        raise PreconditionError(f"V and its rotation overlap on {overlap}")
    return RotElement.from_assignments(alpha, [(V, 1), (V1, -1)])


def gamma(alpha: QuadExt, W: ClopenSet) -> RotElement:
    """Order-three element cycling ``W - alpha -> W -> W + alpha -> W - alpha``."""
    Wm, Wp = W.rotate(-1, alpha), W.rotate(1, alpha)
    for name, X, Y in (("phi^-1(W) & W", Wm, W), ("W & phi(W)", W, Wp), ("phi^-1(W) & phi(W)", Wm, Wp)):
        overlap = X & Y
        if overlap:
            raise PreconditionError(f"W is not in the class: {name} = {overlap}")
    return RotElement.from_assignments(alpha, [(Wm | W, 1), (Wp, -2)])


def first_return(alpha: QuadExt, U: ClopenSet, cap: int = DEFAULT_RETURN_CAP) -> RotElement:
    """First return map on ``U``, extended by the identity off ``U``.

    Partition refinement: the unreturned part ``R`` of ``U`` shrinks by
    ``R & phi^-n(U)`` at step ``n``, which receives return time ``n``.
    """
    if not U:
        raise PreconditionError("first return map needs a nonempty set")
    remaining = U
    parts: list[tuple[ClopenSet, int]] = []
    n = 0
    while remaining:
        n += 1
        if n > cap:
            raise ResourceError(f"first return not complete after {cap} steps")
        hit = remaining & U.rotate(-n, alpha)
        if hit:
            parts.append((hit, n))
            remaining = remaining - hit
    return RotElement.from_assignments(alpha, parts)


def _check_four_disjoint(alpha: QuadExt, U: ClopenSet) -> None:
    translates = [U.rotate(i, alpha) for i in range(4)]
    for i in range(4):
        for j in range(i + 1, 4):
            if not translates[i].isdisjoint(translates[j]):
                raise PreconditionError(f"phi^{i}(U) and phi^{j}(U) intersect")


def lamplighter_pair(
    alpha: QuadExt, U: ClopenSet, O: ClopenSet, psi: Optional[RotElement] = None
) -> tuple[RotElement, RotElement]:
    """``r = psi phi psi phi^-1`` and ``s = swap(O)`` for ``O`` inside ``U``."""
    _check_four_disjoint(alpha, U)
    if not O.issubset(U):
        raise PreconditionError("O is not contained in U")
    if psi is None:
        psi = first_return(alpha, U)
    phi = phi_power(alpha, 1)
    r = psi * phi * psi * phi.inverse()
    return r, swap(alpha, O)


def lamplighter_in_derived(
    alpha: QuadExt, r: RotElement, s: RotElement, U: ClopenSet
) -> tuple[RotElement, RotElement]:
    """Commutators ``g phi^2 g^-1 phi^-2`` for ``g = r, s``."""
    _check_four_disjoint(alpha, U)
    allowed = U | U.rotate(1, alpha)
    for name, g in (("r", r), ("s", s)):
        if not g.support().issubset(allowed):
            raise PreconditionError(f"support of {name} leaves U u phi(U)")
    phi2, phi_2 = phi_power(alpha, 2), phi_power(alpha, -2)
    return r * phi2 * r.inverse() * phi_2, s * phi2 * s.inverse() * phi_2


def psi_orbit(psi: RotElement, O: ClopenSet, N: int) -> list[ClopenSet]:
    """``[psi^j(O) for j in -N..N]``."""
    fwd, bwd = [O], [O]
    psi_inv = psi.inverse()
    for _ in range(N):
        fwd.append(psi.image(fwd[-1]))
        bwd.append(psi_inv.image(bwd[-1]))
    return bwd[:0:-1] + fwd


def find_lamp_set(
    alpha: QuadExt, U: ClopenSet, psi: RotElement, N: int, budget: int = 20
) -> Optional[tuple[ClopenSet, int, ParityVerdict]]:
    """Search ``O = [0, k*alpha mod 1) & U`` for ``k = 1..budget``.

    Returns the first ``O`` whose psi-translates ``|j| <= N`` have F_2
    independent indicators, with ``k`` and the certificate, or ``None``.
    """
    zero = QuadExt.integer(0, alpha.d)
    for k in range(1, budget + 1):
        O = ClopenSet.make([(zero, rotation_offset(alpha, k))], alpha.d) & U
        if not O:
            continue
        verdict = parity_independent(psi_orbit(psi, O, N))
        if verdict.independent:
            return O, k, verdict
    return None


_LETTERS = {"P": 1, "p": -1}


@dataclass(frozen=True)
class GenWord:
    """Word over ``P`` (phi), ``p`` (phi^-1) and ``s`` (sigma_U), read right to left."""

    letters: str

    def __post_init__(self) -> None:
        bad = set(self.letters) - {"P", "p", "s"}
        if bad:
            raise ValueError(f"letters outside the alphabet: {sorted(bad)}")

    def __mul__(self, other: "GenWord") -> "GenWord":
        return GenWord(self.letters + other.letters).reduced()

    def inverse(self) -> "GenWord":
        flip = {"P": "p", "p": "P", "s": "s"}
        return GenWord("".join(flip[ch] for ch in reversed(self.letters)))

    def reduced(self) -> "GenWord":
        """Free reduction of ``Pp``/``pP`` (``s`` is left untouched)."""
        stack: list[str] = []
        for ch in self.letters:
            if stack and {stack[-1], ch} == {"P", "p"}:
                stack.pop()
            else:
                stack.append(ch)
        return GenWord("".join(stack))

    def evaluate(self, alpha: QuadExt) -> RotElement:
        sigma = swap(alpha, unit_arc(alpha))
        result = phi_power(alpha, 0)
        run = 0
        # consecutive phi letters collapse into one power
        for ch in reversed(self.letters):
            if ch == "s":
                if run:
                    result = phi_power(alpha, run) * result
                    run = 0
                result = sigma * result
            else:
                run += _LETTERS[ch]
        if run:
            result = phi_power(alpha, run) * result
        return result

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters


def conjugated_sigma(j: int) -> GenWord:
    """``phi^j sigma_U phi^-j``."""
    a, b = ("P", "p") if j >= 0 else ("p", "P")
    return GenWord(a * abs(j) + "s" + b * abs(j))


def translate_gamma_word(n: int) -> GenWord:
    """Word for ``gamma`` of ``phi^n(U)`` as ``s_n s_{n-1} s_n s_{n-1}``."""
    sn, sm = conjugated_sigma(n), conjugated_sigma(n - 1)
    return reduce(GenWord.__mul__, [sn, sm, sn, sm])


def _require_small_alpha(alpha: QuadExt) -> None:
    if not (0 < alpha and alpha * 6 < 1):
        raise PreconditionError(f"alpha = {alpha} is not in (0, 1/6)")


def gamma_word(alpha: QuadExt, m: int, n: int) -> GenWord:
    """A word in phi, sigma_U evaluating to ``gamma(phi^m(U) & phi^n(U))``.

    For ``m == n`` this is the four-swap product. Otherwise the intersection
    is an arc ``[a*alpha, (b+1)*alpha)`` with ``{a, b} = {m, n}`` and the word is
    the commutator of the gamma-words for ``phi^(a+1)(U)`` and ``phi^(b-1)(U)``.
    """
    _require_small_alpha(alpha)
    if m == n:
        return translate_gamma_word(n)
    U = unit_arc(alpha)
    Um, Un = U.rotate(m, alpha), U.rotate(n, alpha)
    if not (Um & Un):
        raise PreconditionError(f"phi^{m}(U) and phi^{n}(U) do not intersect")
    # the intersection starts at a*alpha: the translate whose left end lies inside the other
    a, b = (m, n) if rotation_offset(alpha, m - n) < alpha else (n, m)
    five = [
        U.rotate(b - 2, alpha),
        U.rotate(b - 1, alpha),
        Um | Un,
        U.rotate(a + 1, alpha),
        U.rotate(a + 2, alpha),
    ]
    for i in range(5):
        for j in range(i + 1, 5):
            overlap = five[i] & five[j]
            if overlap:
                raise PreconditionError(f"sets {i} and {j} of the commutator frame overlap on {overlap}")
    x, y = translate_gamma_word(a + 1), translate_gamma_word(b - 1)
    return reduce(GenWord.__mul__, [x, y.inverse(), x.inverse(), y])


def sample_points(alpha: QuadExt, count: int) -> list[QuadExt]:
    """Deterministic sample ``{k*alpha + j/1000 mod 1}``."""
    d = alpha.d
    pts = []
    for i in range(count):
        k, j = i // 7 - 50, (i * 137) % 1000
        pts.append((alpha * k + QuadExt.rational(j, 1000, d)).mod1())
    return pts
