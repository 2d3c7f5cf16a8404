"""Level-k subgroups of the topological full group of an odometer.

An element of level ``k`` is its cocycle vector ``c`` over ``Z_m`` with
``m = m_k``: on the cell where the k-th coordinate equals ``l`` it acts as
``phi^{c[l]}``.  Levels are 1-based, matching the tower ``m_1 | m_2 | ...``.

The split view writes an element as ``kernel(n) o section(tau)`` where
``section(tau)`` has cocycle ``tau(l) - l`` (representatives in
``0..m-1``) and ``kernel(n)`` has cocycle ``m * n[l]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import LevelError, NonElementError

Perm = tuple[int, ...]


@dataclass(frozen=True)
class OdoType:
    levels: tuple[int, ...]

    def __post_init__(self) -> None:
        levels = tuple(self.levels)
        object.__setattr__(self, "levels", levels)
        if not levels:
            raise LevelError("tower needs at least one level")
        if any(m < 1 for m in levels):
            raise LevelError("tower levels must be positive")
        for a, b in zip(levels, levels[1:]):
            if b <= a or b % a:
                raise LevelError(f"{a} -> {b} is not a strictly increasing divisibility step")

    @classmethod
    def parse(cls, text: str) -> "OdoType":
        try:
            return cls(tuple(int(tok) for tok in text.split(",") if tok.strip()))
        except ValueError as exc:
            raise LevelError(f"bad tower {text!r}: {exc}") from None

    @classmethod
    def dyadic(cls, depth: int = 8) -> "OdoType":
        return cls(tuple(2**n for n in range(1, depth + 1)))

    @property
    def depth(self) -> int:
        return len(self.levels)

    def m(self, k: int) -> int:
        if not 1 <= k <= len(self.levels):
            raise LevelError(f"level {k} outside 1..{len(self.levels)}")
        return self.levels[k - 1]

    def __str__(self) -> str:
        return ",".join(map(str, self.levels))


@dataclass(frozen=True)
class OdoElement:
    tower: OdoType
    k: int
    c: tuple[int, ...]

    @property
    def m(self) -> int:
        return self.tower.m(self.k)

    def perm(self) -> Perm:
        """Induced permutation ``l -> (l + c[l]) mod m`` of the level-k cells."""
        m = self.m
        return tuple((l + cl) % m for l, cl in enumerate(self.c))

    def __mul__(self, other: "OdoElement") -> "OdoElement":
        return compose(self, other)

    def inverse(self) -> "OdoElement":
        m = self.m
        out = [0] * m
        for l, cl in enumerate(self.c):
            out[(l + cl) % m] = -cl
        return OdoElement(self.tower, self.k, tuple(out))

    def key(self) -> tuple:
        return (self.k, self.c)

    def to_json(self) -> dict:
        return {"level": self.k, "cocycle": list(self.c)}


def make(tower: OdoType, k: int, c: Sequence[int]) -> OdoElement:
    m = tower.m(k)
    c = tuple(int(v) for v in c)
    if len(c) != m:
        raise LevelError(f"cocycle has length {len(c)}, level {k} needs {m}")
    seen: dict[int, int] = {}
    for l, cl in enumerate(c):
        t = (l + cl) % m
        if t in seen:
            raise NonElementError(f"cells {seen[t]} and {l} both map to cell {t}")
        seen[t] = l
    return OdoElement(tower, k, c)


def identity(tower: OdoType, k: int) -> OdoElement:
    return OdoElement(tower, k, (0,) * tower.m(k))


def compose(g: OdoElement, h: OdoElement) -> OdoElement:
    """``g o h``: ``c[l] = c_g[(l + c_h[l]) mod m] + c_h[l]``."""
    if g.k != h.k or g.tower != h.tower:
        raise LevelError(f"level mismatch: {g.k} vs {h.k}; lift first")
    m = g.m
    cg = g.c
    return OdoElement(g.tower, g.k, tuple(cg[(l + ch) % m] + ch for l, ch in enumerate(h.c)))


def lift(g: OdoElement) -> OdoElement:
    """Same homeomorphism viewed at level ``k + 1``."""
    if g.k >= g.tower.depth:
        raise LevelError(f"level {g.k} is the top of the tower")
    m = g.m
    m_next = g.tower.m(g.k + 1)
    return OdoElement(g.tower, g.k + 1, tuple(g.c[l % m] for l in range(m_next)))


def lift_to(g: OdoElement, j: int) -> OdoElement:
    while g.k < j:
        g = lift(g)
    return g


def residue_action(g: OdoElement, j: int) -> Perm:
    """Action on residues ``x`` in ``Z_{m_j}`` (``j >= k``): ``x -> x + c[x mod m_k]``."""
    mj = g.tower.m(j)
    m = g.m
    if mj % m:
        raise LevelError("residue level must refine the element's level")
    return tuple((x + g.c[x % m]) % mj for x in range(mj))


def compose_perms(p: Perm, q: Perm) -> Perm:
    """``p o q``."""
    return tuple(p[i] for i in q)


def invert_perm(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def section(tower: OdoType, k: int, tau: Perm) -> OdoElement:
    """Cocycle ``tau(l) - l``; a homomorphic right inverse of the cell permutation."""
    return make(tower, k, [t - l for l, t in enumerate(tau)])


def kernel(tower: OdoType, k: int, n: Sequence[int]) -> OdoElement:
    m = tower.m(k)
    return make(tower, k, [m * v for v in n])


def split(g: OdoElement) -> tuple[tuple[int, ...], Perm]:
    """Return ``(n, tau)`` with ``g = kernel(n) o section(tau)``.

    ``c[l] = m * n[tau(l)] + (tau(l) - l)``.
    """
    m = g.m
    tau = g.perm()
    n = [0] * m
    for l, cl in enumerate(g.c):
        t = tau[l]
        rem = cl - (t - l)
        if rem % m:
            raise NonElementError("cocycle inconsistent with its permutation")
        n[t] = rem // m
    return tuple(n), tau


def unsplit(tower: OdoType, k: int, n: Sequence[int], tau: Perm) -> OdoElement:
    m = tower.m(k)
    return make(tower, k, [m * n[t] + (t - l) for l, t in enumerate(tau)])


def act(tau: Perm, n: Sequence[int]) -> tuple[int, ...]:
    """Coordinate permutation ``(tau . n)[tau(i)] = n[i]``."""
    out = [0] * len(n)
    for i, v in enumerate(n):
        out[tau[i]] = v
    return tuple(out)


def pair_product(
    x: tuple[Sequence[int], Perm], y: tuple[Sequence[int], Perm]
) -> tuple[tuple[int, ...], Perm]:
    """Product in ``Z^m x| S_m``: ``(n1 + tau1.n2, tau1 tau2)``."""
    (n1, t1), (n2, t2) = x, y
    moved = act(t1, n2)
    return tuple(a + b for a, b in zip(n1, moved)), compose_perms(t1, t2)


def standard_generators(tower: OdoType, k: int) -> list[OdoElement]:
    """``phi`` at level k and the section of the transposition (0 1).

    The m-cycle and the transposition generate S_m, and conjugating the
    transposition section by powers of ``phi`` reaches the kernel, so these
    two generate the whole level-k subgroup.
    """
    m = tower.m(k)
    gens = [make(tower, k, [1] * m)]
    if m >= 2:
        tau = list(range(m))
        tau[0], tau[1] = 1, 0
        gens.append(section(tower, k, tuple(tau)))
    return gens
