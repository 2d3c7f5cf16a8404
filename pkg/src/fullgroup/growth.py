"""Cayley-ball enumeration and the lamplighter group used as an oracle.

``ball_sizes`` works for any element type with ``__mul__``, ``inverse()`` and a
canonical ``key()``.  Deduplication goes through a blake2b digest of the
canonical key; a digest hit is confirmed against the stored key before two
elements are merged.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Optional, Sequence

from .errors import ResourceError

DEFAULT_BALL_CAP = 5_000_000


@dataclass(frozen=True)
class LampElement:
    """``(bits, shift)`` in ``(+)_Z Z_2 x| Z``; ``bits`` is sorted."""

    bits: tuple[int, ...] = ()
    shift: int = 0

    def __mul__(self, other: "LampElement") -> "LampElement":
        return lamp_compose(self, other)

    def inverse(self) -> "LampElement":
        return LampElement(tuple(b - self.shift for b in self.bits), -self.shift)

    def key(self) -> tuple:
        return (self.bits, self.shift)


def lamp_compose(g: LampElement, h: LampElement) -> LampElement:
    """``(b1, t1)(b2, t2) = (b1 ^ (b2 + t1), t1 + t2)``."""
    bits = set(g.bits)
    bits.symmetric_difference_update(b + g.shift for b in h.bits)
    return LampElement(tuple(sorted(bits)), g.shift + h.shift)


LAMP_T = LampElement((), 1)
LAMP_A = LampElement((0,), 0)


def lamp_generators() -> list[LampElement]:
    return [LAMP_T, LAMP_A]


@dataclass
class BallTable:
    sizes: list[int] = field(default_factory=list)

    @property
    def radius(self) -> int:
        return len(self.sizes) - 1

    def to_csv(self) -> str:
        lines = ["radius,ball_size"]
        lines.extend(f"{n},{b}" for n, b in enumerate(self.sizes))
        return "\n".join(lines) + "\n"


def _digest(key: Hashable) -> bytes:
    return hashlib.blake2b(repr(key).encode(), digest_size=16).digest()


def symmetrize(generators: Sequence[Any], key: Callable[[Any], Hashable]) -> list[Any]:
    """Generators plus inverses, duplicates (by key) removed, order kept."""
    out, seen = [], set()
    for g in generators:
        for x in (g, g.inverse()):
            k = key(x)
            if k not in seen:
                seen.add(k)
                out.append(x)
    return out


def ball_sizes(
    generators: Sequence[Any],
    radius: int,
    *,
    identity: Any,
    key: Optional[Callable[[Any], Hashable]] = None,
    cap: int = DEFAULT_BALL_CAP,
    workers: int = 1,
) -> BallTable:
    """Cumulative ball sizes ``b(0..radius)`` by level-synchronous BFS.

    Each layer is expanded (optionally in parallel chunks), then merged into
    the seen-set in frontier order, so the table does not depend on
    ``workers``.  Exceeding ``cap`` raises :class:`ResourceError` carrying
    the partial table.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if key is None:
        key = lambda g: g.key()  # noqa: E731
    gens = symmetrize(generators, key)

    seen: dict[bytes, list[Hashable]] = {}

    def insert(k: Hashable) -> bool:
        dg = _digest(k)
        bucket = seen.get(dg)
        if bucket is None:
            seen[dg] = [k]
            return True
        if k in bucket:
            return False
        bucket.append(k)
        return True

    insert(key(identity))
    table = BallTable([1])
    frontier = [identity]
    total = 1

    def expand(chunk: Sequence[Any]) -> list[tuple[Any, Hashable]]:
        return [(g * s, key(g * s)) for g in chunk for s in gens]

    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for _ in range(radius):
            if pool is None:
                products = [expand(frontier)]
            else:
                size = max(1, math.ceil(len(frontier) / workers))
                chunks = [frontier[i : i + size] for i in range(0, len(frontier), size)]
                products = list(pool.map(expand, chunks))
            nxt = []
            for batch in products:
                for elem, k in batch:
                    if insert(k):
                        nxt.append(elem)
                        total += 1
                        if total > cap:
                            raise ResourceError(
                                f"ball enumeration exceeded {cap} elements", partial=table
                            )
            table.sizes.append(total)
            frontier = nxt
    finally:
        if pool is not None:
            pool.shutdown()
    return table


@dataclass
class GrowthReport:
    sizes: list[int]
    ratios: list[float]
    doubling: list[float]
    degree: float
    degree_residual: float
    limit_ratio: float
    exponential_test: bool
    polynomial_test: bool
    hint: str
    delta: float

    def to_json(self) -> dict:
        return {
            "sizes": self.sizes,
            "ratios": [round(x, 12) for x in self.ratios],
            "doubling": [round(x, 12) for x in self.doubling],
            "fitted_degree": round(self.degree, 12),
            "fit_residual": round(self.degree_residual, 12),
            "limit_ratio": round(self.limit_ratio, 12),
            "exponential_test": self.exponential_test,
            "polynomial_test": self.polynomial_test,
            "hint": self.hint,
            "delta": self.delta,
            "note": "finite-range evidence only; not a proof of growth type",
        }


def _fit_degree(sizes: Sequence[int]) -> tuple[float, float]:
    """Least-squares slope of log b(n) against log n over the top half of 1..R."""
    R = len(sizes) - 1
    ns = [n for n in range(max(1, R // 2), R + 1)]
    if len(ns) < 2:
        return 0.0, 0.0
    xs = [math.log(n) for n in ns]
    ys = [math.log(sizes[n]) for n in ns]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sxx
    resid = math.sqrt(sum((y - my - slope * (x - mx)) ** 2 for x, y in zip(xs, ys)) / len(xs))
    return slope, resid


def _fit_limit_ratio(ratios: Sequence[float]) -> float:
    """Extrapolate ``b(n+1)/b(n) ~ lam + beta/n`` over the top half; returns ``lam``.

    Polynomial growth of degree D has ratios ``1 + D/n + O(1/n^2)``, so ``lam``
    tends to 1; exponential growth keeps ``lam`` above 1.
    """
    R = len(ratios)
    ns = list(range(max(1, min(R // 2, R - 3)), R))
    if len(ns) < 2:
        return ratios[-1]
    xs = [1.0 / n for n in ns]
    ys = [ratios[n] for n in ns]
    mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
    beta = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)
    return my - beta * mx


def growth_report(table: BallTable | Sequence[int], delta: float = 0.1) -> GrowthReport:
    """Summarize a ball table.

    EXPONENTIAL when the last three ratios ``b(n+1)/b(n)`` are all at least
    ``1 + delta`` and so is their extrapolated limit. Otherwise
    POLYNOMIAL-CONSISTENT when every doubling ratio ``b(2n)/b(n)`` stays at or
    below ``2 ** (D + 0.5)`` for the fitted degree ``D``; INCONCLUSIVE if neither.
    """
    sizes = list(table.sizes if isinstance(table, BallTable) else table)
    if len(sizes) < 4:
        raise ValueError("growth report needs a table with at least 4 entries")
    ratios = [sizes[n + 1] / sizes[n] for n in range(len(sizes) - 1)]
    R = len(sizes) - 1
    doubling = [sizes[2 * n] / sizes[n] for n in range(1, R // 2 + 1)]
    degree, resid = _fit_degree(sizes)
    limit = _fit_limit_ratio(ratios)
    exp_test = min(ratios[-3:]) >= 1 + delta and limit >= 1 + delta
    poly_test = all(x <= 2 ** (degree + 0.5) for x in doubling)
    if exp_test:
        hint = "EXPONENTIAL"
    elif poly_test:
        hint = "POLYNOMIAL-CONSISTENT"
    else:
        hint = "INCONCLUSIVE"
    return GrowthReport(
        sizes, ratios, doubling, degree, resid, limit, exp_test, poly_test, hint, delta
    )
