"""Verification drivers: each claim becomes a report of exact, finite checks."""

from __future__ import annotations

import json
import os
import random
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Any, Callable, Iterable, Optional, Sequence

from . import odometer as od
from .circle import ClopenSet, parity_independent
from .errors import PreconditionError
from .growth import (
    DEFAULT_BALL_CAP,
    BallTable,
    LampElement,
    ball_sizes,
    growth_report,
    lamp_generators,
)
from .quadext import QuadExt, parse_quadext
from .rotation import (
    DEFAULT_RETURN_CAP,
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
    swap,
    unit_arc,
)

VERIFIED = "VERIFIED"
REFUTED = "REFUTED"
INCONCLUSIVE = "INCONCLUSIVE"
ERROR = "ERROR"

FAULTS = frozenset({"odo-compose", "parity-duplicate", "lamp-conjugate", "gamma-word"})

ENV_RETURN_CAP = "WORKBENCH_RETURN_CAP"
ENV_BALL_CAP = "WORKBENCH_BALL_CAP"


def default_alpha() -> QuadExt:
    return QuadExt(0, 1, 10, 2)


@dataclass
class SessionConfig:
    alpha: QuadExt = field(default_factory=default_alpha)
    tower: od.OdoType = field(default_factory=od.OdoType.dyadic)
    translate_range: int = 8
    parity_range: int = 6
    lamp_range: int = 5
    radius: int = 7
    odo_radius: int = 12
    odo_level: int = 2
    k_max: int = 2
    pair_count: int = 1000
    o_budget: int = 20
    return_cap: int = DEFAULT_RETURN_CAP
    ball_cap: int = DEFAULT_BALL_CAP
    seed: int = 0
    workers: int = 1
    deterministic: bool = False
    faults: frozenset = frozenset()

    @classmethod
    def from_mapping(cls, data: dict) -> "SessionConfig":
        cfg = cls()
        known = {f.name for f in fields(cls)}
        updates: dict[str, Any] = {}
        for name, value in data.items():
            if name not in known:
                raise PreconditionError(f"unknown config key {name!r}")
            if name == "alpha":
                value = parse_quadext(value)
            elif name == "tower":
                value = od.OdoType.parse(value) if isinstance(value, str) else od.OdoType(tuple(value))
            elif name == "faults":
                value = frozenset(value)
            updates[name] = value
        return replace(cfg, **updates)

    @classmethod
    def load(cls, path: str) -> "SessionConfig":
        with open(path) as fh:
            return cls.from_mapping(json.load(fh))

    def with_env(self, environ: Optional[dict] = None) -> "SessionConfig":
        environ = os.environ if environ is None else environ
        updates = {}
        if environ.get(ENV_RETURN_CAP):
            updates["return_cap"] = int(environ[ENV_RETURN_CAP])
        if environ.get(ENV_BALL_CAP):
            updates["ball_cap"] = int(environ[ENV_BALL_CAP])
        return replace(self, **updates)

    def check_alpha(self) -> None:
        a = self.alpha
        if a.is_rational():
            raise PreconditionError(f"alpha = {a} is rational; an irrational rotation is required")
        if not (0 < a < 1):
            raise PreconditionError(f"alpha = {a} is not in (0, 1)")

    def to_json(self) -> dict:
        return {
            "alpha": str(self.alpha),
            "tower": list(self.tower.levels),
            "translate_range": self.translate_range,
            "parity_range": self.parity_range,
            "lamp_range": self.lamp_range,
            "radius": self.radius,
            "odo_radius": self.odo_radius,
            "odo_level": self.odo_level,
            "k_max": self.k_max,
            "pair_count": self.pair_count,
            "o_budget": self.o_budget,
            "return_cap": self.return_cap,
            "ball_cap": self.ball_cap,
            "seed": self.seed,
            "faults": sorted(self.faults),
        }


@dataclass
class Instance:
    name: str
    inputs: Any
    expected: Any
    got: Any
    passed: bool

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "inputs": self.inputs,
            "expected": self.expected,
            "got": self.got,
            "status": "pass" if self.passed else "FAIL",
        }


@dataclass
class VerificationReport:
    claim: str
    anchor: str
    instances: list[Instance] = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    forced_status: Optional[str] = None
    elapsed: float = 0.0

    def add(self, name: str, inputs: Any, expected: Any, got: Any, passed: Optional[bool] = None) -> bool:
        ok = (expected == got) if passed is None else passed
        self.instances.append(Instance(name, inputs, expected, got, bool(ok)))
        return bool(ok)

    @property
    def status(self) -> str:
        if self.forced_status is not None:
            return self.forced_status
        return VERIFIED if all(i.passed for i in self.instances) else REFUTED

    def failures(self) -> list[Instance]:
        return [i for i in self.instances if not i.passed]

    def to_json(self, deterministic: bool = False) -> dict:
        out = {
            "claim": self.claim,
            "anchor": self.anchor,
            "status": self.status,
            "instance_count": len(self.instances),
            "failed_count": len(self.failures()),
            "params": self.params,
            "witnesses": self.witnesses,
            "notes": self.notes,
            "instances": [i.to_json() for i in self.instances],
        }
        if self.status == REFUTED:
            out["counterexample"] = self.failures()[0].to_json()
        if not deterministic:
            out["elapsed_seconds"] = round(self.elapsed, 3)
            out["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
        return out


def _parallel_map(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- odometer ---------------------------------------------------------------


def _random_odo(rng: random.Random, tower: od.OdoType, k: int, spread: int = 3) -> od.OdoElement:
    m = tower.m(k)
    tau = list(range(m))
    rng.shuffle(tau)
    n = [rng.randint(-spread, spread) for _ in range(m)]
    return od.unsplit(tower, k, n, tuple(tau))


def _corrupt_compose(g: od.OdoElement, h: od.OdoElement) -> od.OdoElement:
    # adds a full turn of the level-k cycle on cell 0: still a valid element, wrong map
    out = od.compose(g, h)
    return od.OdoElement(out.tower, out.k, (out.c[0] + out.m,) + out.c[1:])


def verify_odometer(cfg: SessionConfig) -> VerificationReport:
    """Level-k subgroups are Z^m x| S_m: cocycle composition, split law, lifts, section."""
    tower, k_max = cfg.tower, cfg.k_max
    if k_max < 1 or k_max > tower.depth - 2:
        raise PreconditionError(
            f"k_max = {k_max} needs tower depth >= k_max + 2 (depth is {tower.depth})"
        )
    compose = _corrupt_compose if "odo-compose" in cfg.faults else od.compose
    rep = VerificationReport(
        "prop21",
        "level-k subgroup of the odometer full group is Z^{m_k} x| S_{m_k}; finitely generated subgroups grow polynomially",
        params={"tower": list(tower.levels), "k_max": k_max, "pairs": cfg.pair_count, "seed": cfg.seed},
    )
    rng = random.Random(cfg.seed)
    for k in range(1, k_max + 1):
        m = tower.m(k)
        pairs = [(_random_odo(rng, tower, k), _random_odo(rng, tower, k)) for _ in range(cfg.pair_count)]

        def first_bad(check: Callable[[od.OdoElement, od.OdoElement], bool]):
            for g, h in pairs:
                if not check(g, h):
                    return {"g": g.to_json(), "h": h.to_json()}
            return None

        def residue_ok(g, h, j=k + 2):
            got = od.residue_action(compose(g, h), j)
            want = od.compose_perms(od.residue_action(g, j), od.residue_action(h, j))
            return got == want

        def split_ok(g, h):
            return od.split(compose(g, h)) == od.pair_product(od.split(g), od.split(h))

        def lift_ok(g, h):
            return od.lift(compose(g, h)) == compose(od.lift(g), od.lift(h))

        def roundtrip_ok(g, h):
            n, tau = od.split(g)
            return od.unsplit(tower, k, n, tau) == g

        def section_ok(g, h):
            t1, t2 = g.perm(), h.perm()
            s = compose(od.section(tower, k, t1), od.section(tower, k, t2))
            return s == od.section(tower, k, od.compose_perms(t1, t2)) and s.perm() == od.compose_perms(t1, t2)

        for name, check in (
            ("compose-vs-residue-oracle", residue_ok),
            ("semidirect-pair-law", split_ok),
            ("lift-homomorphism", lift_ok),
            ("split-unsplit-roundtrip", roundtrip_ok),
            ("section-homomorphism", section_ok),
        ):
            bad = first_bad(check)
            rep.add(
                f"{name}[k={k}]",
                {"level": k, "m": m, "pairs": len(pairs)},
                "all agree",
                "all agree" if bad is None else {"disagreement": bad},
                bad is None,
            )

        tower_ok = all(
            od.lift(od.lift(g)) == od.lift_to(g, k + 2) for g, _ in pairs[:50]
        )
        rep.add(f"lift-tower-consistency[k={k}]", {"level": k}, True, tower_ok)

    level = min(cfg.odo_level, tower.depth)
    gens = od.standard_generators(tower, level)
    table = ball_sizes(
        gens, cfg.odo_radius, identity=od.identity(tower, level), cap=cfg.ball_cap, workers=cfg.workers
    )
    gr = growth_report(table)
    rep.add(
        "ball-growth-hint",
        {"level": level, "m": tower.m(level), "radius": cfg.odo_radius},
        "POLYNOMIAL-CONSISTENT",
        gr.hint,
    )
    rep.witnesses["growth"] = gr.to_json()
    return rep


# -- parity independence ------------------------------------------------------


def verify_parity(cfg: SessionConfig) -> VerificationReport:
    """The translates phi^-k(U), |k| <= N, have F_2-independent indicators."""
    cfg.check_alpha()
    a, N = cfg.alpha, cfg.parity_range
    U = unit_arc(a)
    sets = [U.rotate(-k, a) for k in range(-N, N + 1)]
    if "parity-duplicate" in cfg.faults:
        sets.append(sets[0])
    verdict = parity_independent(sets)
    rep = VerificationReport(
        "prop23",
        "sums of rotation translates of the indicator of U are never identically zero mod 2",
        params={"alpha": str(a), "range": N},
    )
    rep.add(
        "f2-independence",
        {"sets": [f"phi^{-k}(U)" for k in range(-N, N + 1)] + (["duplicate"] if len(sets) > 2 * N + 1 else [])},
        {"independent": True, "rank": len(sets)},
        {"independent": verdict.independent, "rank": verdict.rank},
    )
    if verdict.witness is not None:
        rep.witnesses["dependency"] = list(verdict.witness)
    return rep


# -- lamplighter ----------------------------------------------------------------


@dataclass
class LampSetup:
    U: ClopenSet
    psi: RotElement
    O: ClopenSet
    k: int
    rank: int
    r: RotElement
    s: RotElement


def lamplighter_setup(cfg: SessionConfig, N: int) -> Optional[LampSetup]:
    """Build psi, search O certified on |j| <= N, and form (r, s); None if no O is found."""
    cfg.check_alpha()
    a = cfg.alpha
    if not a * 4 < 1:
        raise PreconditionError(f"4*alpha = {a * 4} is not < 1; U, phi(U), phi^2(U), phi^3(U) overlap")
    U = unit_arc(a)
    psi = first_return(a, U, cfg.return_cap)
    found = find_lamp_set(a, U, psi, N, cfg.o_budget)
    if found is None:
        return None
    O, k, verdict = found
    r, s = lamplighter_pair(a, U, O, psi)
    return LampSetup(U, psi, O, k, verdict.rank, r, s)


def _conjugates(r: RotElement, s: RotElement, N: int) -> dict[int, RotElement]:
    out = {0: s}
    fwd, bwd = s, s
    r_inv = r.inverse()
    for k in range(1, N + 1):
        fwd = r * fwd * r_inv
        bwd = r_inv * bwd * r
        out[k], out[-k] = fwd, bwd
    return out


def verify_lamplighter(cfg: SessionConfig) -> VerificationReport:
    """<r, s> is a lamplighter group, and so is its commutator copy <r', s'>."""
    a, N = cfg.alpha, cfg.lamp_range
    rep = VerificationReport(
        "thm24",
        "the commutator subgroup of the full group of a non-odometer contains the lamplighter group",
        params={"alpha": str(a), "range": N, "o_budget": cfg.o_budget},
    )
    setup = lamplighter_setup(cfg, N)
    if setup is None:
        rep.forced_status = INCONCLUSIVE
        rep.notes.append(f"no certified O among [0, k*alpha) & U for k <= {cfg.o_budget}")
        return rep
    U, psi, O, r, s = setup.U, setup.psi, setup.O, setup.r, setup.s
    identity = phi_power(a, 0)
    if N == 0:
        rep.notes.append("degenerate range: commutation and infinite-order checks are vacuous")
    rep.witnesses.update(
        {"O": O.to_json(), "O_search_k": setup.k, "psi": psi.to_json(), "r": r.to_json(), "s": s.to_json()}
    )

    conj = _conjugates(r, s, N)
    orbit = psi_orbit(psi, O, N)
    lamp_shift = -1 if "lamp-conjugate" in cfg.faults else 1
    for k in range(-N, N + 1):
        target = swap(a, orbit[N + lamp_shift * k])
        rep.add(f"conjugate-is-swap[k={k}]", {"k": k}, target.to_json(), conj[k].to_json())

    V = ClopenSet.make([(QuadExt.integer(0, a.d), QuadExt.rational(1, 50, a.d))], a.d) & U
    lhs = r * swap(a, V) * r.inverse()
    rep.add("swap-conjugation-law[V=[0,1/50)]", {"V": V.to_json()}, swap(a, psi.image(V)).to_json(), lhs.to_json())

    ks = sorted(conj)
    pairs = [(i, j) for i in ks for j in ks if i < j]
    commute = _parallel_map(lambda ij: conj[ij[0]] * conj[ij[1]] == conj[ij[1]] * conj[ij[0]], pairs, cfg.workers)
    bad = [list(p) for p, ok in zip(pairs, commute) if not ok]
    rep.add("conjugates-commute", {"pairs": len(pairs)}, [], bad)

    verdict = parity_independent(orbit)
    rep.add(
        "products-nontrivial-f2-rank",
        {"sets": 2 * N + 1},
        {"independent": True, "rank": 2 * N + 1},
        {"independent": verdict.independent, "rank": verdict.rank},
    )
    power = identity
    nontrivial = []
    for k in range(1, N + 1):
        power = power * r
        nontrivial.append(not power.is_identity())
    rep.add("r-infinite-order", {"k_range": [1, N]}, [True] * N, nontrivial)

    UphiU = U | U.rotate(1, a)
    rep.add("support-r-s", {}, True, (r.support() | s.support()).issubset(UphiU))

    rp, sp = lamplighter_in_derived(a, r, s, U)
    rep.witnesses.update({"r_prime": rp.to_json(), "s_prime": sp.to_json()})
    far = U.rotate(2, a) | U.rotate(3, a)
    phi2, phi_2 = phi_power(a, 2), phi_power(a, -2)
    for name, g, gp in (("r", r, rp), ("s", s, sp)):
        shifted = phi2 * g.inverse() * phi_2
        rep.add(f"index-{name}-prime", {}, 0, index(gp))
        rep.add(
            f"support-{name}-prime",
            {},
            True,
            shifted.support().issubset(far) and gp.support().issubset(UphiU | far) and UphiU.isdisjoint(far),
        )
    rep.add("s-prime-involution", {}, True, (sp * sp).is_identity())
    conj_p = _conjugates(rp, sp, N)
    ks = sorted(conj_p)
    bad_p = [[i, j] for i in ks for j in ks if i < j and conj_p[i] * conj_p[j] != conj_p[j] * conj_p[i]]
    rep.add("derived-conjugates-commute", {"range": N}, [], bad_p)
    power, nontrivial = identity, []
    for k in range(1, N + 1):
        power = power * rp
        nontrivial.append(not power.is_identity())
    rep.add("r-prime-infinite-order", {"k_range": [1, N]}, [True] * N, nontrivial)
    return rep


# -- gamma words --------------------------------------------------------------------


def verify_gamma_words(cfg: SessionConfig) -> VerificationReport:
    """Words in phi and sigma_U produce every gamma of translates and pairwise intersections."""
    cfg.check_alpha()
    a, N = cfg.alpha, cfg.translate_range
    if not a * 6 < 1:
        raise PreconditionError(f"alpha = {a} is not < 1/6")
    U = unit_arc(a)
    rep = VerificationReport(
        "prop31",
        "the subgroup generated by phi and sigma_U contains every gamma_W, hence the commutator subgroup",
        params={"alpha": str(a), "range": N},
    )
    corrupt = "gamma-word" in cfg.faults

    def word_for(m: int, n: int):
        w = gamma_word(a, m, n)
        return w.letters[:-1] if corrupt else w.letters

    def translate_instance(n: int):
        letters = word_for(n, n)
        got = GenWord(letters).evaluate(a)
        want = gamma(a, U.rotate(n, a))
        return n, letters, got, want

    def pair_instance(mn: tuple[int, int]):
        m, n = mn
        letters = word_for(m, n)
        W = U.rotate(m, a) & U.rotate(n, a)
        return mn, letters, GenWord(letters).evaluate(a), gamma(a, W), W

    for n, letters, got, want in _parallel_map(translate_instance, list(range(-N, N + 1)), cfg.workers):
        ok = got == want
        rep.add(
            f"four-swap-word[n={n}]",
            {"n": n, "word": letters},
            "equal" if ok else want.to_json(),
            "equal" if ok else got.to_json(),
            ok,
        )

    pairs = [
        (m, n)
        for m in range(-N, N + 1)
        for n in range(-N, N + 1)
        if m != n and U.rotate(m, a) & U.rotate(n, a)
    ]
    for (m, n), letters, got, want, W in _parallel_map(pair_instance, pairs, cfg.workers):
        ok = got == want
        rep.add(
            f"commutator-word[m={m},n={n}]",
            {"m": m, "n": n, "W": W.to_json(), "word_length": len(letters)},
            "equal" if ok else want.to_json(),
            "equal" if ok else got.to_json(),
            ok,
        )

    sigma = swap(a, U)
    for n in range(-N, N + 1):
        lhs = phi_power(a, n) * sigma * phi_power(a, -n)
        ok = lhs == swap(a, U.rotate(n, a))
        rep.add(f"sigma-conjugation[n={n}]", {"n": n}, True, ok)
    rep.witnesses["translate_instances"] = 2 * N + 1
    rep.witnesses["pair_instances"] = len(pairs)
    return rep


CLAIMS: dict[str, Callable[[SessionConfig], VerificationReport]] = {
    "prop21": verify_odometer,
    "prop23": verify_parity,
    "thm24": verify_lamplighter,
    "prop31": verify_gamma_words,
}


def run_claim(name: str, cfg: SessionConfig) -> VerificationReport:
    start = time.perf_counter()
    rep = CLAIMS[name](cfg)
    rep.elapsed = time.perf_counter() - start
    return rep


# -- growth -------------------------------------------------------------------------


@dataclass
class GrowthResult:
    target: str
    table: BallTable
    report: dict
    comparison: Optional[dict] = None
    status: str = VERIFIED

    def to_json(self) -> dict:
        out = {"target": self.target, "status": self.status, "table": self.table.sizes, "growth": self.report}
        if self.comparison is not None:
            out["comparison"] = self.comparison
        return out


def lamp_table(radius: int, cfg: SessionConfig) -> BallTable:
    return ball_sizes(lamp_generators(), radius, identity=LampElement(), cap=cfg.ball_cap, workers=cfg.workers)


def run_growth(target: str, cfg: SessionConfig, radius: Optional[int] = None) -> GrowthResult:
    """Ball table and growth summary for ``rs``, ``lamp`` or ``odo``.

    For ``rs`` the table is compared against the lamplighter oracle. The
    embedding is certified on the ball of radius ``N // 2`` when the
    psi-translates of O are independent for ``|j| <= N`` and ``r^j != id``
    for ``j <= N``: two words of length ``<= R`` differ by one of length
    ``<= 2R``.
    """
    R = cfg.radius if radius is None else radius
    if target == "lamp":
        table = lamp_table(R, cfg)
        return GrowthResult("lamp", table, growth_report(table).to_json())
    if target == "odo":
        level = min(cfg.odo_level, cfg.tower.depth)
        gens = od.standard_generators(cfg.tower, level)
        table = ball_sizes(gens, R, identity=od.identity(cfg.tower, level), cap=cfg.ball_cap, workers=cfg.workers)
        return GrowthResult("odo", table, growth_report(table).to_json())
    if target != "rs":
        raise PreconditionError(f"unknown growth target {target!r}")
    N = max(2 * R, cfg.lamp_range)
    setup = lamplighter_setup(cfg, N)
    if setup is None:
        return GrowthResult("rs", BallTable([1]), {}, None, INCONCLUSIVE)
    power, order_ok = phi_power(cfg.alpha, 0), True
    for _ in range(N):
        power = power * setup.r
        order_ok = order_ok and not power.is_identity()
    certified = N // 2 if order_ok else 0
    table = ball_sizes(
        [setup.r, setup.s], R, identity=phi_power(cfg.alpha, 0), cap=cfg.ball_cap, workers=cfg.workers
    )
    oracle = lamp_table(R, cfg)
    equal = table.sizes == oracle.sizes
    comparison = {
        "oracle": "lamp",
        "oracle_table": oracle.sizes,
        "verdict": "EQUAL" if equal else "DIFFERENT",
        "compared_through": R,
        "certified_radius": certified,
        "unproven_beyond_certified": R > certified,
        "O": setup.O.to_json(),
    }
    status = VERIFIED if equal else REFUTED
    return GrowthResult("rs", table, growth_report(table).to_json(), comparison, status)


# -- output ---------------------------------------------------------------------


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def combined_status(statuses: Iterable[str]) -> str:
    statuses = list(statuses)
    if ERROR in statuses:
        return ERROR
    if REFUTED in statuses:
        return REFUTED
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return VERIFIED
