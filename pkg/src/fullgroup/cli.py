"""Command line entry point: ``workbench verify|growth|synthesize``.

Exit codes: 0 when every check is VERIFIED, 1 when something is REFUTED or
INCONCLUSIVE, 2 for usage, precondition and resource errors.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from typing import Optional, Sequence

from . import odometer as od
from .errors import ResourceError, WorkbenchError
from .growth import growth_report
from .quadext import parse_quadext
from .rotation import gamma, gamma_word, unit_arc
from .verify import (
    CLAIMS,
    ERROR,
    FAULTS,
    INCONCLUSIVE,
    REFUTED,
    VERIFIED,
    SessionConfig,
    combined_status,
    dumps,
    run_claim,
    run_growth,
    write_atomic,
)

EXIT = {VERIFIED: 0, REFUTED: 1, INCONCLUSIVE: 1, ERROR: 2}

RANGE_FIELD = {"prop23": "parity_range", "thm24": "lamp_range", "prop31": "translate_range"}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file mirroring the session config")
    p.add_argument("--alpha", help="rotation number, e.g. '(0+1*sqrt(2))/10'")
    p.add_argument("--tower", help="odometer tower as a comma list, e.g. 2,4,8,16")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--deterministic", action="store_true", help="omit timestamps and timings")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="workbench", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run one claim's checks, or all of them")
    v.add_argument("claim", choices=sorted(CLAIMS) + ["all"])
    _common(v)
    v.add_argument("--range", type=int, dest="range_", help="translate / parity / lamplighter range")
    v.add_argument("--k-max", type=int)
    v.add_argument("--pairs", type=int)
    v.add_argument("--inject-fault", action="append", default=[], choices=sorted(FAULTS))
    v.add_argument("--out", help="write the JSON report here instead of stdout")

    g = sub.add_parser("growth", help="Cayley-ball table and growth summary")
    g.add_argument("--target", required=True, choices=["rs", "lamp", "odo"])
    g.add_argument("--radius", type=int)
    g.add_argument("--level", type=int, help="odometer level for --target odo")
    g.add_argument("--csv")
    g.add_argument("--json")
    _common(g)

    s = sub.add_parser("synthesize", help="word synthesis in phi and sigma_U")
    s.add_argument("what", choices=["gamma"])
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    _common(s)
    return parser


def make_config(args: argparse.Namespace) -> SessionConfig:
    cfg = SessionConfig.load(args.config) if args.config else SessionConfig()
    cfg = cfg.with_env()
    updates = {}
    if args.alpha:
        updates["alpha"] = parse_quadext(args.alpha)
    if args.tower:
        updates["tower"] = od.OdoType.parse(args.tower)
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.workers is not None:
        updates["workers"] = max(1, args.workers)
    if args.deterministic:
        updates["deterministic"] = True
    return replace(cfg, **updates)


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        write_atomic(path, text)
    else:
        sys.stdout.write(text)


def _error(msg: str) -> int:
    sys.stdout.write(dumps({"status": ERROR, "error": msg}))
    print(f"workbench: error: {msg}", file=sys.stderr)
    return EXIT[ERROR]


def cmd_verify(args: argparse.Namespace, cfg: SessionConfig) -> int:
    updates = {"faults": frozenset(args.inject_fault) | cfg.faults}
    if args.k_max is not None:
        updates["k_max"] = args.k_max
    if args.pairs is not None:
        updates["pair_count"] = args.pairs
    cfg = replace(cfg, **updates)
    names = sorted(CLAIMS) if args.claim == "all" else [args.claim]
    reports = []
    for name in names:
        c = cfg
        if args.range_ is not None and name in RANGE_FIELD:
            c = replace(cfg, **{RANGE_FIELD[name]: args.range_})
        try:
            reports.append(run_claim(name, c).to_json(cfg.deterministic))
        except (WorkbenchError, ValueError) as exc:
            reports.append({"claim": name, "status": ERROR, "error": str(exc)})
            print(f"workbench: {name}: {exc}", file=sys.stderr)
    if len(reports) == 1:
        doc = reports[0]
    else:
        doc = {
            "status": combined_status(r["status"] for r in reports),
            "config": cfg.to_json(),
            "reports": reports,
        }
    _emit(dumps(doc), args.out)
    return EXIT[doc["status"]]


def cmd_growth(args: argparse.Namespace, cfg: SessionConfig) -> int:
    if args.level is not None:
        cfg = replace(cfg, odo_level=args.level)
    radius = args.radius
    if radius is None:
        radius = cfg.odo_radius if args.target == "odo" else cfg.radius
    try:
        result = run_growth(args.target, cfg, radius)
    except ResourceError as exc:
        partial = exc.partial
        doc = {"target": args.target, "status": ERROR, "error": str(exc), "table": partial.sizes if partial else []}
        if partial is not None and len(partial.sizes) >= 4:
            doc["growth"] = growth_report(partial).to_json()
        if args.csv and partial is not None:
            write_atomic(args.csv, partial.to_csv())
        _emit(dumps(doc), args.json)
        print(f"workbench: {exc}", file=sys.stderr)
        return EXIT[ERROR]
    if args.csv:
        write_atomic(args.csv, result.table.to_csv())
    _emit(dumps(result.to_json()), args.json)
    return EXIT[result.status]


def cmd_synthesize(args: argparse.Namespace, cfg: SessionConfig) -> int:
    a = cfg.alpha
    cfg.check_alpha()
    word = gamma_word(a, args.m, args.n)
    U = unit_arc(a)
    W = U.rotate(args.m, a) & U.rotate(args.n, a)
    ok = word.evaluate(a) == gamma(a, W)
    doc = {
        "m": args.m,
        "n": args.n,
        "word": word.letters,
        "length": len(word),
        "W": W.to_json(),
        "status": VERIFIED if ok else REFUTED,
    }
    sys.stdout.write(dumps(doc))
    return EXIT[doc["status"]]


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = make_config(args)
        if args.command == "verify":
            return cmd_verify(args, cfg)
        if args.command == "growth":
            return cmd_growth(args, cfg)
        return cmd_synthesize(args, cfg)
    except (WorkbenchError, ValueError, OSError) as exc:
        return _error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
