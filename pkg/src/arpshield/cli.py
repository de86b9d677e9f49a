"""Command-line entry point: arpshield {verify-lattice,gen,run,report,compare,features}."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__
from .lattice import format_table, lattice_document, paper_lattice, verify
from .packet import write_trace
from .report import (
    FORMATS,
    UnknownFormat,
    build_report,
    compare_table3,
    emit,
    feature_matrix,
    load_report,
    table3_text,
)
from .scenarios import ScenarioError, generate_class, load_scenario, paper_mix_scenario, save_scenario
from .simnet import NS, run
from .taxonomy import AttackClass
from .topology import paper_topology

SEED_ENV = "ARPSHIELD_SEED"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env_seed() -> int | None:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return None
    try:
        return int(raw, 0)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def cmd_verify_lattice(args) -> int:
    lat = paper_lattice()
    checks = verify(lat)
    if args.json:
        doc = lattice_document(lat)
        doc["checks"] = [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks]
        print(json.dumps(doc, indent=2))
    else:
        print("hasse edges:")
        for a, b in lat.covering_edges():
            print(f"  {a} -> {b}")
        print()
        for c in checks:
            status = "ok  " if c.passed else "FAIL"
            print(f"{status} {c.name}" + (f"  {c.detail}" if c.detail else ""))
        print()
        print(format_table(lat, "join"))
        print()
        print(format_table(lat, "meet"))
    return 0 if all(c.passed for c in checks) else 1


def cmd_gen(args) -> int:
    seed = _env_seed()
    if seed is None:
        seed = args.seed
    if args.paper_mix:
        s = paper_mix_scenario(seed=826 if seed is None else seed, detector=args.detector)
        save_scenario(s, args.out)
        return 0
    cls = AttackClass.parse(args.cls)
    rng = random.Random(0 if seed is None else seed)
    topo = paper_topology()
    frames = [generate_class(cls, topo, rng, frame_id=i) for i in range(args.count)]
    gap = round(args.gap * NS)
    with open(args.out, "wb") as fh:
        write_trace(fh, ((i * gap, f) for i, f in enumerate(frames)))
    return 0


def cmd_run(args) -> int:
    s = load_scenario(args.scenario)
    seed = _env_seed()
    if seed is not None:
        s = s.with_seed(seed)
    if args.detector:
        s = s.with_detector(args.detector)
    records = run(s, trace_path=args.trace)
    rep = build_report(records, s)
    data = emit(rep, args.format)
    if args.out == "-":
        sys.stdout.write(data.decode())
    else:
        with open(args.out, "wb") as fh:
            fh.write(data)
    return 0


def _read_report(path: str):
    with open(path, "rb") as fh:
        data = fh.read()
    try:
        return load_report(data)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"{path}: not a json-lines report ({exc})") from None


def cmd_report(args) -> int:
    sys.stdout.write(emit(_read_report(args.inp), args.format).decode())
    return 0


def cmd_compare(args) -> int:
    clcc = _read_report(args.inp)
    base = _read_report(args.baseline)
    print(table3_text(clcc, base), end="")
    checks = compare_table3(clcc, base)
    for c in checks:
        print(f"{'ok  ' if c.passed else 'FAIL'} {c.name}  {c.detail}")
    return 0 if all(c.passed for c in checks) else 1


def cmd_features(args) -> int:
    fm = feature_matrix()
    if args.json:
        print(json.dumps({"features": fm.as_dict(), "footnote": fm.footnote}, indent=2))
    else:
        print(fm.render(), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="arpshield", description="Cross-layer ARP spoofing detection simulator and reports.")
    p.add_argument("--version", action="version", version=f"arpshield {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify-lattice", help="check the attack-causality lattice and print join/meet tables")
    v.add_argument("--json", action="store_true", help="structured output")
    v.set_defaults(func=cmd_verify_lattice)

    g = sub.add_parser("gen", help="write a scenario file or a single-class frame trace")
    what = g.add_mutually_exclusive_group(required=True)
    what.add_argument("--paper-mix", action="store_true", help="canonical 100 normal + 105 x 11 abnormal scenario")
    what.add_argument("--class", dest="cls", metavar="PKTn", help="attack class to emit as a binary trace")
    g.add_argument("--out", required=True)
    g.add_argument("--seed", type=int)
    g.add_argument("--count", type=int, default=1, help="frames to emit with --class (default 1)")
    g.add_argument("--gap", type=float, default=0.5, help="seconds between trace timestamps")
    g.add_argument("--detector", choices=("clcc", "baseline"), default="clcc")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="simulate a scenario and write a report")
    r.add_argument("--scenario", required=True)
    r.add_argument("--detector", choices=("clcc", "baseline"))
    r.add_argument("--out", required=True, help="report path, or - for stdout")
    r.add_argument("--trace", help="also dump every delivered frame to this binary trace")
    r.add_argument("--format", default="jsonl", help=f"one of {', '.join(FORMATS)}")
    r.set_defaults(func=cmd_run)

    rp = sub.add_parser("report", help="re-render a json-lines report")
    rp.add_argument("--in", dest="inp", required=True)
    rp.add_argument("--format", default="text")
    rp.set_defaults(func=cmd_report)

    c = sub.add_parser("compare", help="check CLCC and baseline reports against the published thresholds")
    c.add_argument("--in", dest="inp", required=True, help="CLCC report")
    c.add_argument("--baseline", required=True, help="RFC 826 baseline report")
    c.add_argument("--against", choices=("table3",), default="table3")
    c.set_defaults(func=cmd_compare)

    f = sub.add_parser("features", help="print the technique feature matrix")
    f.add_argument("--json", action="store_true")
    f.set_defaults(func=cmd_features)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "count", 1) < 1:
            raise UsageError("--count must be at least 1")
        return args.func(args)
    except (UsageError, OSError, ScenarioError, UnknownFormat, ValueError) as exc:
        # ValueError covers bad class names and similar argument values
        print(f"arpshield: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
