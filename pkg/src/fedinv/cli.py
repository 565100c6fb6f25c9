"""Command line: ``fedinv classify | validate | eval | reproduce``.

Exit codes: 0 success, 1 invalid input (or a failed reproduction check),
2 resource cap exceeded, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import __version__
from .algebra.parser import parse_rational
from .classification import (
    CURVATURE,
    NAMED_SCHEMES,
    NORMAL,
    InvariantScheme,
    classify,
)
from .errors import CapExceededError, FedinvError, InvalidInputError, InvariantViolation

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CAP = 2
EXIT_INTERNAL = 3


@dataclass
class RunConfig:
    command: str
    p: int = 0
    delta: int = 0
    two_n: int = 4
    structure: str | None = None
    fixture: str | None = None
    points: list[list[Fraction]] = field(default_factory=list)
    seed: int = 0
    max_slots: int | None = None
    kind: str = NORMAL
    schemes: list[str] = field(default_factory=list)
    report: str | None = None
    out: str | None = None
    json: bool = False


def parse_point(text: str) -> list[Fraction]:
    parts = [p.strip() for p in text.split(",")]
    if not parts or any(not p for p in parts):
        raise InvalidInputError(f"malformed point {text!r}; expected comma-separated rationals like 1,0,1/2,-3")
    return [parse_rational(p) for p in parts]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fedinv", description="Natural tensors of Fedosov structures.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument("--json", action="store_true", help="machine-readable JSON output")
        p.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")

    c = sub.add_parser("classify", help="basis of natural tensors of given valence and weight")
    c.add_argument("--dim", type=int, required=True, help="dimension 2n of the manifold")
    c.add_argument("--valence", type=int, required=True, help="tensor valence p")
    c.add_argument("--weight", type=int, required=True, help="homogeneity weight delta")
    c.add_argument("--seed", type=int, default=0, help="first sample seed (default 0)")
    c.add_argument("--max-slots", type=int, default=None, help="pairing slot cap (default 14 or FEDINV_MAX_SLOTS)")
    c.add_argument("--curvature", action="store_true", help="map N_1 inputs to curvature tensors before pairing")
    common(c)

    v = sub.add_parser("validate", help="check a structure file")
    _structure_args(v)
    common(v)

    e = sub.add_parser("eval", help="evaluate scalar invariants at points")
    _structure_args(e)
    e.add_argument("--scheme", action="append", default=[], help="f1, f2, f3, bianchi, f2-trace, or an id from --report (repeatable)")
    e.add_argument("--report", metavar="PATH", help="JSON report from classify; its basis schemes are ids B0, B1, ...")
    e.add_argument("--point", action="append", default=[], help="comma-separated rational coordinates (repeatable)")
    common(e)

    r = sub.add_parser("reproduce", help="recompute every reference value and compare")
    r.add_argument("--structure", metavar="PATH", help="use this structure instead of the built-in reference fixture")
    common(r)
    return parser


def _structure_args(p: argparse.ArgumentParser):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--structure", metavar="PATH", help="structure JSON file")
    g.add_argument("--fixture", choices=["reference", "flat"], help="built-in structure")


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, json=args.json, out=args.out)
    if args.command == "classify":
        if args.dim < 2 or args.dim % 2:
            raise InvalidInputError(f"--dim must be an even integer >= 2, got {args.dim}")
        if args.valence < 0:
            raise InvalidInputError("--valence must be non-negative")
        if args.max_slots is not None and args.max_slots < 0:
            raise InvalidInputError("--max-slots must be non-negative")
        cfg.two_n, cfg.p, cfg.delta = args.dim, args.valence, args.weight
        cfg.seed, cfg.max_slots = args.seed, args.max_slots
        cfg.kind = CURVATURE if args.curvature else NORMAL
    elif args.command in ("validate", "eval"):
        cfg.structure, cfg.fixture = args.structure, args.fixture
        if args.command == "eval":
            cfg.points = [parse_point(p) for p in args.point]
            cfg.schemes = list(args.scheme)
            cfg.report = args.report
            if not cfg.schemes:
                raise InvalidInputError("eval needs at least one --scheme")
            if not cfg.points:
                raise InvalidInputError("eval needs at least one --point")
    elif args.command == "reproduce":
        cfg.structure = args.structure
    return cfg


# -- commands --------------------------------------------------------------------


def _load(cfg: RunConfig):
    from .geometry import load_structure, load_structure_file, fixture_document

    if cfg.fixture:
        return load_structure(fixture_document(cfg.fixture))
    return load_structure_file(cfg.structure)


def cmd_classify(cfg: RunConfig) -> tuple[str, int]:
    seeds = range(cfg.seed, cfg.seed + 10_000)
    report = classify(cfg.p, cfg.delta, cfg.two_n, cfg.kind, seeds=seeds, max_slots=cfg.max_slots)
    return (report.to_json() + "\n" if cfg.json else report.render_text()), EXIT_OK


def cmd_validate(cfg: RunConfig) -> tuple[str, int]:
    from .geometry import load_structure, load_structure_file, fixture_document, validation_checks

    if cfg.fixture:
        F = load_structure(fixture_document(cfg.fixture), check=False)
        source = f"fixture:{cfg.fixture}"
    else:
        F = load_structure_file(cfg.structure, check=False)
        source = cfg.structure
    checks = validation_checks(F)
    ok = all(c["passed"] for c in checks)
    if cfg.json:
        text = json.dumps({"structure": source, "valid": ok, "checks": checks}, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"structure: {source}"]
        for c in checks:
            lines.append(f"  [{'PASS' if c['passed'] else 'FAIL'}] {c['check']}: {c['message']}")
            for f in c.get("failures", [])[:20]:
                if isinstance(f, dict):
                    lines.append(f"      at {tuple(f['indices'])}: residual {f['residual']}")
                else:
                    lines.append(f"      at {tuple(f)}")
        lines.append("valid" if ok else "invalid")
        text = "\n".join(lines) + "\n"
    return text, EXIT_OK if ok else EXIT_INVALID


def resolve_schemes(ids: Sequence[str], report_path: str | None) -> list[tuple[str, InvariantScheme]]:
    basis: list[InvariantScheme] = []
    if report_path:
        try:
            with open(report_path, encoding="utf-8") as fh:
                data = json.load(fh)
            basis = [InvariantScheme.from_dict(s) for sol in data["solutions"] for s in sol["basis"]]
        except (OSError, ValueError, KeyError) as exc:
            raise InvalidInputError(f"cannot read report {report_path}: {exc}") from exc
    out = []
    for sid in ids:
        if sid in NAMED_SCHEMES:
            out.append((sid, NAMED_SCHEMES[sid]()))
        elif sid.startswith("B") and sid[1:].isdigit() and int(sid[1:]) < len(basis):
            out.append((sid, basis[int(sid[1:])]))
        else:
            known = ", ".join(list(NAMED_SCHEMES) + [f"B{i}" for i in range(len(basis))])
            raise InvalidInputError(f"unknown scheme id {sid!r}; known: {known}")
    return out


def cmd_eval(cfg: RunConfig) -> tuple[str, int]:
    from .geometry import eval_invariant

    F = _load(cfg)
    schemes = resolve_schemes(cfg.schemes, cfg.report)
    for sid, s in schemes:
        if s.valence != 0:
            raise InvalidInputError(f"scheme {sid} has valence {s.valence}; eval handles scalar invariants")
    rows = []
    for sid, s in schemes:
        for pt in cfg.points:
            rows.append({"scheme": sid, "notation": s.render(), "point": [str(x) for x in pt], "value": str(eval_invariant(s, F, pt))})
    if cfg.json:
        return json.dumps({"values": rows}, indent=2, sort_keys=True) + "\n", EXIT_OK
    width = max(len(r["scheme"]) for r in rows)
    lines = [f"{r['scheme']:<{width}}  ({', '.join(r['point'])})  {r['value']}" for r in rows]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_reproduce(cfg: RunConfig) -> tuple[str, int]:
    from .reproduce import run_checks

    results = run_checks(cfg.structure)
    ok = all(r["passed"] for r in results)
    if cfg.json:
        return json.dumps({"all_passed": ok, "checks": results}, indent=2, sort_keys=True) + "\n", EXIT_OK if ok else EXIT_INVALID
    width = max(len(r["check"]) for r in results)
    lines = []
    for r in results:
        lines.append(f"[{'PASS' if r['passed'] else 'FAIL'}] {r['check']:<{width}}  {r['source']}")
        lines.append(f"       expected {r['expected']}; got {r['got']}")
    lines.append(f"{sum(r['passed'] for r in results)}/{len(results)} checks passed")
    return "\n".join(lines) + "\n", EXIT_OK if ok else EXIT_INVALID


COMMANDS = {"classify": cmd_classify, "validate": cmd_validate, "eval": cmd_eval, "reproduce": cmd_reproduce}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses 2 for usage errors; that code is reserved for caps here
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        cfg = config_from_args(args)
        text, code = COMMANDS[cfg.command](cfg)
    except CapExceededError as exc:
        payload = {"error": "cap-exceeded", "message": str(exc), **_jsonable(exc.details)}
        print(json.dumps(payload, sort_keys=True), file=sys.stderr)
        return EXIT_CAP
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except FedinvError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if cfg.out:
        try:
            with open(cfg.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {cfg.out}: {exc}", file=sys.stderr)
            return EXIT_INVALID
    else:
        sys.stdout.write(text)
    return code


def _jsonable(details: dict) -> dict:
    return json.loads(json.dumps(details, default=str))


if __name__ == "__main__":
    sys.exit(main())
