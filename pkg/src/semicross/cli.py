"""Command-line front end: ``semicross norm | analyze | verify``.

Exit codes: 0 success, 1 input error, 2 bracket did not converge,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import LEFT, RIGHT, MatPoly, Poly, ell1_norm
from .config import FORMATS, RunConfig
from .dynsys import (FiniteSystem, TailSystem, add_tail, direct_limit, orbit_data,
                     radical_support)
from .envelope import envelope_of, minimality_report, simplicity_report
from .errors import SemicrossError
from .norms import matrix_norm, route_of, semicrossed_norm
from .reps import KINDS

SCHEMA = "semicross/1"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BRACKET = 2
EXIT_VERIFY = 3


class InputError(Exception):
    """Bad command-line input; the message names the offending field."""


def _read_literal(arg: str, what: str):
    """Parse a JSON literal given inline or as a path (``-`` for stdin)."""
    text = None
    if arg == "-":
        text = sys.stdin.read()
    elif arg.lstrip().startswith(("{", "[")):
        text = arg
    else:
        path = Path(arg)
        if not path.is_file():
            raise InputError(f"{what}: no such file {arg!r}")
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_system(arg: str) -> FiniteSystem:
    obj = _read_literal(arg, "system")
    try:
        if isinstance(obj, dict) and "tail_depth" in obj:
            return TailSystem.from_literal(obj).system
        return FiniteSystem.from_literal(obj)
    except SemicrossError as exc:
        raise InputError(f"system.{exc}") from None


def load_poly(arg: str, system: FiniteSystem, side: str | None):
    obj = _read_literal(arg, "poly")
    try:
        if isinstance(obj, dict) and "entries" in obj:
            return MatPoly.from_literal(obj, system, side)
        return Poly.from_literal(obj, system, side)
    except SemicrossError as exc:
        raise InputError(f"poly.{exc}") from None


def _config(args) -> RunConfig:
    try:
        return RunConfig(tol=args.tol, max_depth=args.max_depth, grid=args.grid,
                         tail_depth=args.tail_depth, nmax=args.nmax,
                         format=args.format, seed=args.seed)
    except SemicrossError as exc:
        raise InputError(f"config.{exc}") from None


def _json_default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit_machine(command: str, cfg: RunConfig, result: dict, out) -> None:
    doc = {"schema": SCHEMA, "command": command, "config": cfg.to_dict(), "result": result}
    out.write(json.dumps(doc, indent=2, default=_json_default, allow_nan=False) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_norm(args, out=None) -> int:
    out = out or sys.stdout
    cfg = _config(args)
    system = load_system(args.system)
    F = load_poly(args.poly, system, args.side)
    if args.kind not in KINDS:
        raise InputError(f"kind: expected one of {', '.join(KINDS)}")
    try:
        if isinstance(F, MatPoly):
            res = matrix_norm(system, F, args.kind, **cfg.engine)
        else:
            res = semicrossed_norm(system, F, args.kind, **cfg.engine)
    except SemicrossError as exc:
        raise InputError(str(exc)) from None
    result = {
        "system": system.to_literal(),
        "poly": F.to_literal(),
        "side": F.side,
        "kind": args.kind,
        "route": route_of(F.side, args.kind),
        "ell1": ell1_norm(F),
        **res.to_dict(),
    }
    if cfg.format == "machine":
        _emit_machine("norm", cfg, result, out)
    else:
        half = 0.5 * (res.upper_bound - res.lower_bound)
        out.write(f"norm        {res.value:.9f} (+{res.upper_bound - res.value:.1e})\n")
        out.write(f"bracket     [{res.lower_bound:.12g}, {res.upper_bound:.12g}]  "
                  f"half-width {half:.1e}\n")
        out.write(f"converged   {'yes' if res.converged else 'no'}\n")
        out.write(f"side/kind   {F.side} {args.kind}  (route {result['route']})\n")
        out.write(f"l1 bound    {result['ell1']:.9g}\n")
        effort = {k: v for k, v in res.effort.items() if k in ("stop", "depth", "evaluations", "cells")}
        if effort:
            out.write("effort      " + ", ".join(f"{k}={v}" for k, v in effort.items()) + "\n")
    return EXIT_OK if res.converged else EXIT_BRACKET


def analyze_system(system: FiniteSystem, cfg: RunConfig) -> dict:
    od = orbit_data(system)
    limit, points = direct_limit(system)
    mini = minimality_report(system)
    simp = simplicity_report(system)
    envelopes = [envelope_of(system, side, kind, cfg.tail_depth).to_dict()
                 for side in (LEFT, RIGHT) for kind in KINDS]
    return {
        "system": system.to_literal(),
        "injective": system.is_injective,
        "surjective": system.is_surjective,
        "eventual_image": list(od.eventual_image.members()),
        "radical_support": list(radical_support(system).members()),
        "cycles": [list(c) for c in od.cycles],
        "preperiod": list(od.preperiod),
        "direct_limit": {"system": limit.to_literal(), "points": list(points)},
        "tail": add_tail(system, cfg.tail_depth).to_literal(),
        "minimality": mini.to_dict(),
        "simplicity": simp.to_dict(),
        "envelopes": envelopes,
    }


def cmd_analyze(args, out=None) -> int:
    out = out or sys.stdout
    cfg = _config(args)
    system = load_system(args.system)
    try:
        rep = analyze_system(system, cfg)
    except SemicrossError as exc:
        raise InputError(str(exc)) from None
    if cfg.format == "machine":
        _emit_machine("analyze", cfg, rep, out)
        return EXIT_OK
    w = out.write
    w(f"system          phi = {list(system.phi)}\n")
    w(f"injective       {rep['injective']}\n")
    w(f"surjective      {rep['surjective']}\n")
    w(f"cycles          {rep['cycles']}\n")
    w(f"eventual image  {rep['eventual_image']}\n")
    w(f"radical support {rep['radical_support']}\n")
    m = rep["minimality"]
    w(f"minimal         {m['minimal']}  (base {m['base_minimal']}, tail {m['tail_minimal']}, "
      f"limit {m['limit_bi_minimal']}, no Fourier ideals {m['no_fourier_ideals']})\n")
    for wit in m["witnesses"]:
        w(f"  ideal         {wit['description']}\n")
    s = rep["simplicity"]
    w(f"simplicity      {s['verdict']}  witness: {s['witness']['description']} "
      f"(validated {s['validated']})\n")
    w("envelopes\n")
    for e in rep["envelopes"]:
        w(f"  {e['side']:5s} {e['kind']:12s} {e['shape']:15s} {e['label']}\n")
    return EXIT_OK


def cmd_verify(args, out=None) -> int:
    out = out or sys.stdout
    from .verify import CHECKS, run_checks

    cfg = _config(args)
    names = args.only or None
    if names:
        unknown = [n for n in names if n not in CHECKS]
        if unknown:
            raise InputError(f"only: unknown check {unknown[0]!r}")
    if args.list:
        for name in sorted(CHECKS):
            out.write(name + "\n")
        return EXIT_OK
    if cfg.format == "table":
        results = []
        for name in sorted(names or CHECKS):
            r = run_checks(cfg, [name])[0]
            results.append(r)
            out.write(f"{'PASS' if r.passed else 'FAIL'}  {r.name:38s} {r.seconds:7.2f}s  {r.detail}\n")
            out.flush()
    else:
        results = run_checks(cfg, names)
    failed = [r for r in results if not r.passed]
    summary = {"passed": len(results) - len(failed), "failed": len(failed),
               "seconds": round(sum(r.seconds for r in results), 3)}
    if cfg.format == "machine":
        _emit_machine("verify", cfg, {"summary": summary,
                                      "checks": [r.to_dict() for r in results]}, out)
    else:
        out.write(f"\n{summary['passed']} passed, {summary['failed']} failed "
                  f"in {summary['seconds']:.1f}s\n")
    return EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    defaults = RunConfig()
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=defaults.tol,
                        help="bracket width target (default %(default)g)")
    common.add_argument("--max-depth", type=int, default=defaults.max_depth,
                        help="largest compression depth (default %(default)d)")
    common.add_argument("--grid", type=int, default=defaults.grid,
                        help="initial circle grid for symbol norms (default %(default)d)")
    common.add_argument("--tail-depth", type=int, default=defaults.tail_depth,
                        help="tail truncation depth K (default %(default)d)")
    common.add_argument("--nmax", type=int, default=defaults.nmax,
                        help="largest system size in norm sweeps (default %(default)d)")
    common.add_argument("--format", choices=FORMATS, default=defaults.format)
    common.add_argument("--seed", type=int, default=defaults.seed)

    parser = argparse.ArgumentParser(
        prog="semicross",
        description="Norms and envelope structure of semicrossed products over finite systems.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", parents=[common], help="norm of a polynomial or matrix of polynomials")
    p.add_argument("system", help="system literal: a JSON file, inline JSON, or - for stdin")
    p.add_argument("poly", help="Poly or MatPoly literal: a JSON file, inline JSON, or -")
    p.add_argument("--side", choices=(LEFT, RIGHT), default=None,
                   help="required side; defaults to the side in the literal")
    p.add_argument("--kind", choices=KINDS, default="contractive")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("analyze", parents=[common], help="orbit, minimality and envelope report")
    p.add_argument("system", help="system literal: a JSON file, inline JSON, or - for stdin")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", parents=[common], help="run the verification suite")
    p.add_argument("--only", action="append", metavar="CHECK", help="run only this check (repeatable)")
    p.add_argument("--list", action="store_true", help="list check names and exit")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"semicross: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
