"""Command-line interface: ``valencelab <subcommand> ...``; JSON on stdout."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Any, Optional, Sequence

import numpy as np

from . import antidyn as ad
from .argprin import Contour, ledger
from .cpoly import BivarPoly, UnivarPoly
from .errors import ParseError, ValenceError
from .formats import load_grid, parse_coeffs, parse_complex
from .resultant import compute_resultant, is_coprime
from .settings import Settings, load_settings, use_settings
from .sweep import SweepSpec, parse_range, rows_to_csv, run_sweep, write_json
from .verify import DEFAULT_SEED, verify_all
from .zerocount import solve_logharmonic, solve_polyanalytic

SIG_DIGITS = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # single-line diagnostics instead of usage dumps
        raise UsageError(message)


def canonical(obj: Any) -> Any:
    """Floats rounded to 12 significant digits, -0.0 folded, non-finite values to null."""
    if isinstance(obj, dict):
        return {k: canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        x = float(f"{x:.{SIG_DIGITS}g}")
        return 0.0 if x == 0 else x
    if isinstance(obj, complex):
        return [canonical(obj.real), canonical(obj.imag)]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(canonical(obj), indent=2)


def _point(token: str) -> ad.SpherePoint:
    if token.strip().lower() in ("inf", "infinity", "oo"):
        return ad.SpherePoint.infinity()
    return ad.SpherePoint.finite(parse_complex(token))


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise ParseError(f"malformed criterion list {text!r}", text) from None


def _set_pair(text: str) -> tuple[str, Any]:
    if "=" not in text:
        raise UsageError(f"--set expects key=value, got {text!r}")
    key, value = text.split("=", 1)
    try:
        return key, json.loads(value)
    except json.JSONDecodeError:
        raise UsageError(f"--set value for {key!r} is not a JSON scalar: {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="valencelab", description=__doc__)
    parser.add_argument("--config", help="JSON file of tolerance overrides")
    parser.add_argument(
        "--set", action="append", default=[], metavar="KEY=VALUE",
        help="override one tolerance (applied after --config)",
    )
    parser.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def logharmonic_args(p, grid=True):
        p.add_argument("--p", help="coefficients of p, ascending, e.g. -1,0,3")
        p.add_argument("--q", help="coefficients of q, ascending")
        p.add_argument("--w", default="1", help="right-hand side (default 1)")
        if grid:
            p.add_argument("--grid", help="JSON file with a polyanalytic coefficient grid")

    z = sub.add_parser("zeros", help="solve p(z) conj(q(z)) = w or a polyanalytic grid")
    logharmonic_args(z)

    r = sub.add_parser("resultant", help="z-resultant of P and its conjugate pair")
    logharmonic_args(r)
    r.add_argument("--method", choices=["interp", "bareiss", "both"], default="interp")

    c = sub.add_parser("coprime", help="coprimacy of P and its conjugate pair")
    logharmonic_args(c)

    d = sub.add_parser("dynamics", help="critical points, fixed points and captures")
    d.add_argument("--family", choices=["bh", "sharp"], required=True)
    d.add_argument("--n", type=int, required=True)
    d.add_argument("--A", type=float, default=100.0)
    d.add_argument("--C", type=float, default=0.0)
    d.add_argument("--orbit", help="seed point for an orbit (complex literal or inf)")

    a = sub.add_parser("argcheck", help="argument-principle ledger of 1/conj(p) - b - z")
    a.add_argument("--p", required=True)
    a.add_argument("--b", default="0")
    a.add_argument("--radius", type=float, help="contour radius about 0 (default: encloses all)")

    s = sub.add_parser("sweep", help="sharpness-family sweep over (A, C)")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--A", required=True, help="start:stop:step, a comma list or one value")
    s.add_argument("--C", required=True, help="start:stop:step, a comma list or one value")
    s.add_argument("--max-iter", type=int, default=2000)
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--csv", help="also write rows as CSV")
    s.add_argument("--json", dest="json_path", help="also write rows as JSON")

    v = sub.add_parser("verify", help="run the acceptance battery")
    v.add_argument("--only", help="comma list of criterion numbers")
    return parser


def _bivar(args) -> BivarPoly:
    if getattr(args, "grid", None):
        return load_grid(args.grid)
    if not args.p or not args.q:
        raise UsageError("need --p and --q (or --grid)")
    p, q = parse_coeffs(args.p), parse_coeffs(args.q)
    w = parse_complex(args.w)
    if w == 0:
        return BivarPoly.from_logharmonic(p, q, 0)
    return BivarPoly.from_logharmonic(p * (1 / w), q, 1.0)


def cmd_zeros(args) -> dict:
    if args.grid:
        return solve_polyanalytic(load_grid(args.grid)).to_dict()
    if not args.p or not args.q:
        raise UsageError("need --p and --q (or --grid)")
    rep = solve_logharmonic(parse_coeffs(args.p), parse_coeffs(args.q), parse_complex(args.w))
    return rep.to_dict()


def cmd_resultant(args) -> dict:
    P = _bivar(args)
    rep = compute_resultant(P, P.conj_pair(), args.method)
    return {
        "resultant_coeffs": [complex(c) for c in rep.resultant.coeffs],
        "degree": rep.resultant.degree,
        "degree_bound": rep.degree_bound,
        "identically_zero": rep.identically_zero,
        "method_agreement": rep.method_agreement,
    }


def cmd_coprime(args) -> dict:
    P = _bivar(args)
    return {"coprime": is_coprime(P, P.conj_pair())}


def cmd_dynamics(args) -> dict:
    if args.family == "bh":
        r = ad.extremal_family(args.n)
    else:
        r = ad.sharpness_family(args.n, args.A, args.C)
    report = ad.fatou_check(r)
    fps = ad.fixed_points(r)
    out = report.to_dict()
    out = {
        "critical_points": out["critical_points"],
        "fixed_points": [f.to_dict() for f in fps],
        "captures": out["captures"],
        "attracting_count": out["attracting_count"],
        "attracting_bound": out["attracting_bound"],
    }
    if args.orbit:
        orbit = ad.iterate_antirational(r, _point(args.orbit))
        out["orbit"] = {
            "status": orbit.status,
            "period": orbit.period,
            "points": [x.to_dict() for x in orbit.points],
        }
    return out


def cmd_argcheck(args) -> dict:
    p = parse_coeffs(args.p)
    b = parse_complex(args.b)
    C = Contour(0j, args.radius) if args.radius else None
    return ledger(p, b, C).to_dict()


def cmd_sweep(args) -> list:
    spec = SweepSpec(args.n, parse_range(args.A), parse_range(args.C), args.max_iter)
    rows = run_sweep(spec, jobs=args.jobs)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(rows_to_csv(rows))
    if args.json_path:
        write_json(rows, args.json_path)
    return [r.to_dict() for r in rows]


def resolve_seed(flag: Optional[int]) -> int:
    if flag is not None:
        return flag
    env = os.environ.get("VALENCE_LAB_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"VALENCE_LAB_SEED is not an integer: {env!r}") from None
    return DEFAULT_SEED


COMMANDS = {
    "zeros": cmd_zeros,
    "resultant": cmd_resultant,
    "coprime": cmd_coprime,
    "dynamics": cmd_dynamics,
    "argcheck": cmd_argcheck,
    "sweep": cmd_sweep,
}


def _settings(args) -> Settings:
    base = load_settings(args.config) if args.config else Settings()
    changes = dict(_set_pair(t) for t in args.set)
    try:
        return base.replace(**changes) if changes else base
    except TypeError as exc:
        raise UsageError(f"unknown setting in --set: {exc}") from None


def _attach_negative_values(argv: Sequence[str]) -> list[str]:
    """Rewrite ``--p -1,0,3`` as ``--p=-1,0,3`` so values may start with a minus sign."""
    out: list[str] = []
    for tok in argv:
        prev = out[-1] if out else ""
        if (
            prev.startswith("--") and "=" not in prev
            and len(tok) > 1 and tok[0] == "-" and (tok[1].isdigit() or tok[1] in ".i")
        ):
            out[-1] = f"{prev}={tok}"
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = build_parser().parse_args(_attach_negative_values(argv))
        settings = _settings(args)
        seed = resolve_seed(args.seed)
        with use_settings(settings):
            if args.command == "verify":
                only = _int_list(args.only) if args.only else None
                results = verify_all(seed, only)
                ok = all(r.passed for r in results)
                sys.stdout.write(dumps({
                    "seed": seed,
                    "passed": ok,
                    "criteria": [r.to_dict() for r in results],
                }) + "\n")
                return 0 if ok else 1
            out = COMMANDS[args.command](args)
        sys.stdout.write(dumps(out) + "\n")
        return 0
    except UsageError as exc:
        print(f"valencelab: usage error: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"valencelab: usage error: {exc} (token {exc.token!r})", file=sys.stderr)
        return 2
    except (ValenceError, ValueError, OSError) as exc:
        msg = str(exc).replace("\n", " ")
        print(f"valencelab: error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
