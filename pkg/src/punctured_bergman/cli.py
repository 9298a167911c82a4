"""Command-line front end.

Scalar and report commands print a JSON envelope; ``grid`` prints CSV.
Exit codes: 0 ok, 1 a verification check failed, 2 usage error,
3 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Any, Sequence

import numpy as np

from .exceptions import AccuracyCap, DomainError, InvalidStabilizer, TruncationFailure
from .gaussian import RescaledPoint, f_p, sup_scan
from .kernel import (
    Method,
    PuncturedPoint,
    SeriesConfig,
    density,
    kernel_offdiag,
    kernel_weighted_modulus,
)
from .orbifold import StabilizerSpec, orbifold_local_density
from .verify import SUITES, run_suite

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
_METHODS = ("auto", "series", "partial-fraction")


class UsageError(Exception):
    pass


def _num(v: Any) -> Any:
    """JSON-safe number: non-finite floats become strings."""
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    return v


def _clean(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _num(obj.item())
    return _num(obj)


def _envelope(command: str, params: dict, rows: list, checks: list | None = None) -> dict:
    checks = checks or []
    code = EXIT_OK if all(c["pass"] for c in checks) else EXIT_CHECK
    return {"command": command, "params": params, "rows": rows, "checks": checks, "exit_code": code}


def _cfg(args) -> SeriesConfig:
    try:
        return SeriesConfig(method=Method(args.method), rel_tol=args.rel_tol)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return v


def _density_row(d) -> dict:
    return {
        "value": d.linear,
        "log_value": d.log,
        "method_used": d.method_used.value,
        "terms_used": d.terms_used,
        "tail_bound": d.tail_bound,
    }


def cmd_density(args) -> dict:
    if args.p < 2:
        raise UsageError("--p must be >= 2")
    try:
        pt = PuncturedPoint(args.u) if args.u is not None else PuncturedPoint.from_abs_z(args.abs_z)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    d = density(pt, args.p, _cfg(args))
    params = {"p": args.p, "u": pt.u, "method": args.method, "rel_tol": args.rel_tol}
    return _envelope("density", params, [_density_row(d)])


def cmd_grid(args) -> list[list]:
    try:
        ps = sorted({int(s) for s in args.p_list.split(",") if s.strip()})
    except ValueError:
        raise UsageError(f"--p-list must be comma-separated integers, got {args.p_list!r}")
    if not ps or min(ps) < 1:
        raise UsageError("--p-list needs integers >= 1")
    if not 0.0 < args.x_min < args.x_max < 1.0:
        raise UsageError("need 0 < --x-min < --x-max < 1")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    cfg = _cfg(args)
    xs = np.linspace(args.x_min, args.x_max, args.points)
    rows = []
    for p in ps:
        shift = 1.5 * math.log(2.0 * math.pi / p) if args.scaled else 0.0
        for x in xs:
            v = f_p(RescaledPoint(float(x)), p, cfg).value.scale(shift).to_linear()
            rows.append([float(x), p, v])
    return rows


def cmd_sup(args) -> dict:
    if args.p < 2:
        raise UsageError("--p must be >= 2")
    r = sup_scan(args.p, _cfg(args))
    return _envelope("sup", {"p": args.p, "method": args.method}, [r.to_dict()])


def cmd_offdiag(args) -> dict:
    if args.p < 2:
        raise UsageError("--p must be >= 2")
    try:
        x = PuncturedPoint(args.ux, 0.0)
        y = PuncturedPoint(args.uy, -args.dtheta)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    cfg = _cfg(args)
    mod, phase = kernel_offdiag(x, y, args.p, cfg)
    w = kernel_weighted_modulus(x, y, args.p, cfg)
    row = {"value": w.to_linear(), "log_value": w.log_abs, "log_beta_modulus": mod.log_abs, "phase": phase}
    params = {"p": args.p, "ux": args.ux, "uy": args.uy, "dtheta": args.dtheta, "method": args.method}
    return _envelope("offdiag", params, [row])


def cmd_orbifold(args) -> dict:
    if args.p < 1 or args.order < 1:
        raise UsageError("--p and --order must be >= 1")
    try:
        if args.angles:
            angles = tuple(float(a) for a in args.angles.split(","))
            spec = StabilizerSpec(args.order, angles)
        else:
            spec = StabilizerSpec.cyclic(args.order)
        v = orbifold_local_density(args.abs_z, args.p, spec)
    except (InvalidStabilizer, DomainError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    params = {"p": args.p, "order": args.order, "abs_z": args.abs_z, "angles": list(spec.angles)}
    return _envelope("orbifold", params, [{"value": v.value, "imag_residual": v.imag_residual}])


def cmd_verify(args) -> dict:
    checks = [c.to_dict() for c in run_suite(args.suite, args.fast)]
    return _envelope("verify", {"suite": args.suite, "fast": args.fast}, [], checks)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="punctured-bergman",
        description="Bergman density of the punctured disc with the Poincare metric.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def method_flags(sp):
        sp.add_argument("--method", choices=_METHODS, default="auto")
        sp.add_argument("--rel-tol", type=float, default=1e-12)

    sp = sub.add_parser("density", help="density B_p at one point")
    sp.add_argument("--p", type=_positive_int, required=True)
    where = sp.add_mutually_exclusive_group(required=True)
    where.add_argument("--abs-z", type=float)
    where.add_argument("--u", type=float)
    method_flags(sp)

    sp = sub.add_parser("grid", help="CSV of f_p on an x grid")
    sp.add_argument("--p-list", required=True)
    sp.add_argument("--x-min", type=float, required=True)
    sp.add_argument("--x-max", type=float, required=True)
    sp.add_argument("--points", type=_positive_int, required=True)
    sp.add_argument("--scaled", action="store_true", help="multiply by (2 pi / p)^(3/2)")
    method_flags(sp)

    sp = sub.add_parser("sup", help="supremum of B_p over the disc")
    sp.add_argument("--p", type=_positive_int, required=True)
    method_flags(sp)

    sp = sub.add_parser("offdiag", help="pointwise norm of the off-diagonal kernel")
    sp.add_argument("--p", type=_positive_int, required=True)
    sp.add_argument("--ux", type=float, required=True)
    sp.add_argument("--uy", type=float, required=True)
    sp.add_argument("--dtheta", type=float, default=0.0, help="arg(y) - arg(x)")
    method_flags(sp)

    sp = sub.add_parser("orbifold", help="leading density at an orbifold point")
    sp.add_argument("--p", type=_positive_int, required=True)
    sp.add_argument("--order", type=_positive_int, required=True)
    sp.add_argument("--abs-z", type=float, required=True)
    sp.add_argument("--angles", help="comma-separated action angles in radians (default: cyclic)")

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("--suite", choices=("all", *SUITES), required=True)
    sp.add_argument("--fast", action="store_true")
    return ap


def _emit_json(env: dict, out) -> None:
    out.write(json.dumps(_clean(env), indent=2, ensure_ascii=False) + "\n")


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    handlers = {
        "density": cmd_density,
        "sup": cmd_sup,
        "offdiag": cmd_offdiag,
        "orbifold": cmd_orbifold,
        "verify": cmd_verify,
    }
    try:
        if args.command == "grid":
            rows = cmd_grid(args)
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["x", "p", "value"])
            for x, p, v in rows:
                w.writerow([repr(x), p, repr(v)])
            return EXIT_OK
        env = handlers[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TruncationFailure, AccuracyCap, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit_json(env, out)
    return env["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
