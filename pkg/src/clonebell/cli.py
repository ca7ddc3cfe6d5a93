"""Command-line front end.

Exit codes: 0 success (``certify``: violation found), 2 invalid arguments,
3 ``certify`` found no violation, 4 enumeration cap exceeded, 1 I/O errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from . import bell, certify
from .qstate import CapacityError

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_NOT_VIOLATED = 3
EXIT_CAPACITY = 4

OUT_DIR_ENV = "CLONEBELL_OUT_DIR"
SWEEP_HEADER = ["n", "visibility", "xi", "kind", "value", "threshold", "violated"]


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return f"{x:.17g}"


def _angle(args, value):
    return math.radians(value) if args.degrees else value


def _resolve_out(args, default_name: str):
    if args.out:
        return args.out
    out_dir = os.environ.get(OUT_DIR_ENV)
    if out_dir:
        return os.path.join(out_dir, default_name)
    return None


def _emit(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _table(rows, header, fmt_name) -> str:
    if fmt_name == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _grid(args, default: int) -> tuple[int, int]:
    g_xi = default if args.grid_xi is None else args.grid_xi
    g_v = default if args.grid_v is None else args.grid_v
    if g_xi < 2 or g_v < 2:
        raise UsageError("grid resolutions must be >= 2")
    return g_xi, g_v


def cmd_fig1(args) -> int:
    rows = certify.fig1_surface(*_grid(args, 101))
    _emit(_table(rows, ["xi", "visibility", "chsh_value"], args.format), _resolve_out(args, f"fig1.{args.format}"))
    return EXIT_OK


def cmd_certify(args) -> int:
    if args.n is None or args.visibility is None or args.xi is None:
        raise UsageError("certify needs --n, --visibility and --xi")
    xi = _angle(args, args.xi)
    report = certify.certify_no_cloning(args.n, args.visibility, xi, _angle(args, args.phi))
    doc = report.to_dict()
    if args.oracle:
        doc["oracle_value"] = certify.oracle_check(report)
    text = json.dumps(doc, indent=2) + "\n"
    sys.stdout.write(text)
    if args.out:
        _emit(text, args.out)
    return EXIT_OK if report.violated else EXIT_NOT_VIOLATED


def _load_spec(args) -> bell.InequalitySpec:
    if args.spec:
        with open(args.spec) as fh:
            return bell.InequalitySpec.from_document(json.load(fh), name=os.path.basename(args.spec))
    family = args.family
    if family == "chsh":
        return bell.chsh_spec()
    if args.n is None:
        raise UsageError(f"--family {family} needs --n")
    if family == "even":
        return bell.even_spec(args.n)
    if family == "odd":
        return bell.odd_spec(args.n)
    return bell.product_family_spec(args.n)


def cmd_lhv_bound(args) -> int:
    if not args.spec and not args.family:
        raise UsageError("lhv-bound needs --family or --spec")
    spec = _load_spec(args)
    res = bell.lhv_max(spec, jobs=args.jobs)
    doc = {
        "inequality": spec.name,
        "n": spec.n,
        "bound": str(res.value),
        "bound_float": float(res.value),
        "claimed_bound": str(spec.claimed_bound),
        "holds": res.value <= spec.claimed_bound,
        "strategies": res.strategies,
        "argmax_mask": res.mask,
        "argmax_strategy": [{str(k): v for k, v in sorted(p.items())} for p in res.strategy.values],
        "backend": res.backend,
    }
    text = json.dumps(doc, indent=2) + "\n"
    sys.stdout.write(text)
    if args.out:
        _emit(text, args.out)
    return EXIT_OK


def _sweep_row(point):
    n, V, xi = point
    rep = certify.certify_no_cloning(n, V, xi)
    return (n, V, xi, rep.kind.value, rep.value, rep.threshold, "true" if rep.violated else "false")


def _parse_ns(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out or min(out) < 2:
        raise UsageError(f"party counts must be >= 2: {text!r}")
    return out


def cmd_sweep(args) -> int:
    ns = _parse_ns(args.ns) if args.ns else ([args.n] if args.n else list(range(2, 7)))
    g_xi, g_v = _grid(args, 11)
    vs = certify.grid_points(0.0, 1.0, g_v)
    xis = certify.grid_points(0.0, math.pi, g_xi)
    points = [(n, V, xi) for n in ns for V in vs for xi in xis]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_sweep_row, points, chunksize=max(1, len(points) // (4 * args.jobs))))
    else:
        rows = [_sweep_row(p) for p in points]
    _emit(_table(rows, SWEEP_HEADER, args.format), _resolve_out(args, f"sweep.{args.format}"))
    return EXIT_OK


def cmd_optimize(args) -> int:
    if args.n is None or args.visibility is None or args.xi is None:
        raise UsageError("optimize needs --n, --visibility and --xi")
    kind = args.kind or certify.InequalityKind.for_party_count(args.n).value
    out = certify.optimize_violation(
        kind, args.n, args.visibility, _angle(args, args.xi), full=args.full,
        restarts=args.restarts, sweeps=args.sweeps, seed=args.seed, phi_cat=_angle(args, args.phi))
    doc = {
        "kind": kind, "n": args.n, "visibility": args.visibility, "xi": _angle(args, args.xi),
        "value": out.value, "family_value": out.family_value, "family_theta11": out.family_theta,
        "iterations": out.iterations, "converged": out.converged, "best_restart": out.restart,
        "settings": out.table.to_dict(),
    }
    text = json.dumps(doc, indent=2) + "\n"
    sys.stdout.write(text)
    if args.out:
        _emit(text, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--visibility", type=float)
    common.add_argument("--xi", type=float)
    common.add_argument("--phi", type=float, default=0.0, help="cat-state relative phase")
    common.add_argument("--grid-xi", type=int, help="xi grid points (fig1: 101, sweep: 11)")
    common.add_argument("--grid-v", type=int, help="visibility grid points (fig1: 101, sweep: 11)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out")
    common.add_argument("--oracle", action="store_true", help="cross-check with dense density matrices")
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--degrees", action="store_true", help="angles on the command line are in degrees")

    parser = argparse.ArgumentParser(prog="clonebell", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("fig1", parents=[common], help="CHSH violation surface over (xi, V)")
    p.set_defaults(func=cmd_fig1)
    p = sub.add_parser("certify", parents=[common], help="certify one (n, V, xi) point")
    p.set_defaults(func=cmd_certify)
    p = sub.add_parser("lhv-bound", parents=[common], help="exact classical bound by enumeration")
    p.add_argument("--family", choices=["chsh", "even", "odd", "product"])
    p.add_argument("--spec", help="JSON inequality document")
    p.set_defaults(func=cmd_lhv_bound)
    p = sub.add_parser("sweep", parents=[common], help="certification over an (n, V, xi) grid")
    p.add_argument("--ns", help="party counts, e.g. '2..6' or '2,4,6'")
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("optimize", parents=[common], help="maximize the violation over angles")
    p.add_argument("--kind", choices=[k.value for k in certify.InequalityKind])
    p.add_argument("--full", action="store_true", help="optimize every angle, not only the family")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--sweeps", type=int, default=200)
    p.set_defaults(func=cmd_optimize)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"clonebell: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (UsageError, ValueError) as exc:
        print(f"clonebell: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"clonebell: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
