"""Command-line workbench.

Usage::

    isodeform family scan --a 1,2,3 --b 0,1,0 --samples 65 --format csv
    isodeform isospec check A.json B.json --tol 1e-9 [--exact]
    isodeform equiv check A.json B.json [--lattice L.json] [--seed 42]
    isodeform scal extremes P.json
    isodeform scal at P.json --x 0,0,0,0,1,0
    isodeform holonomy P.json --x 1,0,0,0,0,0 --y 0,0,0,0,1,0
    isodeform genericity P.json
    isodeform dimension-bound --m 6
    isodeform lattice autos L.json

Pencil files hold either ``{"m", "k", "J": [matrix, ...]}`` or a family
record ``{"a": [...], "b": [...]}`` with an optional ``"u"``.  Exit codes:
0 on success, 1 when a verdict contradicts ``--expect``, 2 on bad input.
The default search seed can be set with the ISODEFORM_SEED environment
variable.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import boundary, equiv, family, isospec
from .matcore import ShapeError, matrix_from_json
from .nilalg import SkewPencil, center_reduced, scal_ambient

SEED_ENV = "ISODEFORM_SEED"
SCAN_HEADER = ["u", "b12", "b13", "b23", "e1", "e2", "e3", "e4", "e5", "e6",
               "scal_ambient", "scal_min", "scal_max", "isospec_residual"]


class InputError(Exception):
    pass


def fmt(x) -> str:
    return format(float(x) + 0.0, ".17g")


def dump_json(obj) -> str:
    """JSON text with every float written to 17 significant digits."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dump_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dump_json(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return dump_json(obj.tolist())
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    return json.dumps(str(obj))


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"expected comma-separated numbers, got {text!r}") from None


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from None


def load_pencil(path: str) -> SkewPencil:
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise InputError(f"{path}: expected a JSON object")
    if "J" in obj:
        return SkewPencil.from_json(obj)
    if "a" in obj and "b" in obj:
        params = family.Example8Params.from_json(obj)
        return family.family_pencil(params, float(obj.get("u", 0.0)))
    raise InputError(f"{path}: neither a pencil nor a family record")


def load_pencil_exact(path: str) -> list:
    obj = _read_json(path)
    if "J" not in obj:
        raise InputError(f"{path}: exact mode needs an explicit pencil with rational entries")
    return [matrix_from_json(M, exact=True) for M in obj["J"]]


def load_lattice(path: str | None, k: int) -> equiv.LatticeBasis:
    if path is None:
        return equiv.LatticeBasis.standard(k)
    return equiv.LatticeBasis.from_json(_read_json(path))


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 42
    try:
        return int(env)
    except ValueError:
        raise InputError(f"{SEED_ENV} must be an integer, got {env!r}") from None


def _emit(record: dict, fmt_: str, out) -> None:
    if fmt_ == "json":
        out.write(dump_json(record) + "\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["key", "value"])
    for key, val in record.items():
        if isinstance(val, (list, tuple, np.ndarray)):
            val = ";".join(fmt(v) for v in np.ravel(val))
        elif isinstance(val, (float, np.floating)):
            val = fmt(val)
        w.writerow([key, val])


def _check_expect(expect: str | None, actual: str) -> int:
    if expect is None:
        return 0
    return 0 if expect.lower() == actual.lower() else 1


# -- subcommands ----------------------------------------------------------------


def scan_row(params: family.Example8Params, u: float) -> list[float]:
    base = params.pencil()
    q = family.deform(params, u)
    p = q.pencil()
    eigs = equiv.ric_spectrum_invariant(p)
    ext = boundary.scal_extremes(p)
    res = isospec.pencil_isospectral(base, p).max_residual
    return [u, *q.b, *eigs, scal_ambient(p), ext.min, ext.max, res]


def cmd_family_scan(args, out) -> int:
    if args.family:
        params = family.Example8Params.from_json(_read_json(args.family))
    else:
        params = family.Example8Params(tuple(_floats(args.a)), tuple(_floats(args.b)))
    I = family.interval_I(params)
    grid = I.grid(args.samples)
    if args.workers > 1:
        with ThreadPoolExecutor(args.workers) as pool:
            rows = list(pool.map(lambda u: scan_row(params, u), grid))
    else:
        rows = [scan_row(params, u) for u in grid]
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(SCAN_HEADER)
        for r in rows:
            w.writerow([fmt(v) for v in r])
    else:
        out.write(dump_json([dict(zip(SCAN_HEADER, r)) for r in rows]) + "\n")
    return 0


def cmd_isospec_check(args, out) -> int:
    if args.exact:
        report = isospec.pencil_isospectral_exact(load_pencil_exact(args.A), load_pencil_exact(args.B))
    else:
        report = isospec.pencil_isospectral(
            load_pencil(args.A), load_pencil(args.B), tol=args.tol, samples=args.samples
        )
    _emit(
        {
            "verdict": report.verdict.value,
            "max_residual": report.max_residual,
            "witness_z": list(report.witness_z) if report.witness_z else None,
            "mode": report.mode,
            "samples": report.samples,
        },
        args.format,
        out,
    )
    return _check_expect(args.expect, report.verdict.value)


def cmd_equiv_check(args, out) -> int:
    pA, pB = load_pencil(args.A), load_pencil(args.B)
    L = load_lattice(args.lattice, pA.k)
    v = equiv.l_equivalence(pA, pB, L, seed=_seed(args), tol=args.tol)
    rec = {
        "state": v.state.value,
        "restarts": v.restarts,
        "best_residual": v.best_residual,
        "certificate_error": v.certificate_error,
        "A": v.A,
        "C": v.C,
        "witness": None,
    }
    if v.witness is not None:
        rec["witness"] = {
            "name": v.witness.name,
            "value_a": list(v.witness.value_a),
            "value_b": list(v.witness.value_b),
            "gap": v.witness.gap,
        }
    if args.format == "csv":
        rec["witness"] = v.witness.name if v.witness else None
    _emit(rec, args.format, out)
    return _check_expect(args.expect, v.state.value)


def cmd_scal_extremes(args, out) -> int:
    p = load_pencil(args.pencil)
    e = boundary.scal_extremes(p)
    _emit({"min": e.min, "max": e.max, "argmin_x": e.argmin_x, "argmax_x": e.argmax_x}, args.format, out)
    return 0


def cmd_scal_at(args, out) -> int:
    p = load_pencil(args.pencil)
    z = _floats(args.z) if args.z else [0.0] * p.k
    r = boundary.scal_via_shape(p, boundary.BoundaryPoint(_floats(args.x), z))
    _emit(
        {"scal_prop6": r.scal_prop6, "scal_shape": r.scal_shape, "ambient": r.ambient, "ric_xx": r.ric_xx},
        args.format,
        out,
    )
    return 0


def cmd_holonomy(args, out) -> int:
    p = load_pencil(args.pencil)
    d = boundary.holonomy_displacement(p, _floats(args.x), _floats(args.y))
    _emit({"displacement": d, "closed": bool(np.all(d == 0.0))}, args.format, out)
    return 0


def cmd_genericity(args, out) -> int:
    p = load_pencil(args.pencil)
    dim = equiv.commutant_dimension(p)
    _emit(
        {"commutant_dimension": dim, "generic": dim == 1, "center_reduced": center_reduced(p)},
        args.format,
        out,
    )
    return 0


def cmd_dimension_bound(args, out) -> int:
    out.write(f"{family.dimension_bound(args.m)}\n")
    return 0


def cmd_lattice_autos(args, out) -> int:
    L = equiv.LatticeBasis.from_json(_read_json(args.lattice))
    autos = equiv.lattice_automorphisms(L)
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["index"] + [f"c{i}{j}" for i in range(L.k) for j in range(L.k)])
        for n, C in enumerate(autos):
            w.writerow([n] + [fmt(v) for v in C.ravel()])
    else:
        out.write(dump_json({"count": len(autos), "automorphisms": autos}) + "\n")
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="json")

    parser = argparse.ArgumentParser(prog="isodeform", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    fam = sub.add_parser("family").add_subparsers(dest="action", required=True)
    scan = fam.add_parser("scan", help="scan the deformation interval")
    scan.add_argument("--format", choices=["csv", "json"], default="csv")
    scan.add_argument("--a", default="1,2,3")
    scan.add_argument("--b", default="0,1,0")
    scan.add_argument("--family", help="family JSON instead of --a/--b")
    scan.add_argument("--samples", type=int, default=65)
    scan.add_argument("--workers", type=int, default=1)
    scan.set_defaults(func=cmd_family_scan)

    iso = sub.add_parser("isospec").add_subparsers(dest="action", required=True)
    chk = iso.add_parser("check", parents=[common], help="decide isospectrality of two pencils")
    chk.add_argument("A")
    chk.add_argument("B")
    chk.add_argument("--tol", type=float, default=1e-9)
    chk.add_argument("--samples", type=int)
    chk.add_argument("--exact", action="store_true")
    chk.add_argument("--expect", choices=["isospectral", "notisospectral"])
    chk.set_defaults(func=cmd_isospec_check)

    eq = sub.add_parser("equiv").add_subparsers(dest="action", required=True)
    echk = eq.add_parser("check", parents=[common], help="decide L-equivalence of two pencils")
    echk.add_argument("A")
    echk.add_argument("B")
    echk.add_argument("--lattice")
    echk.add_argument("--seed", type=int)
    echk.add_argument("--tol", type=float, default=1e-9)
    echk.add_argument("--expect", choices=["equivalent", "inequivalent", "undecided"])
    echk.set_defaults(func=cmd_equiv_check)

    scal = sub.add_parser("scal").add_subparsers(dest="action", required=True)
    ext = scal.add_parser("extremes", parents=[common])
    ext.add_argument("pencil")
    ext.set_defaults(func=cmd_scal_extremes)
    at = scal.add_parser("at", parents=[common])
    at.add_argument("pencil")
    at.add_argument("--x", required=True)
    at.add_argument("--z")
    at.set_defaults(func=cmd_scal_at)

    hol = sub.add_parser("holonomy", parents=[common])
    hol.add_argument("pencil")
    hol.add_argument("--x", required=True)
    hol.add_argument("--y", required=True)
    hol.set_defaults(func=cmd_holonomy)

    gen = sub.add_parser("genericity", parents=[common])
    gen.add_argument("pencil")
    gen.set_defaults(func=cmd_genericity)

    db = sub.add_parser("dimension-bound")
    db.add_argument("--m", type=int, required=True)
    db.set_defaults(func=cmd_dimension_bound)

    lat = sub.add_parser("lattice").add_subparsers(dest="action", required=True)
    autos = lat.add_parser("autos", parents=[common])
    autos.add_argument("lattice")
    autos.set_defaults(func=cmd_lattice_autos)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    buf = io.StringIO()
    try:
        code = args.func(args, buf)
    except (InputError, ShapeError, ValueError, KeyError, TypeError) as exc:
        print(f"isodeform: error: {exc}", file=sys.stderr)
        return 2
    out.write(buf.getvalue())
    return code


def main() -> None:
    sys.exit(run())
