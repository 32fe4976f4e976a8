"""Command-line front end.

    torus-cs overlap --l 0,0 --alpha 0,0 --h 0,0 --beta 0,0 --sector 0,0
    torus-cs expect --l 0.25,0.25 --l 1,1 --sector 0,h
    torus-cs density --l 1,1 --alpha 3.14159265359,1.0471975512 --n1 256 --n2 256 --out fig.csv
    torus-cs wavefunction --l 1,1 --phi 0,0 --phi 3.14,1 --rho 0.5
    torus-cs verify [--json] [--inject-fault]

Exit status: 0 ok, 1 failed verification, 2 bad arguments.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Sequence

import numpy as np

from . import circle_cs, quasiperiodic_bc as qbc, torus_cs as tcs
from .embedding_reps import EmbeddedTorusGeometry
from .theta_engine import DEFAULT_EPS, inject_theta3_fault
from .verify import run_checks

TOL_ENV = "TORUS_CS_TOL"
PGM_MAX = 65535


class UsageError(Exception):
    pass


def _floats(text: str, n: int = 2) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
    if len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {text!r}")
    return vals


def _sector(text: str) -> tcs.TorusSector:
    try:
        return tcs.TorusSector.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def default_tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    return float(raw) if raw else DEFAULT_EPS


class Formatter:
    def __init__(self, digits: int):
        self.digits = digits

    def __call__(self, x: float) -> str:
        return f"{float(x):.{self.digits}g}"


def _add_common(p: argparse.ArgumentParser, phase_point: bool = True):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--sector", type=_sector, help="one of 0,0 | 0,h | h,0 | h,h (default 0,0)")
    g.add_argument("--j0", type=_floats, help="general boundary label j01,j02 in [0,1)")
    if phase_point:
        p.add_argument("--l", type=_floats, default=(0.0, 0.0), help="angular momenta l1,l2")
        p.add_argument("--alpha", type=_floats, default=(0.0, 0.0), help="angles alpha1,alpha2")
    p.add_argument("--degrees", action="store_true", help="angles on input are in degrees")
    p.add_argument("--tol", type=float, default=None,
                   help=f"theta truncation tolerance (default ${TOL_ENV} or {DEFAULT_EPS})")
    p.add_argument("--precision", type=int, default=12, help="significant digits printed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="torus-cs", description="Coherent states on a circle and a torus.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("overlap", help="<l,alpha|h,beta>")
    _add_common(p)
    p.add_argument("--h", type=_floats, default=(0.0, 0.0), help="momenta of the ket")
    p.add_argument("--beta", type=_floats, default=(0.0, 0.0), help="angles of the ket")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("expect", help="table of <J_k>, <U_k> and the classical error law")
    _add_common(p, phase_point=False)
    p.add_argument("--l", type=_floats, action="append", help="l1,l2 (repeatable)")
    p.add_argument("--alpha", type=_floats, default=(0.0, 0.0))
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("density", help="coordinate probability density grid")
    _add_common(p)
    p.add_argument("--n1", type=int, default=256)
    p.add_argument("--n2", type=int, default=256)
    p.add_argument("--format", choices=("csv", "pgm"), default=None,
                   help="output format (default from --out suffix, else csv)")
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("wavefunction", help="<phi|l,alpha> at given points")
    _add_common(p)
    p.add_argument("--phi", type=_floats, action="append", help="phi1,phi2 (repeatable)")
    p.add_argument("--rho", type=float, default=None,
                   help="also print the embedded-torus wavefunction for r/R = rho")

    p = sub.add_parser("verify", help="run the closed-form vs brute-force checks")
    p.add_argument("--json", action="store_true")
    p.add_argument("--inject-fault", action="store_true",
                   help="debug: perturb theta_3 by a relative 1e-6 during the run")
    return parser


def _angles(args, values):
    return tuple(math.radians(v) for v in values) if args.degrees else tuple(values)


def _j0_of(args) -> tuple[tuple[float, float], bool]:
    """(j0, symmetric?) from --sector / --j0."""
    if args.j0 is not None:
        j0 = qbc.as_j0(args.j0)
        return j0, False
    sector = args.sector or tcs.SYMMETRIC_SECTORS[0]
    return sector.j0, True


def _tol(args) -> float:
    return args.tol if args.tol is not None else default_tolerance()


def cmd_overlap(args, out) -> int:
    fmt = Formatter(args.precision)
    eps = _tol(args)
    z = tcs.TorusPhasePoint(args.l, _angles(args, args.alpha))
    w = tcs.TorusPhasePoint(args.h, _angles(args, args.beta))
    j0, symmetric = _j0_of(args)
    if symmetric:
        val = tcs.overlap(z, w, tcs.TorusSector(*j0), eps)
    else:
        val = qbc.overlap_general(z, w, j0, eps)
    record = {"re": val.real, "im": val.imag, "abs": abs(val), "arg": math.atan2(val.imag, val.real)}
    if args.json:
        out.write(json.dumps({k: float(fmt(v)) for k, v in record.items()}) + "\n")
    else:
        for k, v in record.items():
            out.write(f"{k}={fmt(v)}\n")
    return 0


def expect_rows(points, alpha, j0, symmetric: bool, eps: float) -> list[dict]:
    rows = []
    for l in points:
        p = tcs.TorusPhasePoint(l, alpha)
        if symmetric:
            sector = tcs.TorusSector(*j0)
            J = tcs.expect_J(p.l, sector, eps)
            U = tcs.expect_U(p, sector, eps)
            rel = tcs.relative_expect_U(p, sector, eps)
        else:
            J = qbc.expect_J_general(p.l, j0, eps)
            U = qbc.expect_U_general(p, j0, eps)
            rel = qbc.relative_expect_U_general(p, j0, eps)
        for k in range(2):
            rows.append({
                "k": k + 1,
                "l": p.l[k],
                "alpha": p.alpha[k],
                "J": J[k],
                "deviation": p.l[k] - J[k],
                "law": float(circle_cs.classical_error_law(p.l[k], j0[k])),
                "U_abs": abs(U[k]),
                "U_arg": math.atan2(U[k].imag, U[k].real),
                "relU_re": rel[k].real,
                "relU_im": rel[k].imag,
            })
    return rows


def cmd_expect(args, out) -> int:
    fmt = Formatter(args.precision)
    j0, symmetric = _j0_of(args)
    points = args.l or [(0.0, 0.0)]
    rows = expect_rows(points, _angles(args, args.alpha), j0, symmetric, _tol(args))
    if args.json:
        out.write(json.dumps([{k: (v if k == "k" else float(fmt(v))) for k, v in r.items()}
                              for r in rows]) + "\n")
        return 0
    cols = list(rows[0])
    out.write("\t".join(cols) + "\n")
    for r in rows:
        out.write("\t".join(str(r[c]) if c == "k" else fmt(r[c]) for c in cols) + "\n")
    return 0


def density_grid(args) -> tcs.DensityGrid:
    p = tcs.TorusPhasePoint(args.l, _angles(args, args.alpha))
    j0, symmetric = _j0_of(args)
    eps = _tol(args)
    if symmetric:
        return tcs.density(p, tcs.TorusSector(*j0), args.n1, args.n2, args.workers, eps)
    return qbc.density_general(p, j0, args.n1, args.n2, args.workers, eps)


def _header_comment(args, j0) -> str:
    return (f"# phi_k = 2*pi*m/n_k, m = 0..n_k-1; rows phi1 (slow), phi2 (fast); "
            f"n1={args.n1} n2={args.n2} l={args.l[0]!r},{args.l[1]!r} "
            f"alpha={args.alpha[0]!r},{args.alpha[1]!r}{' deg' if args.degrees else ''} "
            f"j0={j0[0]!r},{j0[1]!r}\n")


def write_density_csv(grid: tcs.DensityGrid, fh, fmt: Formatter, comment: str):
    fh.write(comment)
    fh.write("phi1,phi2,p\n")
    phi1 = [fmt(x) for x in grid.phi1]
    phi2 = [fmt(x) for x in grid.phi2]
    for m1 in range(grid.n1):
        row = grid.values[m1]
        fh.write("".join(f"{phi1[m1]},{phi2[m2]},{fmt(row[m2])}\n" for m2 in range(grid.n2)))


def write_density_pgm(grid: tcs.DensityGrid, fh, comment: str):
    scaled = np.rint(grid.values / grid.values.max() * PGM_MAX).astype(np.int64)
    fh.write("P2\n")
    fh.write(comment)
    fh.write(f"{grid.n2} {grid.n1}\n{PGM_MAX}\n")
    for row in scaled:
        fh.write(" ".join(str(int(v)) for v in row) + "\n")


def cmd_density(args, out) -> int:
    fmt = Formatter(args.precision)
    grid = density_grid(args)
    j0, _ = _j0_of(args)
    fmt_name = args.format
    if fmt_name is None:
        fmt_name = "pgm" if args.out.endswith(".pgm") else "csv"
    comment = _header_comment(args, j0)

    def emit(fh):
        if fmt_name == "csv":
            write_density_csv(grid, fh, fmt, comment)
        else:
            write_density_pgm(grid, fh, comment)

    if args.out == "-":
        emit(out)
        info = sys.stderr
    else:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            emit(fh)
        info = out
    m1, m2 = grid.argmax()
    phi1, phi2 = grid.argmax_phi()
    info.write(f"argmax m1={m1} m2={m2} phi1={fmt(phi1)} phi2={fmt(phi2)} "
               f"peak={fmt(grid.values[m1, m2])}\n")
    info.write(f"mean={fmt(grid.mean())}\n")
    return 0


def cmd_wavefunction(args, out) -> int:
    fmt = Formatter(args.precision)
    eps = _tol(args)
    p = tcs.TorusPhasePoint(args.l, _angles(args, args.alpha))
    j0, symmetric = _j0_of(args)
    geom = EmbeddedTorusGeometry.from_rho(args.rho) if args.rho is not None else None
    cols = ["phi1", "phi2", "re", "im", "abs"] + (["re_tilde", "im_tilde"] if geom else [])
    out.write("\t".join(cols) + "\n")
    for phi in args.phi or [(0.0, 0.0)]:
        phi = _angles(args, phi)
        if symmetric:
            val = complex(tcs.position_wavefunction(p, phi, tcs.TorusSector(*j0), eps))
        else:
            val = complex(qbc.wavefunction_general(p, phi, j0, eps))
        row = [phi[0], phi[1], val.real, val.imag, abs(val)]
        if geom:
            tilde = val / math.sqrt(float(geom.weight(phi[1])))
            row += [tilde.real, tilde.imag]
        out.write("\t".join(fmt(x) for x in row) + "\n")
    return 0


def cmd_verify(args, out) -> int:
    if args.inject_fault:
        with inject_theta3_fault(1e-6):
            results = run_checks()
    else:
        results = run_checks()
    if args.json:
        out.write(json.dumps([
            {"name": r.name, "max_error": r.max_error, "tolerance": r.tolerance, "passed": r.passed}
            for r in results
        ]) + "\n")
    else:
        for r in results:
            out.write(r.line() + "\n")
    return 0 if all(r.passed for r in results) else 1


COMMANDS = {
    "overlap": cmd_overlap,
    "expect": cmd_expect,
    "density": cmd_density,
    "wavefunction": cmd_wavefunction,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (ValueError, ArithmeticError) as e:
        sys.stderr.write(f"torus-cs: error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
