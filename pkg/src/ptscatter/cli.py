"""``ptscatter`` command line: solve, scan, verify, coeffs.

Exit codes: 0 success, 1 I/O or validation error, 2 spectral singularity,
3 energy or phase outside the band, 4 a verify property failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import coefficients as coef
from . import verify as verify_mod
from .errors import (BandViolation, NearSingular, ScatteringError, SpectralSingularity,
                     UnsupportedM)
from .kernels import BACKEND
from .lattice import LatticePotential, make_potential, phase, phase_from_energy, sample_rectangular
from .matrix_solver import (DENOM_TOL, SINGULAR_TOL, STATUS_FALLBACK, STATUS_OK,
                            STATUS_SINGULAR, build_tmatrix, corner_inverse, solve, sweep)

EXIT_OK, EXIT_INPUT, EXIT_SINGULAR, EXIT_BAND, EXIT_VERIFY = 0, 1, 2, 3, 4

COLUMNS = ("phi", "E", "side", "reB", "imB", "reC", "imC", "absB2", "absC2",
           "re_alpha", "im_alpha", "re_beta", "im_beta", "detT", "status")
AMPLITUDE_COLUMNS = COLUMNS[3:9]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is taken by spectral singularities
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# -- input ----------------------------------------------------------------

def read_potential(path) -> LatticePotential:
    """Load ``{"h": .., "Z": [..], "Y": [..]}``."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{path}: expected a JSON object with keys h, Z, Y")
    missing = [k for k in ("h", "Z", "Y") if k not in data]
    if missing:
        raise UsageError(f"{path}: missing key(s) {', '.join(missing)}")
    for key in ("Z", "Y"):
        if not isinstance(data[key], list) or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in data[key]):
            raise UsageError(f"{path}: {key} must be a list of numbers")
    if not isinstance(data["h"], (int, float)) or isinstance(data["h"], bool):
        raise UsageError(f"{path}: h must be a number")
    return make_potential(data["h"], data["Z"], data["Y"])


def _floats(text, name):
    if text is None or text.strip() == "":
        return []
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"{name}: expected comma-separated numbers, got {text!r}") from exc


def parse_rect(text, h) -> LatticePotential:
    """``--rect z,y,M``: constant ``z + i y sign(k)`` on ``|k| <= M-1``."""
    parts = text.split(",")
    if len(parts) != 3:
        raise UsageError(f"--rect expects z,y,M, got {text!r}")
    try:
        z, y = float(parts[0]), float(parts[1])
        M = int(parts[2])
    except ValueError as exc:
        raise UsageError(f"--rect expects z,y,M, got {text!r}") from exc
    return sample_rectangular(h, M, z, y)


def potential_from_args(args) -> LatticePotential:
    if args.potential is not None:
        return read_potential(args.potential)
    return parse_rect(args.rect, args.h)


def _sides(flag):
    return ("left", "right") if flag == "both" else (flag,)


# -- output ---------------------------------------------------------------

def _num(x):
    return "" if x is None or not math.isfinite(x) else format(x, ".17g")


def make_row(phi, E, side, B, C, alpha, beta, detT, status) -> dict:
    """One output record; non-finite values become ``None``."""
    def real(x):
        x = float(x)
        return x + 0.0 if math.isfinite(x) else None  # + 0.0 folds -0 into 0

    row = {"phi": real(phi), "E": real(E), "side": side,
           "reB": real(B.real), "imB": real(B.imag), "reC": real(C.real), "imC": real(C.imag),
           "absB2": real(abs(B) ** 2), "absC2": real(abs(C) ** 2),
           "re_alpha": real(alpha.real), "im_alpha": real(alpha.imag),
           "re_beta": real(beta.real), "im_beta": real(beta.imag),
           "detT": real(detT.real), "status": status}
    if status == STATUS_SINGULAR:
        for key in AMPLITUDE_COLUMNS:
            row[key] = None
    return row


def sort_rows(rows):
    return sorted(rows, key=lambda r: (r["phi"], r["side"]))


def format_rows(rows, fmt) -> str:
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in rows:
            w.writerow([r[c] if c in ("side", "status") else _num(r[c]) for c in COLUMNS])
    else:
        for r in rows:
            buf.write(json.dumps({c: r[c] for c in COLUMNS}) + "\n")
    return buf.getvalue()


def write_output(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from exc


# -- commands -------------------------------------------------------------

def _fmt_c(z):
    return f"{z.real:+.17g} {z.imag:+.17g}i"


def cmd_solve(args):
    pot = potential_from_args(args)
    phi = phase(args.phi, pot.h) if args.phi is not None else phase_from_energy(args.energy, pot.h)
    tol = dict(singular_tol=args.tol_singular, denom_tol=args.tol_denom)
    rows, blocks, code = [], [], EXIT_OK
    for side in _sides(args.side):
        try:
            sol = solve(pot, phi, side, **tol)
        except SpectralSingularity as exc:
            print(f"[{side}] spectral singularity: {exc}", file=sys.stderr)
            nan = complex(math.nan, math.nan)
            try:
                c = corner_inverse(build_tmatrix(pot, phi), args.tol_singular)
                alpha, beta, det = c.alpha, c.beta, c.detT
            except ScatteringError:
                alpha = beta = det = nan
            rows.append(make_row(phi.phi, phi.E, side, nan, nan, alpha, beta, det,
                                 STATUS_SINGULAR))
            code = EXIT_SINGULAR
            continue
        nan = complex(math.nan, math.nan)
        alpha = sol.corners.alpha if sol.corners is not None else nan
        beta = sol.corners.beta if sol.corners is not None else nan
        det = sol.detT if sol.detT is not None else nan
        status = STATUS_FALLBACK if sol.fallback else STATUS_OK
        rows.append(make_row(phi.phi, phi.E, side, sol.B, sol.C, alpha, beta, det, status))
        lines = [f"side      {side}",
                 f"phi       {phi.phi:.17g}",
                 f"E         {phi.E:.17g}",
                 f"M         {pot.M}",
                 f"method    {sol.method}{' (fallback)' if sol.fallback else ''}",
                 f"B         {_fmt_c(sol.B)}",
                 f"C         {_fmt_c(sol.C)}",
                 f"|B|^2     {abs(sol.B) ** 2:.17g}",
                 f"|C|^2     {abs(sol.C) ** 2:.17g}",
                 f"alpha     {_fmt_c(alpha) if sol.corners is not None else 'n/a'}",
                 f"beta      {_fmt_c(beta) if sol.corners is not None else 'n/a'}",
                 f"detT      {_fmt_c(det) if sol.detT is not None else 'n/a'}"]
        ks, psi = sol.wavefunction(pot.M)
        lines.append("psi")
        lines.extend(f"  {k:+4d}  {_fmt_c(v)}" for k, v in zip(ks, psi))
        blocks.append("\n".join(lines))
    if blocks and not args.quiet:
        print("\n\n".join(blocks))
    if args.out is not None:
        write_output(format_rows(sort_rows(rows), args.format), args.out)
    return code


def phase_grid(phi_min, phi_max, steps):
    if steps < 1:
        raise UsageError(f"--steps must be >= 1, got {steps}")
    if not 0.0 < phi_min < phi_max < math.pi:
        raise UsageError(
            f"need 0 < phi_min < phi_max < pi, got {phi_min!r}, {phi_max!r}")
    if steps == 1:
        return np.array([phi_min])
    return np.linspace(phi_min, phi_max, steps)


def scan_rows(pot, phis, sides, singular_tol=SINGULAR_TOL, denom_tol=DENOM_TOL):
    rows = []
    E = 4.0 * np.sin(phis / 2.0) ** 2 / pot.h ** 2
    for side in sides:
        sw = sweep(pot, phis, side, singular_tol=singular_tol, denom_tol=denom_tol)
        for i in range(phis.size):
            rows.append(make_row(phis[i], E[i], side, sw.B[i], sw.C[i], sw.alpha[i],
                                 sw.beta[i], sw.detT[i], sw.status[i]))
    return sort_rows(rows)


def cmd_scan(args):
    pot = potential_from_args(args)
    phis = phase_grid(args.phi_min, args.phi_max, args.steps)
    rows = scan_rows(pot, phis, _sides(args.side), args.tol_singular, args.tol_denom)
    write_output(format_rows(rows, args.format), args.out)
    n_sing = sum(r["status"] == STATUS_SINGULAR for r in rows)
    n_fb = sum(r["status"] == STATUS_FALLBACK for r in rows)
    print(f"{len(rows)} rows ({n_sing} singular, {n_fb} fallback)", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args):
    reports = verify_mod.run_suite(seed=args.seed, samples=args.samples, max_m=args.max_m,
                                   fault=args.inject_fault)
    for r in reports:
        print(r.line())
    failed = [r for r in reports if not r.passed]
    if not failed:
        print(f"all {len(reports)} properties passed (seed={args.seed}, backend={BACKEND})")
        return EXIT_OK
    for r in failed:
        print(f"reproducer [{r.name}]: {json.dumps(r.reproducer, default=_jsonable)}")
    return EXIT_VERIFY


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    return str(x)


def _rel(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def cmd_coeffs(args):
    effective = args.Zt is not None
    Z = _floats(args.Zt if effective else args.Z, "--Zt" if effective else "--Z")
    Y = _floats(args.Y, "--Y")
    M = len(Z)
    if args.M is not None and args.M != M:
        raise UsageError(f"--M {args.M} disagrees with {M} coupling values")
    if M not in (2, 3, 4):
        raise UnsupportedM(f"coefficient tables exist for M = 2, 3, 4, not M={M}")
    phi = phase(args.phi)
    if effective:
        # Zt already contains 2 cos(phi); recover Z for the corner check
        pot = make_potential(1.0, np.asarray(Z) - phi.two_cos, Y)
        ec = coef.EffectiveCouplings(Z, Y)
    else:
        pot = make_potential(1.0, Z, Y)
        ec = coef.EffectiveCouplings.from_potential(pot, phi)
    det_n = coef.det_numeric(ec)
    gam_n = coef.gamma_numeric(ec)
    print(f"M={M}  phi={phi.phi:.17g}  Zt={ec.Zt.tolist()}  Y={ec.Y.tolist()}")
    print(f"{'quantity':<12}{'polynomial':>26}{'numeric':>26}{'rel.diff':>12}")

    def show(name, p, n):
        print(f"{name:<12}{p:>26.17g}{n:>26.17g}{_rel(p, n):>12.3e}")

    if M in (2, 3):
        det_p = coef.det_polynomial(ec)
        gam_p = coef.gamma_polynomial(ec)
        show("detT", det_p, det_n.real)
        show("Re gamma", gam_p.real, gam_n.real)
        show("Im gamma", gam_p.imag, gam_n.imag)
        try:
            c = corner_inverse(build_tmatrix(pot, phi))
            print(f"alpha        polynomial {_fmt_c(gam_p / det_p)}   corner {_fmt_c(c.alpha)}")
        except NearSingular:
            print("detT vanishes: T is singular, alpha undefined (gamma still finite)")
        return EXIT_OK

    show("detT (1+3)", coef.weak_coupling_M4_det(ec), det_n.real)
    g2 = coef.weak_coupling_M4_gamma(ec, 2)
    g4 = coef.weak_coupling_M4_gamma(ec, 4)
    show("Re gamma (2)", g2.real, gam_n.real)
    show("Im gamma (2)", g2.imag, gam_n.imag)
    show("Re gamma (4)", g4.real, gam_n.real)
    show("Im gamma (4)", g4.imag, gam_n.imag)
    print("truncation slopes of |full - partial| over eps = "
          + ", ".join(f"1/{round(1 / e)}" for e in coef.WEAK_EPS))
    checks = [
        ("detT", lambda e: coef.det_numeric(e).real, coef.weak_coupling_M4_det, 4.8),
        ("Re gamma (2)", lambda e: coef.gamma_numeric(e).real,
         lambda e: coef.weak_coupling_M4_gamma(e, 2).real, 3.8),
        ("Im gamma (2)", lambda e: coef.gamma_numeric(e).imag,
         lambda e: coef.weak_coupling_M4_gamma(e, 2).imag, 3.8),
    ]
    for name, full, part, bound in checks:
        try:
            slope, _ = coef.truncation_slope(full, part, ec)
        except ValueError as exc:
            print(f"  {name:<14} n/a ({exc})")
            continue
        mark = "ok" if slope >= bound else "BELOW"
        print(f"  {name:<14} slope {slope:6.3f}   bound {bound}   {mark}")
    return EXIT_OK


# -- parser ---------------------------------------------------------------

def _add_potential(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--potential", metavar="FILE",
                     help='JSON file {"h": .., "Z": [..], "Y": [..]}')
    src.add_argument("--rect", metavar="z,y,M",
                     help="constant z + i y sign(k) on the M sites |k| <= M-1 (scaled by h^2)")
    p.add_argument("--h", type=float, default=1.0, help="lattice step for --rect (default 1)")


def _add_tolerances(p):
    p.add_argument("--tol-singular", type=float, default=SINGULAR_TOL, metavar="TOL",
                   help=f"relative |det T| threshold for the fallback (default {SINGULAR_TOL:g})")
    p.add_argument("--tol-denom", type=float, default=DENOM_TOL, metavar="TOL",
                   help=f"relative transmission-denominator threshold (default {DENOM_TOL:g})")


def _add_output(p):
    p.add_argument("--out", metavar="PATH", help="output file ('-' for stdout)")
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--side", choices=("left", "right", "both"), default="left")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ptscatter",
                     description="Scattering on a lattice with a PT-symmetric potential.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="amplitudes and wavefunction at one phase or energy")
    _add_potential(p)
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--phi", type=float, help="lattice phase in (0, pi)")
    where.add_argument("--energy", type=float, help="energy in the band (0, 4/h^2)")
    _add_output(p)
    _add_tolerances(p)
    p.add_argument("--quiet", action="store_true", help="suppress the text report")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("scan", help="sweep a phase grid and write one row per (phi, side)")
    _add_potential(p)
    p.add_argument("--phi-min", type=float, default=0.05)
    p.add_argument("--phi-max", type=float, default=math.pi - 0.05)
    p.add_argument("--steps", type=int, default=100)
    _add_output(p)
    _add_tolerances(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="randomised invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200, help="draws per property")
    p.add_argument("--max-m", type=int, default=50, help="largest cutoff M drawn")
    p.add_argument("--inject-fault", choices=sorted(verify_mod.FAULTS), default=None,
                   help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("coeffs", help="explicit polynomials against the numerical solver")
    zs = p.add_mutually_exclusive_group(required=True)
    zs.add_argument("--Z", help="Z_0..Z_{M-1}, comma separated")
    zs.add_argument("--Zt", help="effective couplings 2 cos(phi) + Z_k, comma separated")
    p.add_argument("--Y", default="", help="Y_1..Y_{M-1}, comma separated")
    p.add_argument("--M", type=int, help="optional check on len(Z)")
    p.add_argument("--phi", type=float, default=math.pi / 2, help="default pi/2")
    p.set_defaults(func=cmd_coeffs)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpectralSingularity as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except BandViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAND
    except (UsageError, ScatteringError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
