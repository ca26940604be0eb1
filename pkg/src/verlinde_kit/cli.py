"""Command-line interface: ``verlinde-kit <command> ...``.

Every command writes a versioned JSON document (or CSV rows) to stdout or,
atomically, to ``--output``. A nonzero exit code is 2 for invalid input and 3
when a numerical invariant fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from fractions import Fraction

import numpy as np

from .affine import alcove_points, count_regular_orbits
from .cartan import AlgebraSpec, build_root_datum, irrep_dimension
from .dirac import (
    dirac_bundle,
    dirac_residuals,
    kostant_cohomology,
    orbit_scan,
    scan_grid,
    thom_deformation,
    verify_alt1,
)
from .errors import ConfigurationError, DomainError, InvariantError, VerlindeKitError
from .kac import TorusElement, character
from .reps import build_irrep
from .spectral import TorusTwisting, census_record, torus_flow
from .twisted import build_twisted_datum, shift_identity, twisted_alcove_records
from .verlinde import fuse, fusion_table, ring_axiom_defects, s_matrix, verify_fusion

SCHEMA = "v1"
DIRAC_TOL = 1e-8


# --------------------------------------------------------------------------
# serialization


def _plain(o):
    if isinstance(o, (bool, np.bool_)):
        return bool(o)
    if isinstance(o, (int, np.integer)):
        return int(o)
    if isinstance(o, (float, np.floating)):
        return float(o)
    if isinstance(o, Fraction):
        return f"{o.numerator}/{o.denominator}" if o.denominator != 1 else str(o.numerator)
    if isinstance(o, complex):
        return [o.real, o.imag]
    if isinstance(o, dict):
        return {str(k): _plain(v) for k, v in o.items()}
    if isinstance(o, (list, tuple, np.ndarray)):
        return [_plain(v) for v in o]
    return o


def dumps(doc) -> str:
    """Deterministic JSON with every float written as %.12e."""

    def enc(o, indent):
        pad = "  " * (indent + 1)
        if isinstance(o, float):
            if not math.isfinite(o):
                raise InvariantError(f"non-finite value {o} in output")
            return "%.12e" % o
        if isinstance(o, dict):
            if not o:
                return "{}"
            body = ",\n".join(f"{pad}{json.dumps(k)}: {enc(v, indent + 1)}" for k, v in o.items())
            return "{\n" + body + "\n" + "  " * indent + "}"
        if isinstance(o, list):
            if all(not isinstance(v, (dict, list)) for v in o):
                return "[" + ", ".join(enc(v, indent) for v in o) + "]"
            body = ",\n".join(pad + enc(v, indent + 1) for v in o)
            return "[\n" + body + "\n" + "  " * indent + "]"
        return json.dumps(o)

    return enc(_plain(doc), 0) + "\n"


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(["%.12e" % v if isinstance(v, float) else v for v in _plain(row)])
    return buf.getvalue()


def write_output(text: str, path: str | None) -> None:
    if not path or path == "-":
        sys.stdout.write(text)
        return
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --------------------------------------------------------------------------
# argument parsing


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip() != "")
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}")


def _datum(args):
    return build_root_datum(AlgebraSpec.parse(args.algebra))


def _weight(datum, w, name="weight") -> tuple:
    if w is None:
        return (0,) * datum.rank
    if len(w) != datum.rank:
        raise DomainError(f"--{name} needs {datum.rank} coordinates for {datum.spec.name}, got {len(w)}")
    if any(c < 0 for c in w):
        raise DomainError(f"--{name} {w} is not dominant")
    return tuple(w)


def _level(k: int) -> int:
    if k < 0:
        raise DomainError(f"level must be non-negative, got {k}")
    return k


def _doc(command: str, **fields) -> dict:
    return {"schema": SCHEMA, "command": command, **fields}


def _key(w) -> str:
    return ",".join(str(c) for c in w)


# --------------------------------------------------------------------------
# commands


def cmd_root_data(args):
    d = _datum(args)
    doc = _doc(
        "root-data",
        algebra=d.spec.name,
        dimension=d.dim,
        cartan_matrix=d.cartan_matrix,
        positive_roots=d.positive_roots,
        rho=d.rho,
        theta=d.theta,
        h_dual=d.h_dual,
        comarks=d.comarks,
        gram=d.gram,
    )
    rows = [["root_index", *[f"c{i}" for i in range(d.rank)]]] + [[i, *r] for i, r in enumerate(d.positive_roots)]
    return doc, rows


def cmd_alcove(args):
    d = _datum(args)
    k = _level(args.level)
    pts = alcove_points(d, k)
    doc = _doc(
        "alcove",
        algebra=d.spec.name,
        level=k,
        count=len(pts),
        regular_orbits=count_regular_orbits(d, k + d.h_dual),
        weights=[p.coords for p in pts],
    )
    rows = [[f"c{i}" for i in range(d.rank)]] + [list(p.coords) for p in pts]
    return doc, rows


def cmd_twisted_alcove(args):
    tw = build_twisted_datum(args.algebra, args.order)
    k = _level(args.level)
    recs = twisted_alcove_records(tw, k)
    lhs, rhs = shift_identity(tw)
    doc = _doc(
        "twisted-alcove",
        algebra=tw.base.spec.name,
        order=tw.r,
        level=k,
        invariant_subalgebra=tw.invariant.type_name,
        a0=tw.a0,
        shift_identity={"lhs": lhs, "rhs": rhs, "holds": lhs == rhs},
        parity_coupled=tw.parity_coupled,
        count=len(recs),
        records=[{"weight": r["weight"].coords, "pairing": r["pairing"], "spin_parity": r["spin_parity"]} for r in recs],
    )
    n = tw.invariant.rank
    rows = [[*[f"c{i}" for i in range(n)], "pairing", "spin_parity"]]
    rows += [[*r["weight"].coords, r["pairing"], r["spin_parity"]] for r in recs]
    return doc, rows


def cmd_fuse(args):
    d = _datum(args)
    k = _level(args.level)
    left, right = _weight(d, args.left, "left"), _weight(d, args.right, "right")
    prod = fuse(d, k, left, right)
    doc = _doc(
        "fuse",
        algebra=d.spec.name,
        level=k,
        left=left,
        right=right,
        product={_key(w.coords): v for w, v in prod.items()},
    )
    rows = [[*[f"c{i}" for i in range(d.rank)], "multiplicity"]] + [[*w.coords, v] for w, v in prod.items()]
    return doc, rows


def cmd_fusion_table(args):
    d = _datum(args)
    table = fusion_table(d, _level(args.level), jobs=args.jobs)
    defects = ring_axiom_defects(table)
    doc = _doc("fusion-table", **table.to_json(), ring_axiom_defects=defects)
    rows = [["i", "j", "m", "coefficient"]] + [[i, j, m, v] for (i, j, m), v in sorted(table.n.items())]
    if any(defects.values()):
        raise _Failed(doc, rows, "fusion ring axioms fail")
    return doc, rows


def cmd_verify_fusion(args):
    d = _datum(args)
    rep = verify_fusion(d, _level(args.level), fusion_table(d, _level(args.level), jobs=args.jobs))
    doc = _doc("verify-fusion", **rep, summary=f"{len(rep['mismatches'])} mismatches")
    rows = [["i", "j", "m", "kac_walton", "verlinde"]] + [[m["i"], m["j"], m["m"], m["kac_walton"], m["verlinde"]] for m in rep["mismatches"]]
    if not rep["ok"]:
        raise _Failed(doc, rows, doc["summary"])
    return doc, rows


def cmd_smatrix(args):
    d = _datum(args)
    sd = s_matrix(d, _level(args.level))
    s = sd.entries
    doc = _doc(
        "smatrix",
        algebra=d.spec.name,
        level=args.level,
        basis=[b.coords for b in sd.basis],
        real=s.real,
        imag=s.imag,
        unitarity_residual=sd.unitarity_residual(),
        symmetry_residual=sd.symmetry_residual(),
    )
    rows = [["i", "j", "re", "im"]] + [[i, j, float(s[i, j].real), float(s[i, j].imag)] for i in range(len(s)) for j in range(len(s))]
    return doc, rows


def _exact(c: complex):
    """Integer when the coefficient is one (graded dimensions), else [re, im]."""
    r = round(c.real)
    if abs(c.imag) < 1e-9 and abs(c.real - r) < 1e-9:
        return int(r)
    return [c.real, c.imag]


def cmd_char(args):
    d = _datum(args)
    k = _level(args.level)
    lam = _weight(d, args.weight)
    g = TorusElement(args.torus) if args.torus else TorusElement.identity(d.rank)
    if len(g.angles) != d.rank:
        raise DomainError(f"--torus needs {d.rank} angles")
    series = character(d, k, lam, g, args.cutoff)
    doc = _doc(
        "char",
        algebra=d.spec.name,
        level=k,
        weight=lam,
        torus=g.angles,
        series=series.to_json(),
        coefficients=[_exact(c) for c in series.coefficients()],
    )
    rows = [["exponent", "re", "im"]] + [[e, c.real, c.imag] for e, c in series.terms.items()]
    return doc, rows


def _bundle(args):
    d = _datum(args)
    lam = _weight(d, args.weight)
    return d, lam, dirac_bundle(d, lam)


def cmd_dirac_check(args):
    d, lam, b = _bundle(args)
    res = dirac_residuals(b)
    alt = verify_alt1(b)
    eig = np.linalg.eigvals(b.D @ b.D)
    worst = max(max(res.values()), max(alt.values()))
    doc = _doc(
        "dirac-check",
        algebra=d.spec.name,
        weight=lam,
        module_dimension=len(b.D),
        residuals=res,
        decomposition=alt,
        D_squared_eigenvalue=float(np.mean(eig.real)),
        max_residual=worst,
        ok=worst < DIRAC_TOL,
    )
    rows = [["check", "residual"]] + [[k, v] for k, v in {**res, **alt}.items()]
    if worst >= DIRAC_TOL:
        raise _Failed(doc, rows, f"Dirac residual {worst:.3e} exceeds {DIRAC_TOL}")
    return doc, rows


def cmd_orbit_scan(args):
    d, lam, b = _bundle(args)
    grid = scan_grid(b, args.points, args.seed)
    result = orbit_scan(b, grid, jobs=args.jobs)
    fails = result.localization_failures(args.tol)
    doc = _doc(
        "orbit-scan",
        algebra=d.spec.name,
        weight=lam,
        points=len(result.samples),
        orbit_radius=result.orbit_radius,
        kernel_points=sum(1 for s in result.samples if s.kernel_dim > 0),
        localization_failures=len(fails),
        samples=[{"kernel_dim": s.kernel_dim, "min_singular": s.min_singular, "distance": s.distance} for s in result.samples],
    )
    rows = [["index", "kernel_dim", "min_singular", "distance"]]
    rows += [[i, s.kernel_dim, s.min_singular, s.distance] for i, s in enumerate(result.samples)]
    if fails:
        raise _Failed(doc, rows, f"{len(fails)} points violate kernel localization")
    return doc, rows


def cmd_thom(args):
    d, lam, b = _bundle(args)
    if args.mu and len(args.mu) != d.rank:
        raise DomainError(f"--mu needs {d.rank} coordinates")
    # default: a point outside the orbit sphere, where every step is invertible
    coords = args.mu or tuple(2 * c for c in b.shifted)
    rep = thom_deformation(b, b.torus_point(coords), steps=args.steps)
    doc = _doc("thom", algebra=d.spec.name, weight=lam, mu=coords, **rep)
    rows = [["eps", "min_singular", "invertible"]] + [[r["eps"], r["min_singular"], int(r["invertible"])] for r in rep["steps"]]
    return doc, rows


def cmd_kostant(args):
    d = _datum(args)
    lam = _weight(d, args.weight)
    rep = kostant_cohomology(build_irrep(d, lam))
    doc = _doc(
        "kostant",
        algebra=d.spec.name,
        weight=lam,
        module_dimension=irrep_dimension(d, lam),
        dims=rep.dims,
        harmonic_weights=[{"degree": q, "weight": w} for q, w in rep.weights],
        expected_weights=[{"degree": q, "weight": w} for q, w in rep.expected_weights],
        d_squared=rep.dbar_squared,
        matches=rep.matches,
    )
    rows = [["degree", *[f"c{i}" for i in range(d.rank)]]] + [[q, *w] for q, w in rep.weights]
    if not rep.matches:
        raise _Failed(doc, rows, "harmonic weights differ from w(-lam-rho)+rho")
    return doc, rows


def cmd_spectral_flow(args):
    rank = args.rank
    if len(args.kappa) != rank * rank:
        raise DomainError(f"--kappa needs {rank * rank} entries for rank {rank}")
    tw = TorusTwisting(rank, [args.kappa[i * rank:(i + 1) * rank] for i in range(rank)])
    record = census_record(tw)
    lam = args.lam or (0,) * rank
    loops = []
    for j in range(rank):
        end = [0.0] * rank
        end[j] = 1.0
        flow = torus_flow(tw, lam, [[0.0] * rank, end], N=args.modes)
        loops.append({"axis": j, "net_flow": flow.net_flow, "axis_flows": flow.axis_flows})
    if args.path:
        if len(args.path) != 2 * rank:
            raise DomainError(f"--path needs {2 * rank} numbers (start then end)")
        path = [list(args.path[:rank]), list(args.path[rank:])]
    else:
        path = [[0.0] * rank, [1.0] + [0.0] * (rank - 1)]
    chosen = torus_flow(tw, lam, path, N=args.modes)
    doc = _doc(
        "spectral-flow",
        **record,
        lam=lam,
        modes=args.modes,
        fundamental_loops=loops,
        path={"start": path[0], "end": path[1], "net_flow": chosen.net_flow, "axis_flows": chosen.axis_flows},
    )
    rows = [line.split(",") for line in chosen.tracks_csv().splitlines()]
    rows = [rows[0]] + [[int(a), int(b), c] for a, b, c in rows[1:]]
    return doc, rows


class _Failed(Exception):
    """Carries a finished document whose invariant check failed."""

    def __init__(self, doc, rows, message):
        super().__init__(message)
        self.doc, self.rows = doc, rows


# --------------------------------------------------------------------------


def _add_common(p, algebra=True, level=False, weight=False, jobs=False):
    if algebra:
        p.add_argument("--algebra", required=True, help="series letter and rank, e.g. A2, B3, G2")
    if level:
        p.add_argument("--level", type=int, required=True, help="non-negative integer level k")
    if weight:
        p.add_argument("--weight", type=_int_list, help="dominant weight in fundamental-weight coordinates, e.g. 1,0")
    if jobs:
        p.add_argument("--jobs", type=int, default=1, help="worker count (VERLINDE_KIT_JOBS overrides)")
    p.add_argument("--output", "-o", help="write here (atomically) instead of stdout")
    p.add_argument("--format", choices=("json", "csv"), default="json")


COMMANDS = {
    "root-data": (cmd_root_data, "Root data of a simple Lie algebra (affine notation: roots, rho, theta, dual Coxeter number)."),
    "alcove": (cmd_alcove, "Level-k alcove of integrable weights (integrable representations: lambda.theta <= k)."),
    "twisted-alcove": (cmd_twisted_alcove, "Twisted alcove of a diagram automorphism (twisted affine algebras: theta_.lambda <= k/r)."),
    "fuse": (cmd_fuse, "Level-k fusion product by the Kac-Walton algorithm (fusion with G-representations)."),
    "fusion-table": (cmd_fusion_table, "Full level-k fusion table with ring-axiom checks (fusion with G-representations)."),
    "verify-fusion": (cmd_verify_fusion, "Kac-Walton fusion against the Verlinde formula (fusion with G-representations)."),
    "smatrix": (cmd_smatrix, "Modular S-matrix of the level-k alcove (topological Peter-Weyl theorem)."),
    "char": (cmd_char, "Truncated Kac character Tr(q^E g) (loop rotation and the Kac numerator)."),
    "dirac-check": (cmd_dirac_check, "Cubic Dirac operator identities on V (x) S (a finite-dimensional Dirac family)."),
    "orbit-scan": (cmd_orbit_scan, "Kernel of D_mu against distance to the orbit of lambda+rho (the kernel of the Dirac family)."),
    "thom": (cmd_thom, "Invertibility along eps D + i psi(mu) (Thom deformation of the Dirac family)."),
    "kostant": (cmd_kostant, "Kostant cohomology of n-bar with harmonic weights (semi-infinite cohomology, finite shadow)."),
    "spectral-flow": (cmd_spectral_flow, "Twisting census and spectral flow on a torus (spectral flow over a torus)."),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="verlinde-kit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    ps = {}
    for name, (_, text) in COMMANDS.items():
        ps[name] = sub.add_parser(name, help=text, description=text)
    _add_common(ps["root-data"])
    _add_common(ps["alcove"], level=True)
    _add_common(ps["twisted-alcove"], level=True)
    ps["twisted-alcove"].add_argument("--order", type=int, required=True, help="automorphism order r (2 or 3)")
    _add_common(ps["fuse"], level=True)
    ps["fuse"].add_argument("--left", type=_int_list, required=True)
    ps["fuse"].add_argument("--right", type=_int_list, required=True)
    _add_common(ps["fusion-table"], level=True, jobs=True)
    _add_common(ps["verify-fusion"], level=True, jobs=True)
    _add_common(ps["smatrix"], level=True)
    _add_common(ps["char"], level=True, weight=True)
    ps["char"].add_argument("--cutoff", type=_fraction, required=True, help="keep powers q^e with e <= cutoff")
    ps["char"].add_argument("--torus", type=lambda t: tuple(_fraction(x) for x in t.split(",")),
                            help="torus element as omega_i(g) mod 1, e.g. 1/3,1/5 (default identity)")
    _add_common(ps["dirac-check"], weight=True)
    _add_common(ps["orbit-scan"], weight=True, jobs=True)
    ps["orbit-scan"].add_argument("--points", type=int, default=200)
    ps["orbit-scan"].add_argument("--seed", type=int, default=0)
    ps["orbit-scan"].add_argument("--tol", type=float, default=1e-6, help="orbit distance counted as on the orbit")
    _add_common(ps["thom"], weight=True)
    ps["thom"].add_argument("--mu", type=_float_list, help="torus point in fundamental-weight coordinates (default 2(lambda+rho))")
    ps["thom"].add_argument("--steps", type=int, default=11)
    _add_common(ps["kostant"], weight=True)
    _add_common(ps["spectral-flow"], algebra=False)
    ps["spectral-flow"].add_argument("--rank", type=int, required=True)
    ps["spectral-flow"].add_argument("--kappa", type=_int_list, required=True, help="kappa entries, row-major")
    ps["spectral-flow"].add_argument("--lam", type=_int_list, help="lambda class in Z^rank (default 0)")
    ps["spectral-flow"].add_argument("--path", type=_float_list, help="start then end of a straight path, e.g. 0,0,1,0 for rank 2")
    ps["spectral-flow"].add_argument("--modes", type=int, default=8, help="mode window |n| <= N")
    return parser


def _render(args, doc, rows) -> str:
    return _csv(rows) if args.format == "csv" else dumps(doc)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func = COMMANDS[args.command][0]
    try:
        doc, rows = func(args)
    except _Failed as exc:
        write_output(_render(args, exc.doc, exc.rows), getattr(args, "output", None))
        print(f"verlinde-kit: {exc}", file=sys.stderr)
        return 3
    except InvariantError as exc:
        print(f"verlinde-kit: invariant failed: {exc}", file=sys.stderr)
        return 3
    except (DomainError, ConfigurationError, VerlindeKitError) as exc:
        print(f"verlinde-kit: {exc}", file=sys.stderr)
        return 2
    write_output(_render(args, doc, rows), args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
