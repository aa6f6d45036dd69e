"""Command-line front end.

Subcommands:

    verify   build a field from a declarative description and test whether
             it is (p, q)-harmonic on seeded sample points
    solve    closed-form classification (killing / confgrad / quadratic /
             loxodromic), with exact surds, decimals and bound chains
    table    the quadratic-gradient classification table, optionally as CSV
    scan2d   sweep conformal-field parameters on M^2 and report, for each
             grid point, the vanishes-modulo-the-quadric verdict

Exit codes: 0 = confirmed, 1 = refuted, 2 = input error, 3 = proven
non-existence.  Identical command + seed produces byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
from fractions import Fraction

from . import polyreduce, solvers
from .fields import build_field
from .tension import HARMONIC_TOL, MetricParams, verify


def _fmt(v: float) -> str:
    return f"{float(v):.10g}"


def _floats(text: str) -> list[float]:
    return [float(v) for v in str(text).split(",") if v.strip() != ""]


def _parse_spec_file(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"cannot parse spec line: {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            out[key] = value
    return out


_FAMILY_KEYS = (
    "family", "n", "epsilon", "mu", "pole", "r", "omega", "twists", "tau",
    "lam", "eigenvalues", "rr", "s", "t", "h", "scale",
)
_LIST_KEYS = ("pole", "twists", "eigenvalues")


def _collect_spec(args) -> dict:
    doc: dict = {}
    if args.spec:
        doc.update(_parse_spec_file(args.spec))
    for key in _FAMILY_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            doc[key] = val
    for key in _LIST_KEYS:
        if key in doc and isinstance(doc[key], str):
            doc[key] = _floats(doc[key])
    return doc


def cmd_verify(args) -> int:
    doc = _collect_spec(args)
    file_p, file_q = doc.pop("p", None), doc.pop("q", None)
    if args.p is None and file_p is not None:
        args.p = float(file_p)
    if args.q is None and file_q is not None:
        args.q = float(file_q)
    if args.p is None or args.q is None:
        raise ValueError("metric parameters --p and --q are required")
    field = build_field(doc)
    mp = MetricParams(args.p, args.q)
    report = verify(
        field,
        mp,
        count=args.points,
        seed=args.seed,
        tol=args.tol,
        fd=args.fd,
        h=args.h_fd,
    )
    print(
        f"family={report.family} n={report.n} epsilon={report.epsilon:+d} "
        f"(p, q)=({_fmt(report.p)}, {_fmt(report.q)})"
    )
    print(f"points={report.count} seed={report.seed} derivatives={report.derivative_source}")
    print(f"max relative tension residual = {report.max_rel_residual:.3e}")
    print(
        f"verdicts: harmonic={report.harmonic} preharmonic={report.preharmonic} "
        f"q_riemannian={report.q_riemannian}"
    )
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(report.to_json())
            fh.write("\n")
    return 0 if report.harmonic else 1


def _print_classification(cl: solvers.Classification) -> None:
    print(f"family={cl.family} n={cl.n} epsilon={cl.epsilon:+d}")
    if not cl.exists:
        print(f"no solution: {cl.reason}")
        return
    if cl.q_free:
        print("constant length: (2, q)-harmonic for every q; no preferred pair")
        return
    for name in ("mu", "omega0_sq", "lambda0_sq"):
        val = getattr(cl, name)
        if val is not None:
            exact = cl.exact.get(name)
            suffix = f"  [= {exact}]" if exact is not None and not exact.is_rational() else ""
            print(f"{name} = {_fmt(val)}{suffix}")
    for mp in cl.metric_params:
        q_exact = cl.exact.get("q", cl.exact.get("q_a"))
        suffix = ""
        if len(cl.metric_params) == 1 and q_exact is not None and not q_exact.is_rational():
            suffix = f"  [q = {q_exact}]"
        print(f"(p, q) = ({_fmt(mp.p)}, {_fmt(mp.q)}){suffix}")
    print(f"metrically unique: {cl.metrically_unique}")
    for check in solvers.bounds_report(cl):
        flag = "ok" if check.holds else "VIOLATED"
        print(f"bound {check.name}: {check.statement}  [{flag}, margin {check.margin:.3e}]")


def cmd_solve(args) -> int:
    family = args.family
    if family == "killing":
        if args.r is None:
            raise ValueError("killing classification needs --r")
        cl = solvers.killing_classification(args.n, args.r, args.epsilon)
    elif family == "confgrad":
        mu_sign = {"+": 1, "0": 0, "-": -1}[args.mu_sign or ("-" if args.epsilon == -1 else "+")]
        cl = solvers.conformal_gradient_classification(args.n, args.epsilon, mu_sign)
    elif family == "quadratic":
        cl = solvers.quadratic_classification(args.n)
    elif family == "loxodromic":
        cl = solvers.loxodromic_classification()
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown family {family!r}")
    _print_classification(cl)
    return 0 if cl.exists else 3


def cmd_table(args) -> int:
    if args.which != "table7":
        raise ValueError(f"unknown table {args.which!r}")
    ns = [n for n in range(5, args.max_n + 1, 2)]
    rows = solvers.table7(ns)
    print("n  r  p  q               lambda0^2/4")
    for row in rows:
        print(
            f"{row['n']:<2} {row['r']:<2} {row['p']:<2} "
            f"{_fmt(row['q']):<15} {_fmt(row['lambda0_sq_over_4']):<15} "
            f"[q = {row['q_exact']}, lambda0^2/4 = {row['lambda0_sq_over_4_exact']}]"
        )
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["n", "r", "p", "q", "lambda0_sq_over_4"])
            for row in rows:
                writer.writerow(
                    [row["n"], row["r"], row["p"], _fmt(row["q"]), _fmt(row["lambda0_sq_over_4"])]
                )
    return 0


def cmd_scan2d(args) -> int:
    conv = (lambda v: Fraction(str(v))) if args.exact else float

    def grid(text):
        return [conv(v) for v in str(text).split(",") if v.strip() != ""]

    omegas, taus, rrs, hs = grid(args.omega), grid(args.tau), grid(args.rr), grid(args.h)
    s, t = conv(args.s), conv(args.t)
    ps, qs = grid(args.p), grid(args.q)
    tol = None if args.exact else polyreduce.NUMERIC_ZERO_TOL
    rows = []
    hits = 0
    for om, ta, rr, h in itertools.product(omegas, taus, rrs, hs):
        if not (om or ta or rr or h):
            continue  # the zero field: harmonic for all (p, q), no quartic to test
        for p, q in itertools.product(ps, qs):
            if not q:
                # q = 0 is never harmonic for a non-trivial conformal field
                res = polyreduce.ReductionResult(False, None, None, "q = 0", not args.exact)
            else:
                P = polyreduce.build_harmonicity_poly(
                    args.epsilon, om, ta, rr, h=h, s=s, t=t, p=p, q=q, exact=args.exact
                )
                res = polyreduce.vanishes_mod_quadric(P, args.epsilon, tol=tol)
            hits += bool(res.divisible)
            rows.append(
                {
                    "omega": float(om),
                    "tau": float(ta),
                    "rr": float(rr),
                    "h": float(h),
                    "p": float(p),
                    "q": float(q),
                    "harmonic": res.divisible,
                    "failing_grade": res.failing_grade,
                    "approximate": res.approximate,
                }
            )
            tag = "HIT" if res.divisible else f"no (grade {res.failing_grade})"
            print(
                f"omega={_fmt(om)} tau={_fmt(ta)} rr={_fmt(rr)} h={_fmt(h)} "
                f"p={_fmt(p)} q={_fmt(q)}: {tag}"
            )
    print(f"{len(rows)} grid points, {hits} harmonic hits")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump({"epsilon": args.epsilon, "hits": hits, "rows": rows}, fh, sort_keys=True, indent=2)
            fh.write("\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hvf",
        description="Construct and verify harmonic vector fields on spheres and hyperbolic spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="test a field for (p, q)-harmonicity")
    pv.add_argument("--spec", help="key=value file describing the field")
    pv.add_argument("--family", choices=["confgrad", "killing", "hopf", "loxodromic", "dipole", "conformal2d", "quadratic"])
    pv.add_argument("--n", type=int)
    pv.add_argument("--epsilon", type=int, choices=[1, -1])
    pv.add_argument("--mu", type=float)
    pv.add_argument("--pole", type=str)
    pv.add_argument("--r", type=float)
    pv.add_argument("--omega", type=float)
    pv.add_argument("--twists", type=str)
    pv.add_argument("--tau", type=float)
    pv.add_argument("--lam", type=float)
    pv.add_argument("--eigenvalues", type=str)
    pv.add_argument("--rr", type=float)
    pv.add_argument("--s", type=float)
    pv.add_argument("--t", type=float)
    pv.add_argument("--h", dest="h", type=float)
    pv.add_argument("--scale", type=float)
    pv.add_argument("--p", type=float)
    pv.add_argument("--q", type=float)
    pv.add_argument("--points", type=int, default=200)
    pv.add_argument("--seed", type=int, default=42)
    pv.add_argument("--tol", type=float, default=HARMONIC_TOL, help="harmonic verdict threshold")
    pv.add_argument("--h-fd", dest="h_fd", type=float, help="finite-difference step override")
    pv.add_argument("--fd", action="store_true", help="use the finite-difference oracle instead of closed forms")
    pv.add_argument("--json", help="write the full report as JSON")
    pv.set_defaults(fn=cmd_verify)

    ps = sub.add_parser("solve", help="closed-form classification")
    ps.add_argument("--family", required=True, choices=["killing", "confgrad", "quadratic", "loxodromic"])
    ps.add_argument("--n", type=int, default=2)
    ps.add_argument("--r", type=int)
    ps.add_argument("--epsilon", type=int, choices=[1, -1], default=1)
    ps.add_argument("--mu-sign", dest="mu_sign", choices=["+", "0", "-"])
    ps.set_defaults(fn=cmd_solve)

    pt = sub.add_parser("table", help="quadratic-gradient classification table")
    pt.add_argument("--which", default="table7")
    pt.add_argument("--max-n", dest="max_n", type=int, default=9)
    pt.add_argument("--csv", help="write the table as CSV")
    pt.set_defaults(fn=cmd_table)

    pc = sub.add_parser("scan2d", help="mod-quadric sweep over conformal fields on M^2")
    pc.add_argument("--epsilon", type=int, choices=[1, -1], required=True)
    pc.add_argument("--omega", default="0.5,1,2")
    pc.add_argument("--tau", default="0")
    pc.add_argument("--rr", default="0.5,1,2")
    pc.add_argument("--h", default="0.5,1,2")
    pc.add_argument("--s", default="0")
    pc.add_argument("--t", default="1")
    pc.add_argument("--p", default="2,3,4,5")
    pc.add_argument("--q", default="-2,-1,-0.5,-0.1")
    pc.add_argument("--exact", dest="exact", action="store_true", default=True,
                    help="exact rational coefficients (the default)")
    pc.add_argument("--numeric", dest="exact", action="store_false",
                    help="double precision with a 1e-10 zero threshold")
    pc.add_argument("--json", help="write results as JSON")
    pc.set_defaults(fn=cmd_scan2d)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
