"""Command-line interface.

Exit codes: 0 success, 1 numerical failure (tolerance, branch, singular
integrand, failed verification), 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import acceptance, genfun, haar
from .errors import NumericalError, ZonalError
from .exact import EvalPoint
from .radial import Convention, OperatorSpec, eigencheck
from .series import WeightLabel, phi_fundamental, series_table


class UsageError(Exception):
    pass


def _complex_list(text: str) -> list[complex]:
    try:
        return [complex(v.strip().replace(" ", "")) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse {text!r} as numbers") from exc


def parse_point(args, N: int) -> EvalPoint:
    if args.x is not None and args.theta is not None:
        raise UsageError("give either --x or --theta, not both")
    if args.theta is not None:
        th = [v.real for v in _complex_list(args.theta)]
        if len(th) == N - 1:
            th.append(-math.fsum(th))
        if len(th) != N:
            raise UsageError(f"--theta needs {N - 1} or {N} angles")
        if abs(math.fsum(th)) > 1e-12:
            raise UsageError("--theta angles must sum to 0")
        return EvalPoint.from_angles(th)
    if args.x is None:
        return EvalPoint.ones(N)
    coords = _complex_list(args.x)
    if len(coords) != N:
        raise UsageError(f"--x needs {N} coordinates, got {len(coords)}")
    return EvalPoint(tuple(coords))


def parse_label(args) -> WeightLabel:
    N = args.n
    if N is None or N < 2:
        raise UsageError("--n must be an integer >= 2")
    if args.p is not None or args.q is not None:
        if N != 3:
            raise UsageError("-p/-q labels are only defined for N=3")
        return WeightLabel.pq(args.p or 0, args.q or 0)
    if args.l is None:
        raise UsageError("give --l (or -p/-q for N=3)")
    parts = [int(v) for v in args.l.split(",")]
    if any(v < 0 for v in parts):
        raise UsageError("label parts must be nonnegative")
    if len(parts) == 1:
        return WeightLabel.fundamental(N, parts[0])
    if len(parts) != N - 1:
        raise UsageError(f"--l needs 1 or {N - 1} comma-separated parts")
    return WeightLabel(N, tuple(parts))


def exact_polynomial(label: WeightLabel):
    """Exact Phi for the labels the library can construct in closed form."""
    if all(v == 0 for v in label.parts[1:]):
        return phi_fundamental(label.N, label.parts[0])
    if label.N == 3:
        return genfun.phi_pq(label.p, label.q)
    raise UsageError("exact Phi is available for (l,0,...,0) labels and for N=3")


def _cplx(v: complex) -> dict:
    return {"re": v.real, "im": v.imag}


# subcommands


def cmd_coeffs(args):
    if args.n is None or args.n < 2:
        raise UsageError("--n must be an integer >= 2")
    if args.l is None or int(args.l) < 0:
        raise UsageError("--l must be a nonnegative integer")
    return series_table(args.n, int(args.l)).to_json()


def cmd_eval(args):
    label = parse_label(args)
    pt = parse_point(args, label.N)
    poly = exact_polynomial(label)
    v = poly(*pt.coords)
    return {"N": label.N, "label": list(label.parts), "point": [_cplx(c) for c in pt.coords],
            "value_re": v.real, "value_im": v.imag}


def cmd_mc(args):
    label = parse_label(args)
    pt = parse_point(args, label.N)
    est = haar.mc_phi(label, pt, args.samples, args.seed, args.threads)
    return {"N": label.N, "label": list(label.parts), **est.to_json()}


def cmd_genfun(args):
    N = args.n or 3
    if N == 2:
        pt = parse_point(args, 2)
        v = genfun.closed_form_n2(pt.coords[0], pt.coords[1], complex(args.t1))
        return {"value_re": v.real, "value_im": v.imag}
    if N != 3:
        raise UsageError("genfun supports N=2 and N=3")
    pt = parse_point(args, 3)
    params = genfun.GenFunParams(complex(args.t1), complex(args.t2 or 0))
    return genfun.quad_F(pt, params, args.tol).to_json()


def cmd_series(args):
    if args.pmax < 0 or args.qmax < 0:
        raise UsageError("--pmax/--qmax must be nonnegative")
    table = genfun.series_extract(args.pmax, args.qmax)
    return [{"p": p, "q": q, "polynomial": poly.to_json()} for (p, q), poly in sorted(table.items())]


def cmd_eigencheck(args):
    label = parse_label(args)
    poly = exact_polynomial(label)
    spec = OperatorSpec(Convention(args.convention), args.kappa, label.N)
    return {"N": label.N, "label": list(label.parts), "convention": spec.convention.value,
            **eigencheck(spec, poly).to_json()}


def cmd_verify(args):
    ids = [int(v) for v in args.only.split(",")] if args.only else None
    if ids and any(i not in acceptance.CRITERIA for i in ids):
        raise UsageError(f"criteria are numbered {min(acceptance.CRITERIA)}..{max(acceptance.CRITERIA)}")
    results = acceptance.run(ids, samples=args.samples, seed=args.seed, threads=args.threads)
    for r in results:
        print(r.line(), file=sys.stderr)
    return json.loads(acceptance.report(results, args.seed, args.samples))


COMMANDS = {
    "coeffs": cmd_coeffs,
    "eval": cmd_eval,
    "mc": cmd_mc,
    "genfun": cmd_genfun,
    "series": cmd_series,
    "eigencheck": cmd_eigencheck,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zonal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "pretty"), default="json")

    label = argparse.ArgumentParser(add_help=False)
    label.add_argument("--n", type=int)
    label.add_argument("--l", help="l or comma-separated l1,...,l_{N-1}")
    label.add_argument("-p", "--p", type=int)
    label.add_argument("-q", "--q", type=int)

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument("--x", help="comma-separated coordinates (complex literals allowed)")
    point.add_argument("--theta", help="torus angles; the last is completed so they sum to 0")

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--samples", type=int, default=acceptance.DEFAULT_SAMPLES)
    mc.add_argument("--seed", type=int, default=haar.DEFAULT_SEED)
    mc.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("coeffs", parents=[common], help="series coefficients of Phi_(l,0,...,0)")
    p.add_argument("--n", type=int)
    p.add_argument("--l")
    sub.add_parser("eval", parents=[common, label, point], help="evaluate an exact Phi")
    sub.add_parser("mc", parents=[common, label, point, mc], help="Monte Carlo estimate of Phi")
    p = sub.add_parser("genfun", parents=[common, point], help="generating function by quadrature")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--t1", type=complex, required=True)
    p.add_argument("--t2", type=complex)
    p.add_argument("--tol", type=float, default=1e-10)
    p = sub.add_parser("series", parents=[common], help="exact Phi_pq(z1, z2) table")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--qmax", type=int, required=True)
    p = sub.add_parser("eigencheck", parents=[common, label], help="radial-operator eigenfunction check")
    p.add_argument("--convention", choices=[c.value for c in Convention], default="jack")
    p.add_argument("--kappa", default="1/2")
    p = sub.add_parser("verify", parents=[common, mc], help="run the acceptance suite")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return parser


def _rows(obj):
    if isinstance(obj, list):
        return obj
    for key in ("coefficients", "criteria"):
        if key in obj:
            return obj[key]
    return [obj]


def render(obj, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, indent=1, sort_keys=True)
    rows = [{k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v)
             for k, v in row.items()} for row in _rows(obj)]
    keys = list(rows[0]) if rows else []
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue().rstrip("\n")
    lines = []
    for row in rows:
        lines.append("  ".join(f"{k}={format(v, '.17g') if isinstance(v, float) else v}" for k, v in row.items()))
    return "\n".join(lines)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "samples", 1) < 1:
            raise UsageError("--samples must be positive")
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be positive")
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.error(str(exc))
    except NumericalError as exc:
        print(f"zonal: numerical failure: {exc}", file=sys.stderr)
        return 1
    except (ZonalError, ValueError, ZeroDivisionError) as exc:
        print(f"zonal: {exc}", file=sys.stderr)
        return 2
    print(render(out, args.format))
    if args.command == "verify" and not out["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
