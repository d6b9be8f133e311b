"""Command-line front end: every computation writes one CSV or JSON document.

Exit codes: 0 ok, 2 usage or domain error, 3 solver failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from .core import DomainError, Metric, SolverError, UnitQuaternion, covector_from_angles, quaternion_from_axis_angle
from .cut import cut_locus_mesh, cut_time, diameter, wavefront
from .geodesic import sample_geodesic
from .inverse import BoundaryReport, invert_exp
from .srlimit import DEFAULT_ETAS, QUANTITIES, convergence_report
from .su2 import su2_cut_locus_sample

LOCUS_HEADER = ["pbar3", "azimuth", "w", "x", "y", "z", "tag"]


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    return "%.17g" % x


def write_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def write_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _table(args, header, rows) -> str:
    rows = list(rows)
    if args.format == "json":
        return write_json([dict(zip(header, r)) for r in rows])
    return write_csv(header, rows)


def cmd_geodesic(metric: Metric, args) -> str:
    p = covector_from_angles(metric, args.pbar3, args.azimuth)
    sample = sample_geodesic(metric, p, args.t_end, args.n)
    return _table(args, ["t", "w", "x", "y", "z"],
                  ((t, q.w, q.x, q.y, q.z) for t, q in sample))


def cmd_cut_time(metric: Metric, args) -> str:
    if args.pbar3 is not None:
        grid = args.pbar3
    else:
        grid = [-1.0 + 2.0 * k / (args.n - 1) for k in range(args.n)]
    rows = []
    for x in grid:
        r = cut_time(metric, x)
        rows.append((r.pbar3, r.cut_time, r.tau_at_cut, r.stratum.value))
    return _table(args, ["pbar3", "cut_time", "tau", "stratum"], rows)


def _locus_rows(mesh):
    return [(p, a, w, x, y, z, tag) for p, a, w, x, y, z, tag in mesh.rows()]


def cmd_cut_locus(metric: Metric, args) -> str:
    return _table(args, LOCUS_HEADER, _locus_rows(cut_locus_mesh(metric, args.n)))


def cmd_wavefront(metric: Metric, args) -> str:
    return _table(args, LOCUS_HEADER, _locus_rows(wavefront(metric, args.t, args.n)))


def _target(args) -> UnitQuaternion:
    if args.quaternion is not None:
        q = UnitQuaternion(*args.quaternion)
        if abs(q.norm() - 1.0) > 1e-9:
            raise DomainError(f"target quaternion must have unit norm, got {q.norm()}")
        return q.normalized()
    if args.axis is None or args.angle is None:
        raise DomainError("give either --quaternion or both --axis and --angle")
    n = math.sqrt(sum(c * c for c in args.axis))
    if n == 0.0:
        raise DomainError("axis must be nonzero")
    return quaternion_from_axis_angle(args.axis, args.angle)


def distance_document(metric: Metric, target: UnitQuaternion) -> dict:
    res = invert_exp(metric, target)
    if isinstance(res, BoundaryReport):
        first = res.solutions[0]
        return {
            "distance": res.time,
            "covector": [first.covector.p1, first.covector.p2, first.covector.p3],
            "time": res.time,
            "residual": res.residual,
            "on_cut_locus": True,
            "stratum": res.stratum.value,
            "conjugate": res.conjugate,
            "solutions": [[s.covector.p1, s.covector.p2, s.covector.p3] for s in res.solutions],
        }
    return {
        "distance": res.time,
        "covector": [res.covector.p1, res.covector.p2, res.covector.p3],
        "time": res.time,
        "residual": res.residual,
        "on_cut_locus": False,
    }


def cmd_distance(metric: Metric, args) -> str:
    return write_json(distance_document(metric, _target(args)))


def diameter_document(metric: Metric) -> dict:
    value, far = diameter(metric)
    return {
        "value": value,
        "farthest_kind": far.kind.value,
        "representatives": [{"axis": list(r.axis), "angle": r.angle} for r in far.representatives],
    }


def cmd_diameter(metric: Metric, args) -> str:
    return write_json(diameter_document(metric))


def cmd_su2_locus(metric: Metric, args) -> str:
    rows = [(s.pbar3, s.azimuth, s.quaternion.w, s.quaternion.x, s.quaternion.y, s.quaternion.z, s.tag)
            for s in su2_cut_locus_sample(metric, args.n)]
    return _table(args, LOCUS_HEADER, rows)


def cmd_sr_compare(metric: Metric, args) -> str:
    params = {}
    for key in ("c", "theta", "arg_alpha", "alpha_norm"):
        v = getattr(args, key)
        if v is not None:
            params[key] = v
    etas = args.etas if args.etas else DEFAULT_ETAS
    rows = convergence_report(metric.i1, args.quantity, etas, **params)
    return _table(args, ["eta", "riemannian", "sub_riemannian", "abs_error"],
                  ((r.eta, r.riemannian_value, r.sr_value, r.abs_error) for r in rows))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lagrange-so3", description=__doc__.splitlines()[0])
    ap.add_argument("--i1", type=float, required=True)
    g = ap.add_mutually_exclusive_group(required=True)
    g.add_argument("--i3", type=float)
    g.add_argument("--eta", type=float, help="alternative to --i3: i3 = i1 / (1 + eta)")
    ap.add_argument("-o", "--output", help="write here instead of stdout")
    ap.add_argument("--format", choices=("csv", "json"), default="csv", help="format for tabular output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("geodesic", help="sample t -> Exp(p, t)")
    p.add_argument("--pbar3", type=float, required=True)
    p.add_argument("--azimuth", type=float, required=True)
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("cut-time", help="cut time per pbar3")
    p.add_argument("--pbar3", type=float, nargs="+")
    p.add_argument("--n", type=int, default=21, help="grid size when --pbar3 is absent")
    p.set_defaults(func=cmd_cut_time)

    p = sub.add_parser("cut-locus", help="cut-locus mesh")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_cut_locus)

    p = sub.add_parser("wavefront", help="sphere of radius t")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_wavefront)

    p = sub.add_parser("distance", help="distance from the identity")
    p.add_argument("--quaternion", type=float, nargs=4, metavar=("W", "X", "Y", "Z"))
    p.add_argument("--axis", type=float, nargs=3, metavar=("X", "Y", "Z"))
    p.add_argument("--angle", type=float)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("diameter", help="diameter and farthest set")
    p.set_defaults(func=cmd_diameter)

    p = sub.add_parser("su2-locus", help="cut locus on the double cover")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_su2_locus)

    p = sub.add_parser("sr-compare", help="convergence to the sub-Riemannian limit")
    p.add_argument("--quantity", choices=QUANTITIES, required=True)
    p.add_argument("--c", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--arg-alpha", type=float)
    p.add_argument("--alpha-norm", type=float)
    p.add_argument("--etas", type=float, nargs="+")
    p.set_defaults(func=cmd_sr_compare)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        metric = Metric(args.i1, args.i3) if args.i3 is not None else Metric.from_eta(args.i1, args.eta)
        text = args.func(metric, args)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SolverError as e:
        print(f"solver failure: {e}", file=sys.stderr)
        return 3
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
