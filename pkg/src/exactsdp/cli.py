"""Command-line interface: JSON in, JSON out.

    exactsdp solve instance.json [--seed S] [--jobs N] [--digits D] [-o out.json]
    exactsdp check-reg pencil.json P
    exactsdp degree-bound M N R
    exactsdp sos-certify poly.json R
    exactsdp isolate parametrization.json

Exit codes: 0 success, 1 usage, 2 regularity failure, 3 positive-dimensional
system, 4 step budget exhausted.  Errors are also written to stderr as JSON.
"""

import argparse
import json
import logging
import sys

from .errors import DimensionError, ExactSDPError, RegularityError, ResourceError
from .exactpoly import fmt_rational
from .groebner import RationalParametrization, default_step_budget
from .lagrange import degree_bound
from .pencil import AlgebraicPoint, Pencil, find_irregular_support
from .solver import SDPInstance, real_points, solve_sdp
from .sos import HomogeneousInput, certify_sos_length

EXIT_OK, EXIT_USAGE, EXIT_REGULARITY, EXIT_DIMENSION, EXIT_RESOURCE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load(path):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def cmd_solve(args):
    data = _load(args.input)
    if args.r is not None:
        data["r"] = args.r
    if args.cost is not None:
        data["cost"] = "generic" if args.cost == "generic" else args.cost.split(",")
    instance = SDPInstance.from_json(data)
    report = solve_sdp(instance, seed=args.seed, budget=args.budget, jobs=args.jobs,
                       check_regularity=not args.no_check)
    return report.to_json(args.digits)


def cmd_check_reg(args):
    data = _load(args.input)
    pencil = Pencil.from_json(data["pencil"] if "pencil" in data else data)
    if not 0 <= args.p < pencil.m:
        raise UsageError(f"p must lie in 0..{pencil.m - 1}")
    bad = find_irregular_support(pencil, args.p, args.budget)
    out = {"p": args.p, "regular": bad is None}
    if bad is not None:
        out["iota"] = list(bad)
    return out


def cmd_degree_bound(args):
    if args.m < 1 or args.n < 1 or not 0 <= args.r <= args.m:
        raise UsageError("need m >= 1, n >= 1 and 0 <= r <= m")
    table, total = degree_bound(args.m, args.n, args.r)
    return {"m": args.m, "n": args.n, "r": args.r,
            "theta": {str(p): t for p, t in table.items()}, "total": total}


def cmd_sos_certify(args):
    form = HomogeneousInput.from_json(_load(args.input))
    out = []
    for r in args.r:
        cert = certify_sos_length(form, r, seed=args.seed, budget=args.budget, jobs=args.jobs,
                                  check_regularity=not args.no_check)
        out.append(cert.to_json(args.digits))
    return out[0] if len(out) == 1 else {"certificates": out}


def cmd_isolate(args):
    data = _load(args.input)
    if "parametrization" in data:
        data = data["parametrization"]
    rp = RationalParametrization.from_json(data)
    if rp.is_empty():
        return {"degree": rp.degree, "real_roots": 0, "points": []}
    q, nums, den, roots = real_points(rp)
    points = []
    for root, rational in roots:
        entry = {"interval": root.interval.to_strings()}
        if rational is not None:
            entry["coords"] = [fmt_rational(v) for v in rational]
        else:
            pt = AlgebraicPoint(root, nums, rp.variables, den)
            entry["coords"] = [{"enclosure": [fmt_rational(lo), fmt_rational(hi)]}
                               for lo, hi in pt.enclosures(30)]
            entry["coords_decimal"] = pt.coords_decimal(args.digits)
        points.append(entry)
    return {"degree": rp.degree, "squarefree_degree": q.degree, "real_roots": len(points),
            "variables": list(rp.variables), "points": points}


_DEFAULTS = {"seed": 0, "jobs": 1, "digits": 20, "output": None, "verbose": False}


def build_parser():
    # global flags go before or after the subcommand; SUPPRESS keeps a
    # subcommand from resetting a value given earlier
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    common.add_argument("--digits", type=int, default=argparse.SUPPRESS)
    common.add_argument("-o", "--output", default=argparse.SUPPRESS)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    parser = _Parser(prog="exactsdp", description="Exact rank-constrained SDP solver.",
                     parents=[common])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("solve", parents=[common], help="solve an SDP instance")
    p.add_argument("input")
    p.add_argument("-r", type=int, help="override the rank bound")
    p.add_argument("--cost", help='"generic" or comma separated rationals')
    p.add_argument("--no-check", action="store_true", help="skip the regularity check")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check-reg", parents=[common],
                       help="regularity of the incidence varieties for rank p")
    p.add_argument("input")
    p.add_argument("p", type=int)
    p.set_defaults(func=cmd_check_reg)

    p = sub.add_parser("degree-bound", parents=[common], help="theta table and total degree bound")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("r", type=int)
    p.set_defaults(func=cmd_degree_bound)

    p = sub.add_parser("sos-certify", parents=[common],
                       help="sum-of-squares length certificate")
    p.add_argument("input")
    p.add_argument("r", type=int, nargs="+")
    p.add_argument("--no-check", action="store_true", help="skip the regularity check")
    p.set_defaults(func=cmd_sos_certify)

    p = sub.add_parser("isolate", parents=[common],
                       help="isolate the real points of a parametrization")
    p.add_argument("input")
    p.set_defaults(func=cmd_isolate)

    return parser


def _fail(code, kind, message, **extra):
    err = {"error": kind, "message": message}
    err.update(extra)
    print(json.dumps(err, sort_keys=True), file=sys.stderr)
    return code


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc), usage=parser.format_usage().strip())
    for key, value in _DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    args.budget = default_step_budget()
    try:
        result = args.func(args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, "usage", str(exc))
    except RegularityError as exc:
        return _fail(EXIT_REGULARITY, "regularity", str(exc), p=exc.p,
                     iota=list(exc.iota) if exc.iota is not None else None)
    except DimensionError as exc:
        src = None
        if exc.source is not None:
            src = [exc.source[0], list(exc.source[1])]
        return _fail(EXIT_DIMENSION, "dimension", str(exc), source=src)
    except ResourceError as exc:
        return _fail(EXIT_RESOURCE, "resource", str(exc))
    except (ExactSDPError, ValueError, KeyError, TypeError) as exc:
        return _fail(EXIT_USAGE, "input", f"{type(exc).__name__}: {exc}")
    text = json.dumps(result, indent=1, sort_keys=True) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
