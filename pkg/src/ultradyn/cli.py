"""Command-line front end: every analysis as a subcommand with JSON output."""

import argparse
import os
import re
import sys

from ultradyn.errors import (
    DegeneracyError,
    NoCertificateError,
    ParseError,
    PreconditionError,
    PrecisionError,
    ResourceError,
    UnsupportedConfiguration,
)
from ultradyn.exactnum import fmt_q, is_prime, parse_point, val
from ultradyn.parser import parse_map, parse_poly
from ultradyn.serialize import copolygon_svg, dumps, envelope, newton_svg

EXIT_OK = 0
EXIT_PRECONDITION = 2
EXIT_INDETERMINATE = 3


class _Outcome:
    def __init__(self, payload, indeterminate=False):
        self.payload = payload
        self.indeterminate = indeterminate


def _prime(text):
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not a prime")
    return p


def _prime_list(text):
    return [_prime(t) for t in text.split(",") if t.strip()]


def _positive(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def _write_svg(path, svg):
    with open(path, "w") as fh:
        fh.write(svg)


# subcommands


def cmd_analyze(args):
    from ultradyn.dynamics.pcf import critical_points
    from ultradyn.dynamics.periodic import fixed_points

    phi = parse_map(args.map)
    pts, blocks = critical_points(phi)
    primes = args.prime or [2, 3]
    out = {
        "map": phi.render(),
        "degree": phi.degree,
        "critical_points": [fmt_q(x) for x in pts],
        "critical_blocks": [g.render() for g in blocks],
        "primes": [],
    }
    for p in primes:
        out["primes"].append({"prime": p, "fixed_points": [fp.to_json() for fp in fixed_points(phi, p)]})
    return _Outcome(out)


def cmd_copolygon(args):
    from ultradyn.newton import copolygon

    phi = parse_map(args.map)
    a = parse_point(args.center)
    pl = copolygon(phi, a, args.prime)
    if args.svg:
        _write_svg(args.svg, copolygon_svg(pl, args.prime))
    return _Outcome({"map": phi.render(), "center": fmt_q(a), "prime": args.prime, "polygon": pl.to_json()})


def cmd_newton(args):
    from ultradyn.newton import newton_polygon

    f = parse_poly(args.poly)
    if f.is_zero():
        raise PreconditionError("the zero polynomial has no Newton polygon")
    np_ = newton_polygon(f, args.prime)
    if args.svg:
        pts = [(i, val(c, args.prime)) for i, c in enumerate(f.coeffs) if c != 0]
        _write_svg(args.svg, newton_svg(pts, np_))
    return _Outcome({"poly": f.render(), "polygon": np_.to_json()})


def cmd_attract(args):
    from ultradyn.dynamics.attraction import find_attracted_critical, find_attracted_critical_cycle

    phi = parse_map(args.map)
    if args.period == 1 and args.residue is None:
        if args.gamma is None:
            raise PreconditionError("attract needs --gamma (a fixed point) or --period/--residue")
        cert = find_attracted_critical(phi, parse_point(args.gamma), args.prime)
    else:
        gamma = None if args.gamma is None else parse_point(args.gamma)
        cert = find_attracted_critical_cycle(
            phi, args.prime, args.period, gamma=gamma, residue=args.residue, precision=args.precision
        )
    return _Outcome({"map": phi.render(), "certificate": cert.to_json()})


def _pcf_config(args):
    from ultradyn.dynamics.pcf import PCFConfig

    kw = {}
    if args.max_steps is not None:
        kw["max_steps"] = args.max_steps
    if args.height_cap is not None:
        kw["height_cap"] = args.height_cap
    return PCFConfig(**kw)


def cmd_pcf(args):
    from ultradyn.dynamics.pcf import INDETERMINATE, pcf_check

    phi = parse_map(args.map)
    cert = pcf_check(phi, _pcf_config(args))
    return _Outcome({"map": phi.render(), "certificate": cert.to_json()}, cert.verdict == INDETERMINATE)


def cmd_reduction(args):
    from ultradyn.dynamics.reduction import INDETERMINATE, good_reduction

    phi = parse_map(args.map)
    rep = good_reduction(phi, args.prime)
    return _Outcome({"map": phi.render(), "report": rep.to_json()}, rep.verdict == INDETERMINATE)


def cmd_heights(args):
    from ultradyn.dynamics.pcf import PCF, pcf_check
    from ultradyn.heights import quadratic_pcf_height_check, multiplier_heights, pcf_fixed_multiplier_bound

    phi = parse_map(args.map)
    out = {"map": phi.render(), "multiplier_heights": multiplier_heights(phi, args.period).to_json()}
    if phi.degree >= 2:
        out["pcf_bound"] = pcf_fixed_multiplier_bound(phi.degree).to_json()
    if phi.degree == 2:
        cert = pcf_check(phi)
        if cert.verdict == PCF:
            out["pcf_height_check"] = quadratic_pcf_height_check(phi, cert).to_json()
        else:
            out["pcf_height_check"] = {"skipped": f"pcf verdict {cert.verdict}"}
    return _Outcome(out)


def cmd_cycles(args):
    from ultradyn.dynamics.periodic import count_attracting_cycles

    phi = parse_map(args.map)
    rep = count_attracting_cycles(phi, args.prime, args.max_period)
    return _Outcome({"map": phi.render(), "report": rep.to_json()})


def cmd_search(args):
    from ultradyn.search import SearchConfig, enumerate_family

    cfg = SearchConfig(jobs=args.jobs)
    if args.max_steps is not None:
        cfg.max_steps = args.max_steps
    if args.height_cap is not None:
        cfg.height_cap = args.height_cap

    def progress(k, n, counts):
        if args.progress:
            print(f"cell {k}/{n} {counts}", file=sys.stderr)

    if args.out:
        mode = "a" if args.resume and os.path.exists(args.resume) else "w"
        with open(args.out, mode) as fh:
            res = enumerate_family(args.family, args.height_bound, cfg, out=fh, resume=args.resume, progress=progress)
    else:
        res = enumerate_family(args.family, args.height_bound, cfg, resume=args.resume, progress=progress)
    out = res.summary()
    out["classes"] = [c.to_json() for c in res.classes]
    out["hits"] = [h.to_json() for h in res.hits] if not args.out else len(res.hits)
    return _Outcome(out)


def cmd_epsilon(args):
    from ultradyn.dynamics.thresholds import epsilon

    rows = [epsilon(p, args.degree, args.kind).to_json() for p in args.primes]
    return _Outcome({"degree": args.degree, "kind": args.kind, "table": rows})


# parser


def build_parser():
    ap = argparse.ArgumentParser(prog="ultradyn", description="p-adic dynamics of rational maps over Q")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the JSON report to this file instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze", parents=[common], help="fixed points, multipliers and classifications per prime")
    s.add_argument("map")
    s.add_argument("--prime", type=_prime, action="append")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("copolygon", parents=[common], help="valuation polygon of a map at a center")
    s.add_argument("map")
    s.add_argument("--prime", type=_prime, required=True)
    s.add_argument("--center", default="0")
    s.add_argument("--svg")
    s.set_defaults(func=cmd_copolygon)

    s = sub.add_parser("newton", parents=[common], help="Newton polygon of a polynomial")
    s.add_argument("poly")
    s.add_argument("--prime", type=_prime, required=True)
    s.add_argument("--svg")
    s.set_defaults(func=cmd_newton)

    s = sub.add_parser("attract", parents=[common], help="attraction certificate for a fixed point or cycle")
    s.add_argument("map")
    s.add_argument("--prime", type=_prime, required=True)
    s.add_argument("--gamma")
    s.add_argument("--period", type=_positive, default=1)
    s.add_argument("--residue", type=int)
    s.add_argument("--precision", type=_positive, default=40)
    s.set_defaults(func=cmd_attract)

    s = sub.add_parser("pcf", parents=[common], help="post-critical finiteness check")
    s.add_argument("map")
    s.add_argument("--max-steps", type=_positive)
    s.add_argument("--height-cap", type=float)
    s.set_defaults(func=cmd_pcf)

    s = sub.add_parser("reduction", parents=[common], help="good / potentially good / bad reduction")
    s.add_argument("map")
    s.add_argument("--prime", type=_prime, required=True)
    s.set_defaults(func=cmd_reduction)

    s = sub.add_parser("heights", parents=[common], help="multiplier heights and the quadratic PCF bound")
    s.add_argument("map")
    s.add_argument("--period", type=_positive, default=1)
    s.set_defaults(func=cmd_heights)

    s = sub.add_parser("cycles", parents=[common], help="count attracting cycles (needs p > d)")
    s.add_argument("map")
    s.add_argument("--prime", type=_prime, required=True)
    s.add_argument("--max-period", type=_positive, default=2)
    s.set_defaults(func=cmd_cycles)

    s = sub.add_parser("search", parents=[common], help="bounded-height PCF search over a quadratic family")
    s.add_argument("--family", choices=("poly_slice", "fixed_normal_form"), default="poly_slice")
    s.add_argument("--height-bound", type=_positive, required=True)
    s.add_argument("--max-steps", type=_positive)
    s.add_argument("--height-cap", type=float)
    s.add_argument("--jobs", type=_positive, default=1)
    s.add_argument("--out", help="JSON-lines file for hits")
    s.add_argument("--resume", help="checkpoint file recording the last completed cell")
    s.add_argument("--progress", action="store_true")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("epsilon", parents=[common], help="threshold table")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("--primes", type=_prime_list, default=[2, 3, 5])
    s.add_argument("--kind", choices=("general", "polynomial", "refined"), default="general")
    s.set_defaults(func=cmd_epsilon)
    return ap


def _error(args, exc, code):
    body = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError):
        body["position"] = exc.position
        body["expected"] = list(exc.expected)
    if isinstance(exc, NoCertificateError) and exc.details:
        body["details"] = exc.details
    return code, envelope(args.command, {"error": body}), args.output


_OPTION = re.compile(r"^--?[A-Za-z][\w-]*(=.*)?$")


def _protect_expressions(argv):
    """Expressions such as "-z^2+1" must not be taken for options; a leading
    space keeps them positional and the parser ignores it."""
    return [a if not a.startswith("-") or _OPTION.match(a) or a == "--" else " " + a for a in argv]


def run(argv=None):
    """(exit status, JSON-ready report, output path or None)."""
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_protect_expressions(argv))
    try:
        outcome = args.func(args)
    except (ParseError, PreconditionError, UnsupportedConfiguration) as exc:
        return _error(args, exc, EXIT_PRECONDITION)
    except (ResourceError, DegeneracyError, PrecisionError, NoCertificateError) as exc:
        return _error(args, exc, EXIT_INDETERMINATE)
    code = EXIT_INDETERMINATE if outcome.indeterminate else EXIT_OK
    return code, envelope(args.command, outcome.payload), args.output


def main(argv=None):
    code, report, path = run(argv)
    text = dumps(report)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    elif code != EXIT_OK and "error" in report["result"]:
        sys.stderr.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
