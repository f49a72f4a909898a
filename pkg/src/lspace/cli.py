"""Command-line entry point: ``lspace <subcommand> ...``.

Exit codes: 0 success, 1 a verification or certificate check failed,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import mpmath as mp
import numpy as np

from . import __version__

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("lspace")


class UsageError(Exception):
    pass


def _coord(text: str):
    """Exact Fraction for short rationals like 5/2 or 2.5, mpf otherwise."""
    if "/" in text:
        return Fraction(text)
    return mp.mpf(text)


def _point(gtype, coords):
    from .spectra import point_from_landscape

    if len(coords) != 2:
        raise UsageError("degree-3 points take two landscape coordinates")
    return point_from_landscape(gtype, [_coord(c) for c in coords])


def _load_records(path):
    from .store import ingest

    return ingest(path) if path else []


def _pick(records, index):
    if not records:
        raise UsageError("the store is empty")
    if not -len(records) <= index < len(records):
        raise UsageError(f"index {index} out of range for {len(records)} records")
    return records[index]


def _ctx(args, **kw):
    from .afe import PrecisionContext

    return PrecisionContext(working_digits=args.digits, **kw)


def _print(obj):
    print(json.dumps(obj, indent=2, default=str))


# subcommands


def cmd_search(args):
    from .solver import refine_parameters
    from .store import append, record_from_lpoint

    start = None
    if args.start_from:
        start = _pick(_load_records(args.start_from), args.index).prime_coefficients()
    with mp.workdps(args.digits + 10):
        p = _point(args.gamma_type, args.start)
        L, state = refine_parameters(p, tuple(args.free), _ctx(args), step=mp.mpf(args.step),
                                     max_iter=args.max_iter, start=start)
    rec = record_from_lpoint(L, source="search")
    if args.store:
        append(rec, args.store)
    print(rec.to_json())
    for coords, residual, gained in state.history:
        log.info("%s residual %s gained %s", [str(c) for c in coords], mp.nstr(residual, 3), gained)
    return EXIT_OK


def cmd_verify(args):
    from .solver import verify_lpoint

    recs = _load_records(args.store)
    targets = range(len(recs)) if args.all else [args.index]
    failed = 0
    for i in targets:
        rec = _pick(recs, i)
        with mp.workdps(args.digits + 10):
            rep = verify_lpoint(rec.to_lpoint(), _ctx(args), threshold=args.threshold)
        failed += not rep.passed
        _print({"index": i, "gamma_type": rec.gamma_type, "passed": rep.passed,
                "residual": mp.nstr(rep.residual, 3),
                "stored_residual": None if rep.stored_residual is None else mp.nstr(rep.stored_residual, 3),
                "digits": {str(k): round(v, 2) for k, v in rep.digits.items()}})
    return EXIT_FAIL if failed else EXIT_OK


def cmd_measure(args):
    from .measures import coefficient_density3, plancherel_constant, plancherel_constant_via_volumes, region_mass
    from .store import landscape_density

    out = {"degree": args.degree, "P": mp.nstr(plancherel_constant(args.degree), 15)}
    if args.volumes:
        out["P_volumes"] = mp.nstr(plancherel_constant_via_volumes(args.degree), 15)
    if args.rect:
        if args.degree != 3:
            raise UsageError("--rect is available for degree 3")
        c2lo, c2hi, c3lo, c3hi = args.rect
        if args.signature:
            dens = lambda a, b: coefficient_density3(a, b, args.signature, args.mode)
        else:
            dens = landscape_density(mode=args.mode)
        rng = np.random.default_rng(args.seed)
        mass, err = region_mass(dens, [(c2lo, c2hi), (c3lo, c3hi)], args.method, args.budget, rng)
        out.update({"rectangle": args.rect, "mass": mass, "error": err})
    _print(out)
    return EXIT_OK


def _exclude_one(job):
    gtype, coords, N, damped, digits = job
    from .exclusion import exclusion_certificate

    cert = exclusion_certificate(_point(gtype, coords), N, damped=damped, digits=digits)
    return cert.to_dict()


def cmd_exclude(args):
    jobs = [(args.gamma_type, c, args.conductor, not args.plain, args.digits) for c in args.point]
    if args.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            results = list(pool.map(_exclude_one, jobs))
    else:
        results = [_exclude_one(j) for j in jobs]
    _print(results if len(results) > 1 else results[0])
    return EXIT_OK


def cmd_exclude_frontier(args):
    from .exclusion import exclusion_frontier

    r = exclusion_frontier(args.gamma_type, [_coord(c) for c in args.origin], [float(d) for d in args.direction],
                           args.resolution, args.r_max, N=args.conductor, damped=not args.plain,
                           digits=args.digits)
    _print({"gamma_type": args.gamma_type, "origin": args.origin, "direction": args.direction, "radius": r})
    return EXIT_OK


def cmd_zplot(args):
    from .afe import zero_scan
    from .plots import emit_plot

    rec = _pick(_load_records(args.store), args.index)
    L = rec.to_lpoint()
    emit_plot("z-curve", L, args.out, t_range=(args.t0, args.t1), step=args.step)
    scan = zero_scan(L, (args.t0, args.t1), step=args.step, max_unknown=math.inf)
    _print({"out": args.out, "zeros": [round(z, 10) for z in scan.zeros], "max_unknown": scan.max_unknown})
    return EXIT_OK


def cmd_stats(args):
    from .store import rectangle_stats

    recs = _load_records(args.store)
    c2lo, c2hi, c3lo, c3hi = args.rect
    st = rectangle_stats(recs, ((c2lo, c2hi), (c3lo, c3hi)))
    _print({"rectangle": args.rect, "count": st.count, "raw_count": st.raw_count,
            "predicted": round(st.predicted, 4), "ratio": round(st.ratio, 4)})
    return EXIT_OK


def cmd_classmeasure(args):
    from .classmeasures import TraceDensity, second_moment, theoretical_second_moment

    out = []
    for p in args.p:
        d = TraceDensity(p, power=args.power)
        out.append({"p": p, "second_moment": second_moment(d), "expected": theoretical_second_moment(p)})
    _print(out)
    return EXIT_OK


def cmd_moments(args):
    from .classmeasures import theoretical_second_moment
    from .store import empirical_moments

    recs = _load_records(args.store)
    m = empirical_moments(recs, tuple(args.p))
    _print({str(p): {"empirical": m[p], "plancherel": theoretical_second_moment(p), "records": len(recs)}
            for p in args.p})
    return EXIT_OK


def cmd_ingest(args):
    from .store import emit, ingest

    recs = ingest(args.path, args.columns)
    if args.out:
        emit(recs, args.out)
    _print({"records": len(recs), "out": args.out})
    return EXIT_OK


def cmd_plot(args):
    from .classmeasures import TraceDensity, TraceSample
    from .plots import emit_plot

    if args.kind in ("parameter-landscape", "coefficient-landscape"):
        inputs, kw = _load_records(args.store), {}
    elif args.kind == "z-curve":
        inputs, kw = _pick(_load_records(args.store), args.index).to_lpoint(), {}
    elif args.kind == "density-contour":
        inputs = TraceDensity(args.p)
        kw = {"xlim": (-1.6, 3.1), "ylim": (-2.7, 2.7)}
    else:
        recs = _load_records(args.store)
        inputs = [TraceSample.from_complex(complex(r.prime_coefficients()[args.p])) for r in recs
                  if args.p in r.prime_coefficients()]
        kw = {}
    emit_plot(args.kind, inputs, args.out, **kw)
    _print({"out": args.out})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lspace", description="Degree-3 L-function landscape tools.")
    ap.add_argument("--digits", type=int, default=60, help="working decimal digits (default 60)")
    ap.add_argument("--threads", type=int, default=1, help="worker processes for batch jobs")
    ap.add_argument("--seed", type=int, default=0, help="random seed")
    ap.add_argument("-v", "--verbose", action="store_true")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="refine a candidate L-point from starting coordinates")
    s.add_argument("gamma_type")
    s.add_argument("--start", nargs=2, required=True, metavar=("X1", "X2"))
    s.add_argument("--free", nargs="+", default=["lambda"])
    s.add_argument("--start-from", help="store whose record supplies starting coefficients")
    s.add_argument("--index", type=int, default=0)
    s.add_argument("--step", default="0.01")
    s.add_argument("--max-iter", type=int, default=14)
    s.add_argument("--store", help="append the result to this store")
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify", help="check stored records against fresh equations")
    s.add_argument("store")
    s.add_argument("--index", type=int, default=0)
    s.add_argument("--all", action="store_true")
    s.add_argument("--threshold", type=float, default=1e-8)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("measure", help="Plancherel constant and rectangle masses")
    s.add_argument("--degree", type=int, default=3)
    s.add_argument("--volumes", action="store_true", help="also compute P via the volume ratio")
    s.add_argument("--rect", nargs=4, type=float, metavar=("C2LO", "C2HI", "C3LO", "C3HI"))
    s.add_argument("--signature", help="one refined signature, e.g. +c (default: all admissible)")
    s.add_argument("--mode", choices=("prime", "exact"), default="prime")
    s.add_argument("--method", choices=("quad", "mc"), default="quad")
    s.add_argument("--budget", type=int, default=48)
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("exclude", help="explicit-formula certificate at given points")
    s.add_argument("gamma_type")
    s.add_argument("--point", nargs=2, action="append", required=True, metavar=("X1", "X2"))
    s.add_argument("--conductor", type=int, default=1)
    s.add_argument("--plain", action="store_true", help="undamped Fejer kernel (assumes zeros on the line)")
    s.set_defaults(func=cmd_exclude)

    s = sub.add_parser("exclude-frontier", help="distance along a ray where certificates stop")
    s.add_argument("gamma_type")
    s.add_argument("--origin", nargs=2, required=True)
    s.add_argument("--direction", nargs=2, required=True)
    s.add_argument("--resolution", type=float, default=0.05)
    s.add_argument("--r-max", type=float, default=40.0)
    s.add_argument("--conductor", type=int, default=1)
    s.add_argument("--plain", action="store_true")
    s.set_defaults(func=cmd_exclude_frontier)

    s = sub.add_parser("zplot", help="Z(t) curve and zeros of a stored record")
    s.add_argument("store")
    s.add_argument("--index", type=int, default=0)
    s.add_argument("--t0", type=float, default=0.0)
    s.add_argument("--t1", type=float, default=30.0)
    s.add_argument("--step", type=float, default=0.05)
    s.add_argument("--out", default="zcurve.svg")
    s.set_defaults(func=cmd_zplot)

    s = sub.add_parser("stats", help="rectangle counts against the Plancherel mass")
    s.add_argument("store")
    s.add_argument("--rect", nargs=4, type=float, required=True, metavar=("C2LO", "C2HI", "C3LO", "C3HI"))
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("classmeasure", help="second moments of the p-adic trace densities")
    s.add_argument("--p", nargs="+", type=int, default=[2, 3, 5])
    s.add_argument("--power", type=int, default=1)
    s.set_defaults(func=cmd_classmeasure)

    s = sub.add_parser("moments", help="empirical second moments of a_p over a store")
    s.add_argument("store")
    s.add_argument("--p", nargs="+", type=int, default=[2, 3, 5])
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("ingest", help="validate a JSON-lines or CSV file")
    s.add_argument("path")
    s.add_argument("--columns", help="JSON column map for CSV input")
    s.add_argument("--out", help="write the validated records here")
    s.set_defaults(func=cmd_ingest)

    from .plots import PLOT_KINDS

    s = sub.add_parser("plot", help="emit an SVG (or CSV) plot")
    s.add_argument("kind", choices=PLOT_KINDS)
    s.add_argument("--store")
    s.add_argument("--index", type=int, default=0)
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.digits < 30:
        print("error: --digits must be at least 30", file=sys.stderr)
        return EXIT_USAGE
    mp.mp.dps = args.digits + 10
    np.random.seed(args.seed)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as exc:
        # solver failures (no convergence, divergence) count as failed checks
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
