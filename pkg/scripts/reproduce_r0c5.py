"""Refine the degree-3 point of type r0c5 from a rough start and print what comes out.

    python scripts/reproduce_r0c5.py [--start 16.97] [--digits 60] [--store out.jsonl]

Takes a couple of minutes at the default precision.
"""

import argparse
import logging
from fractions import Fraction

import mpmath as mp

from lspace.afe import PrecisionContext, z_value
from lspace.solver import refine_parameters
from lspace.spectra import point_from_landscape
from lspace.store import append, record_from_lpoint


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--start", default="16.97")
    ap.add_argument("--digits", type=int, default=60)
    ap.add_argument("--store")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    mp.mp.dps = args.digits + 10
    start = point_from_landscape("r0c5", (Fraction(5, 2), mp.mpf(args.start)))
    ctx = PrecisionContext(working_digits=args.digits)
    L, state = refine_parameters(start, ctx=ctx)

    print("lambda   ", mp.nstr(-L.point.lambdas[0], 20))
    print("residual ", mp.nstr(state.residual, 3))
    for p in sorted(L.coefficients)[:8]:
        a = L.coefficients[p]
        print(f"a_{p:<3d}    ", mp.nstr(mp.re(a), 12), mp.nstr(mp.im(a), 12))
    z = z_value(L, 5, PrecisionContext(tail_bound=1e-8), full=True)
    print("Z(5)     ", mp.nstr(z.value, 14), f"(+- {z.tail:.1e})")
    if args.store:
        append(record_from_lpoint(L, source="scripts/reproduce_r0c5.py"), args.store)


if __name__ == "__main__":
    main()
