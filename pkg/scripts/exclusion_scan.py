"""Explicit-formula certificates on a grid of r0r0r0 points, plus one frontier.

    python scripts/exclusion_scan.py [--step 2] [--max 10] [--threads 4]

Prints one line per grid point (excluded or not, best value, width) and the
distance along the first axis where certificates stop excluding.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor

import mpmath as mp

from lspace.exclusion import exclusion_certificate, exclusion_frontier
from lspace.spectra import point_from_landscape


def certify(ab):
    a, b = ab
    cert = exclusion_certificate(point_from_landscape("r0r0r0", (mp.mpf(a), mp.mpf(b))))
    return a, b, cert.verdict, mp.nstr(cert.value, 6), cert.test_function.width


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--step", type=float, default=2.0)
    ap.add_argument("--max", type=float, default=10.0)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()

    n = int(args.max / args.step)
    grid = [(i * args.step, j * args.step) for i in range(n + 1) for j in range(i + 1)]
    with ProcessPoolExecutor(max_workers=args.threads) as pool:
        for a, b, verdict, value, width in pool.map(certify, grid):
            print(f"{a:6.2f} {b:6.2f}  {verdict:<12s} {value:>12s}  width {width:.4f}")
    r = exclusion_frontier("r0r0r0", (0, 0), (1, 0), 0.25)
    print("frontier along (1, 0):", r)


if __name__ == "__main__":
    main()
