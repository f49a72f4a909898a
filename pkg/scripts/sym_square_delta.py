"""Recover the first symmetric-square coefficients of the discriminant form by solving
the approximate functional equations, with the larger primes held at their known values.

Prints the error of the solved b_p (p <= 13) at several working precisions.
"""

import sys
import time
from fractions import Fraction

import mpmath as mp
import numpy as np

from lspace.afe import PrecisionContext
from lspace.modular import primes_up_to, ramanujan_tau
from lspace.solver import assemble_system, solve_system
from lspace.spectra import SpectralPoint

POINT = SpectralPoint((1,), (0,), ((Fraction(11), 0),))


def run(digits):
    with mp.workdps(digits + 10):
        b = {p: mp.mpf(ramanujan_tau(p)) ** 2 / mp.mpf(p) ** 11 - 1 for p in primes_up_to(400)}
        known = {p: v for p, v in b.items() if p > 13}
        # the truncation tail has to shrink with the precision or it caps the accuracy
        ctx = PrecisionContext(working_digits=digits, truncation_cutoff=None,
                               tail_bound=10.0 ** -(digits - 10))
        system = assemble_system(POINT, ctx=ctx, known=known, self_dual=True, cutoff=None)
        best = solve_system(system, n_random=4, rng=np.random.default_rng(1))[0]
        return max(abs(v - b[p]) for p, v in best.coefficients.items() if p <= 13), system.cutoff


def main(ladder):
    print("digits  error      cutoff  seconds")
    for d in ladder:
        t = time.time()
        err, cutoff = run(d)
        print(f"{d:<7d} {mp.nstr(err, 3):<10s} {cutoff!s:<7s} {time.time() - t:.1f}")


if __name__ == "__main__":
    main([int(x) for x in sys.argv[1:]] or [40, 60])
