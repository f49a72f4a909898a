"""Plancherel constants, the predicted rectangle masses, and (given a data file)
observed counts and second moments.

    python scripts/landscape_stats.py [path/to/lpoints.jsonl]
"""

import sys

import mpmath as mp

from lspace.classmeasures import theoretical_second_moment
from lspace.measures import coefficient_density3, plancherel_constant, region_mass
from lspace.store import empirical_moments, ingest, landscape_density, rectangle_stats

RECTANGLE = ((-300, -100), (2000, 4000))


def main(path=None):
    mp.mp.dps = 30
    for d in range(1, 7):
        print(f"P_{d} = {mp.nstr(plancherel_constant(d), 12)}")

    def cplx(a, b):
        return coefficient_density3(a, b, "+c") + coefficient_density3(a, b, "-c")

    print("complex-pair mass of", RECTANGLE, "=", round(region_mass(cplx, RECTANGLE)[0], 4))
    print("level-1 prediction                =", round(region_mass(landscape_density(), RECTANGLE)[0], 4))
    if path is None:
        return
    recs = ingest(path)
    st = rectangle_stats(recs, RECTANGLE)
    print(f"{len(recs)} records; {st.count} in the rectangle (raw {st.raw_count}), ratio {st.ratio:.4f}")
    for p, m in empirical_moments(recs).items():
        print(f"E|a_{p}|^2 = {m:.4f}   Plancherel {theoretical_second_moment(p):.4f}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
