"""Second moments of the p-adic trace densities on the hypocycloid region and how
fast they approach the Sato-Tate density as p grows."""

import math

from lspace.classmeasures import (
    TraceDensity,
    integrate_over_triangle,
    sato_tate_density,
    second_moment,
    sup_distance,
    theoretical_second_moment,
)


def main():
    print("p      mass         second moment   expected   sup |f_p - f_inf|")
    for p in (1, 2, 3, 5, 11, 101, math.inf):
        d = TraceDensity(p)
        print(f"{p!s:<6s} {integrate_over_triangle(d):.8f} {second_moment(d):14.8f} "
              f"{theoretical_second_moment(p):10.6f}   {sup_distance(d, sato_tate_density, 31):.3e}")


if __name__ == "__main__":
    main()
