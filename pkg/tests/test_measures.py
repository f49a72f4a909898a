from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from lspace.measures import (
    MeasureDensity,
    ModAbsKind,
    closed_form_density3,
    coefficient_density3,
    cusp_form_count,
    cusp_form_count_closed_form,
    d2_counts,
    dim_Sk,
    mod_abs,
    mu_density,
    mu_prime_density,
    nu1,
    plancherel_constant,
    plancherel_constant_via_volumes,
    pushforward_mass_mc,
    pushforward_samples,
    region_mass,
    secondary_density,
)
from lspace.spectra import RefinedSignature, SpectralPoint, point_from_landscape

from oracles import P3_PRINTED, SECONDARY_MM_10000, SECONDARY_PP_10000

PLUS, MINUS, ZERO = ModAbsKind.PLUS, ModAbsKind.MINUS, ModAbsKind.ZERO


def test_mod_abs_examples():
    assert abs(mod_abs(0, MINUS) - 2 / mp.pi) < 1e-15
    assert mod_abs(0, PLUS) == 0
    assert mod_abs(-3.5, ZERO) == 3.5


@given(st.floats(-60, 60, allow_nan=False))
def test_mod_abs_ordering(t):
    p, z, m = mod_abs(t, PLUS), mod_abs(t, ZERO), mod_abs(t, MINUS)
    assert p <= z <= m
    assert mod_abs(-t, PLUS) == p and mod_abs(-t, MINUS) == m
    if abs(t) > 12:
        assert m - p < 1e-6


def test_mod_abs_double_zero():
    # |t|_+ ~ pi t^2 / 2 near 0
    assert abs(mod_abs(mp.mpf("1e-5"), PLUS) / mp.mpf("1e-10") - mp.pi / 2) < 1e-6


@pytest.mark.parametrize("d, value", [(1, Fraction(1)), (2, Fraction(1, 12))])
def test_plancherel_constant_small(d, value):
    with mp.workdps(40):
        assert abs(plancherel_constant(d) - mp.mpf(value.numerator) / value.denominator) < 1e-30


def test_plancherel_constant_three():
    mp.mp.dps = 40
    closed = mp.sqrt(3) * mp.zeta(3) / (128 * mp.pi ** 3)
    assert abs(plancherel_constant(3) - closed) < 1e-25
    assert mp.nstr(plancherel_constant(3), 4) == P3_PRINTED


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_plancherel_volume_route(d):
    with mp.workdps(30):
        assert abs(plancherel_constant_via_volumes(d) - plancherel_constant(d)) < 1e-10 * plancherel_constant(d)
        # the ratio does not depend on the radius
        assert abs(plancherel_constant_via_volumes(d, 3) - plancherel_constant_via_volumes(d, 50)) < 1e-20


def _random_point(sig, rng):
    a, b = (mp.mpf(x) for x in rng.uniform(-30, 30, 2))
    if sig == "+++":
        return SpectralPoint((0, 0, 0), (a, b, -a - b)), (a, b)
    if sig == "+--":
        # (a, b) = (delta = 1 shift, delta = 0 shift)
        return SpectralPoint((1, 0, 1), (a, b, -a - b)), (a, b)
    k = abs(a) / 3 + 0.1
    delta = 0 if sig == "+c" else 1
    return SpectralPoint((delta,), (-b,), ((k, b / 2),)), (k, -b)


@pytest.mark.parametrize("sig", ["+++", "+--", "+c", "-c"])
def test_mu_matches_closed_forms(sig):
    rng = np.random.default_rng(7)
    with mp.workdps(40):
        for _ in range(10_000 if sig in ("+c", "-c") else 2_500):
            p, (a, b) = _random_point(sig, rng)
            got, want = mu_density(p), closed_form_density3(sig, a, b)
            assert abs(got - want) <= mp.mpf(10) ** -20 * (1 + abs(want))


def test_closed_form_examples():
    P = plancherel_constant(3)
    assert abs(closed_form_density3("-c", 1, 0) - P / 2) < 1e-25
    assert closed_form_density3("+++", 2, 2) == 0
    assert closed_form_density3("+--", 0, 0) == 0


def test_mu_prime_vanishes_on_diagonal():
    p = point_from_landscape("r0r0r0", (mp.mpf(3), mp.mpf(3)))
    assert mu_prime_density(p) == 0


def test_measure_density_modes():
    p = point_from_landscape("r0r0r0", (mp.mpf(20), mp.mpf(4)))
    exact = MeasureDensity(RefinedSignature(3, 0, 0), "exact")
    approx = MeasureDensity(RefinedSignature(3, 0, 0), "euclidean")
    assert abs(exact(p) / approx(p) - 1) < 1e-6


def test_region_mass_rectangle():
    dens = lambda c2, c3: coefficient_density3(c2, c3, "+c") + coefficient_density3(c2, c3, "-c")
    mass, err = region_mass(dens, [(-300, -100), (2000, 4000)])
    assert abs(mass - 200 * 2000 * float(plancherel_constant(3))) < 1e-6
    assert round(mass) == 210
    assert region_mass(dens, [(0, 0), (1, 2)]) == (0.0, 0.0)


def test_region_mass_monte_carlo():
    f = lambda x, y: x * y
    mass, err = region_mass(f, [(0, 1), (0, 2)], "mc", 40, rng=3)
    assert abs(mass - 1.0) < 5 * err + 1e-3


def test_pushforward_uniform_chi_square():
    # mu' on X'_{+c} pushes forward to a constant density: samples in a rectangle are uniform
    rect = (-300.0, -100.0, 2000.0, 4000.0)
    pts = pushforward_samples(rect, 4000, rng=11)
    counts, _, _ = np.histogram2d(pts[:, 0], pts[:, 1], bins=6, range=[rect[:2], rect[2:]])
    res = stats.chisquare(counts.ravel())
    assert res.pvalue > 1e-3


def test_pushforward_mass_monte_carlo():
    rect = (-300.0, -100.0, 2000.0, 4000.0)
    mass, err = pushforward_mass_mc(rect, 400_000, rng=5)
    expected = 200 * 2000 * float(plancherel_constant(3)) / 2
    assert abs(mass - expected) < 5 * err


@pytest.mark.parametrize("k, dim", [(12, 1), (14, 0), (16, 1), (18, 1), (20, 1), (22, 1), (48, 4), (13, 0), (2, 0)])
def test_dim_Sk(k, dim):
    assert dim_Sk(k) == dim


def test_d2_counts_example():
    assert d2_counts(12)[:2] == (Fraction(529, 192), Fraction(11, 4))
    with pytest.raises(ValueError):
        d2_counts(13)


@pytest.mark.parametrize("K", range(13, 601, 12))
def test_cusp_closed_form_one_mod_twelve(K):
    assert cusp_form_count_closed_form(K) == cusp_form_count(K)


def test_cusp_closed_form_off_by_constant_at_multiples_of_twelve():
    # at K = 0 mod 12 the quadratic already counts level K + 1, missing by (2K - 13)/48
    for K in range(12, 601, 12):
        assert cusp_form_count_closed_form(K) - cusp_form_count(K) == -Fraction(2 * K - 13, 48)
    assert d2_counts(12)[2] == Fraction(37, 48)


def test_secondary_densities():
    pp = 24 * secondary_density("pp", 10_000)
    mm = 24 * secondary_density("mm", 10_000)
    assert SECONDARY_PP_10000[0] <= pp <= SECONDARY_PP_10000[1]
    assert SECONDARY_MM_10000[0] <= mm <= SECONDARY_MM_10000[1]
    # the c2 density tends to 1/12
    assert abs(secondary_density("c", 1e12) - mp.mpf(1) / 12) < 1e-6
    with pytest.raises(ValueError):
        secondary_density("c", 5)


def _nu1_brute(N):
    # count primitive characters mod N through the Moebius-type inversion on all characters
    from math import gcd

    def phi(n):
        return sum(1 for a in range(1, n + 1) if gcd(a, n) == 1)

    total = {}
    for M in range(1, N + 1):
        if N % M == 0:
            total[M] = phi(M) - sum(total[D] for D in total if M % D == 0 and D != M)
    return total[N]


@pytest.mark.parametrize("N", range(1, 201))
def test_nu1(N):
    assert nu1(N) == _nu1_brute(N)


def test_nu1_examples():
    assert [nu1(n) for n in (1, 2, 3, 4, 5, 8)] == [1, 0, 1, 1, 3, 2]
    with pytest.raises(ValueError):
        nu1(0)
