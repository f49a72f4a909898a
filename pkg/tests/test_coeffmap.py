import itertools
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lspace.coeffmap import (
    CoefficientPoint,
    contour_level,
    cover_degree,
    discriminant,
    discriminant3,
    dual_coefficients,
    kappa_line_discriminant,
    kappa_line_parameters,
    kappa_line_point,
    to_coefficients,
)
from lspace.spectra import DotDiagram, RefinedSignature, SpectralPoint, point_from_landscape

from oracles import R0C5_LAMBDA, SYM2_DELTA_COEFFICIENT_POINT

small = st.integers(-40, 40).map(lambda k: mp.mpf(k) / 4)


@st.composite
def balanced_diagrams(draw, max_degree=6):
    """Diagrams with quarter-integer points, balanced exactly."""
    d2 = draw(st.integers(0, max_degree // 2))
    d1 = draw(st.integers(0 if d2 else 1, max_degree - 2 * d2))
    dp = draw(st.integers(0, d1))
    pts = [draw(small) for _ in range(d1)]
    pairs = [[draw(small), Fraction(draw(st.integers(1, 12)), 2)] for _ in range(d2)]
    total = sum(pts) + 2 * sum(l for l, _ in pairs)
    if d1:
        pts[-1] -= total
    else:
        pairs[-1][0] -= total / 2
    return DotDiagram(tuple(pts[:dp]), tuple(pts[dp:]), tuple(map(tuple, pairs)))


def _scale(dd):
    return 1 + max(abs(z) for z, _ in dd.points())


def test_zero_point():
    c = to_coefficients(SpectralPoint((0, 0, 0), (0, 0, 0)))
    assert c.coeffs == (0, 0)


def test_sym_square_delta_point():
    p = SpectralPoint((1,), (0,), ((Fraction(11), 0),))
    c = to_coefficients(p)
    assert (c[2], c[3]) == SYM2_DELTA_COEFFICIENT_POINT
    assert discriminant3(c) == -4 * 11 ** 6 == -7086244


def test_r0c5_expansion():
    with mp.workdps(40):
        lam = mp.mpf(R0C5_LAMBDA)
        kap = mp.mpf(5) / 2
        p = point_from_landscape("r0c5", (Fraction(5, 2), lam))
        c = to_coefficients(p)
        # the real root is -lam; the pair sits at lam/2 +- i kappa
        x = mp.mpf("0.37")
        direct = (x + lam) * ((x - lam / 2) ** 2 + kap ** 2)
        assert abs(mp.polyval([1, 0, c[2], c[3]], x) - direct) < mp.mpf(10) ** -30


def test_unbalanced_rejected():
    with pytest.raises(ValueError):
        to_coefficients(DotDiagram((1, 2, 3)))


@given(balanced_diagrams())
def test_dual_commutes(dd):
    with mp.workdps(40):
        a = to_coefficients(dd.dual())
        b = dual_coefficients(to_coefficients(dd))
        tol = mp.mpf(10) ** -25 * _scale(dd) ** dd.degree
        assert all(abs(x - y) <= tol for x, y in zip(a.coeffs, b.coeffs))


def test_dual_examples():
    assert dual_coefficients(CoefficientPoint((3, 5))).coeffs == (3, -5)
    assert dual_coefficients(CoefficientPoint((121, 0))).coeffs == (121, 0)


@given(balanced_diagrams(3))
def test_discriminant_sign_detects_pairs(dd):
    if dd.degree != 3:
        return
    D = discriminant3(to_coefficients(dd))
    if dd.signature.d_two:
        assert D < 0
    else:
        assert D >= 0


@given(balanced_diagrams(5))
def test_discriminant_general_matches_cubic(dd):
    with mp.workdps(50):
        c = to_coefficients(dd)
        tol = mp.mpf(10) ** -30 * _scale(dd) ** (dd.degree * (dd.degree - 1))
        if c.degree == 3:
            assert abs(discriminant(c) - discriminant3(c)) <= tol
        # discriminant = prod over pairs of (z_i - z_j)^2
        roots = [z for z, _ in dd.points()]
        direct = mp.fprod((a - b) ** 2 for a, b in itertools.combinations(roots, 2))
        assert abs(discriminant(c) - mp.re(direct)) <= tol


def test_discriminant_wrong_degree():
    with pytest.raises(ValueError):
        discriminant3(CoefficientPoint((1, 2, 3)))


@given(st.integers(1, 30), st.floats(-30, 30))
def test_kappa_line(k2, lam):
    mp.mp.dps = 40
    kap = mp.mpf(k2) / 2
    c = kappa_line_point(kap, lam)
    D = discriminant3(c)
    assert abs(D - kappa_line_discriminant(kap, lam)) <= 1e-20 * abs(D)
    # D <= -4 kappa^6, with equality at lam = 0
    assert D <= contour_level(kap) * (1 - 1e-25)
    assert abs(discriminant3(kappa_line_point(kap, 0)) - contour_level(kap)) <= 1e-20 * kap ** 6


@given(st.integers(1, 30), st.floats(-30, 30))
def test_kappa_line_inverse(k2, lam):
    mp.mp.dps = 30
    kap = mp.mpf(k2) / 2
    k, l = kappa_line_parameters(kappa_line_point(kap, lam))
    assert abs(k - kap) < 1e-8 and abs(l - lam) < 1e-8


@pytest.mark.parametrize("sig, n", [((3, 0, 0), 1), ((1, 2, 0), 3), ((2, 3, 1), 10)])
def test_cover_degree(sig, n):
    assert cover_degree(RefinedSignature(*sig)) == n


@pytest.mark.parametrize("d1", [1, 2, 3, 4])
def test_fiber_size(d1):
    # total fiber over a generic totally real point, across signatures with this d1
    assert sum(cover_degree(RefinedSignature(dp, d1 - dp, 0)) for dp in range(d1 + 1)) == 2 ** d1
