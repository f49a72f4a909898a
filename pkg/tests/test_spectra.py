from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lspace.spectra import (
    DotDiagram,
    GammaType,
    RefinedSignature,
    SpectralPoint,
    central_character_parity,
    component_count,
    dual,
    enumerate_signatures,
    epsilon_infinity,
    format_gamma_type,
    gamma_type_table,
    is_admissible,
    landscape_coordinates,
    parse_gamma_type,
    point_from_landscape,
    refined_signature,
)

gamma_types = st.builds(
    lambda ds, ks: GammaType(tuple(ds), tuple(ks)),
    st.lists(st.sampled_from([0, 1]), max_size=5),
    st.lists(st.integers(1, 40), max_size=3),
).filter(lambda g: g.degree > 0) if False else st.builds(
    GammaType,
    st.lists(st.sampled_from([0, 1]), min_size=1, max_size=5).map(tuple),
    st.lists(st.integers(1, 40), max_size=3).map(tuple),
)

reals = st.floats(-50, 50, allow_nan=False).map(lambda x: mp.mpf(round(x, 6)))


@pytest.mark.parametrize("text, deltas, kappas", [
    ("r0r0r0", (0, 0, 0), ()),
    ("r0c5", (0,), (Fraction(5, 2),)),
    ("r0r0r1r1r1c5", (0, 0, 1, 1, 1), (Fraction(5, 2),)),
    ("c3r1r0", (0, 1), (Fraction(3, 2),)),
])
def test_parse(text, deltas, kappas):
    g = parse_gamma_type(text)
    assert g.deltas == deltas
    assert g.kappas == kappas


@pytest.mark.parametrize("bad", ["", "r2", "c0", "r0x", "c", "r0c5 "])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_gamma_type(bad)


@given(gamma_types)
def test_print_parse_roundtrip(g):
    text = format_gamma_type(g)
    assert parse_gamma_type(text) == g
    assert format_gamma_type(parse_gamma_type(text)) == text


@pytest.mark.parametrize("text, sig", [("r0r0r0", (3, 0, 0)), ("r0r1r1", (1, 2, 0)), ("r1c22", (0, 1, 1))])
def test_refined_signature(text, sig):
    assert refined_signature(parse_gamma_type(text)) == RefinedSignature(*sig)


@pytest.mark.parametrize("text, chi", [("r0r0r0", 1), ("r0r0r1", -1), ("r1c22", 1), ("r0c5", 1), ("r0c4", -1)])
def test_central_character_parity(text, chi):
    assert central_character_parity(parse_gamma_type(text)) == chi


@pytest.mark.parametrize("text, N, ok", [("r0r1r1", 1, True), ("r1r1r1", 1, False), ("r0c5", 1, True),
                                         ("r0r0r1", 2, False)])
def test_admissible(text, N, ok):
    assert is_admissible(parse_gamma_type(text), N) is ok


def test_admissible_large_conductor_warns():
    with pytest.warns(UserWarning):
        assert is_admissible(parse_gamma_type("r1r1r1"), 7)


@pytest.mark.parametrize("text, eps", [("r0r1r1", -1), ("r0r0r0", 1), ("r1c22", 1), ("r0c5", -1)])
def test_epsilon_infinity(text, eps):
    assert epsilon_infinity(parse_gamma_type(text)) == eps


@given(gamma_types)
def test_parity_is_square_of_sign(g):
    assert central_character_parity(g) == epsilon_infinity(g) ** 2


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.data())
def test_dual_involution(dp, dm, d2, data):
    if dp + dm + d2 == 0:
        return
    lams = [data.draw(reals) for _ in range(dp + dm)]
    pairs = [(Fraction(data.draw(st.integers(1, 30)), 2), data.draw(reals)) for _ in range(d2)]
    p = SpectralPoint((0,) * dp + (1,) * dm, tuple(lams), tuple(pairs))
    q = dual(p)
    assert dual(q) == p
    assert q.signature == p.signature
    g, gq = p.gamma_type, q.gamma_type
    assert is_admissible(g) == is_admissible(gq)
    assert abs(epsilon_infinity(gq)) == 1
    # the sign depends on the discrete data only, so duality leaves it fixed; it is
    # real whenever conjugation can act on the Gamma-factor alone
    assert epsilon_infinity(gq) == epsilon_infinity(g)


def test_dual_examples():
    p = SpectralPoint((0, 0, 0), (mp.mpf(3), mp.mpf(-1), mp.mpf(-2)))
    assert dual(p).lambdas == (mp.mpf(-3), mp.mpf(1), mp.mpf(2))[::-1] or sorted(dual(p).lambdas) == [-3, 1, 2]
    zero = SpectralPoint((0, 0, 0), (0, 0, 0))
    assert dual(zero) == zero
    q = point_from_landscape("r0c5", (Fraction(5, 2), mp.mpf("16.976")))
    coords, used = landscape_coordinates(dual(q))
    assert used and coords[1] == mp.mpf("16.976")


@pytest.mark.parametrize("d", range(1, 9))
def test_component_count(d):
    assert component_count(d) == len(enumerate_signatures(d))


@pytest.mark.parametrize("d, n", [(1, 2), (2, 4), (3, 6)])
def test_component_count_examples(d, n):
    assert component_count(d) == n


def test_table_small_degrees():
    rows = gamma_type_table(3)
    d3 = [r for r in rows if r[0] == 3]
    assert [r[4] for r in d3] == ["+++", "++-", "+--", "---", "+c", "-c"]
    real = {r[3]: (r[1], r[2]) for r in rows if "c" not in r[4]}
    assert real["r0r0r0"] == (1, 1)
    assert real["r0r0r1"] == (-1, 1j)
    assert real["r0r1r1"] == (1, -1)
    assert real["r1r1r1"] == (-1, -1j)
    assert real["r0"] == (1, 1) and real["r1"] == (-1, 1j)
    cplx = {r[3]: (r[1], r[2]) for r in rows if "c" in r[4]}
    assert cplx["c2k"] == ("(-1)^k", "i^k")
    assert cplx["r1c2k"] == ("(-1)^(k+1)", "i^(k+1)")


@given(st.lists(reals, max_size=3), st.lists(reals, max_size=3),
       st.lists(st.tuples(reals, st.integers(1, 20)), max_size=2))
def test_dot_diagram_roundtrip(zp, zm, z2):
    if not (zp or zm or z2):
        return
    dd = DotDiagram(tuple(zp), tuple(zm), tuple((l, Fraction(k, 2)) for l, k in z2))
    assert dd.to_spectral_point().to_dot_diagram() == dd


def test_balance():
    p = point_from_landscape("r0r0r0", (mp.mpf(5), mp.mpf(2)))
    assert p.is_balanced()
    assert not SpectralPoint((0, 0, 0), (1, 2, 3)).is_balanced()


@given(st.floats(0, 40), st.floats(0, 40))
def test_landscape_roundtrip_real(a, b):
    a, b = max(a, b), min(a, b)
    p = point_from_landscape("r0r0r0", (mp.mpf(a), mp.mpf(b)))
    coords, used = landscape_coordinates(p)
    assert not used
    assert abs(coords[0] - a) < 1e-12 and abs(coords[1] - b) < 1e-12


def test_kappa_mismatch():
    with pytest.raises(ValueError):
        point_from_landscape("r0c5", (Fraction(3, 2), 1))
