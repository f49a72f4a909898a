import json

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lspace.afe import zero_scan
from lspace.exclusion import (
    MAX_WIDTH,
    FejerTestFunction,
    exclusion_certificate,
    exclusion_frontier,
    explicit_formula_check,
    gamma_side,
    gamma_side_terms,
    zero_side,
)
from lspace.spectra import point_from_landscape

from oracles import EXCLUDED_POINT, INCONCLUSIVE_POINT


def _r0r0r0(coords):
    return point_from_landscape("r0r0r0", tuple(mp.mpf(c) for c in coords))


@pytest.mark.parametrize("width", [0, -0.01, MAX_WIDTH, 0.2])
def test_width_bounds(width):
    with pytest.raises(ValueError):
        FejerTestFunction(width)


@given(st.floats(0.05, 0.999), st.booleans())
def test_fourier_support_below_log2(frac, damped):
    f = FejerTestFunction(frac * MAX_WIDTH, damped=damped)
    assert f.X < mp.log(2)
    assert f.G(f.X) == 0 and f.G(-f.X * 1.0001) == 0
    assert f.G(0) == 1


def test_fejer_closed_form_matches_transform():
    mp.mp.dps = 30
    f = FejerTestFunction(0.9 * MAX_WIDTH, center=1.5, damped=False)
    for t in (1.5, 2.0, 7.3, -20):
        u = mp.mpf(t) - 1.5
        direct = 2 * mp.quad(lambda x: (1 - x / f.X) * mp.cos(u * x), [0, f.X])
        assert abs(f(t) - direct) < 1e-20


@given(st.floats(-60, 60), st.floats(0.3, 0.99))
def test_damped_kernel_nonnegative(t, frac):
    f = FejerTestFunction(frac * MAX_WIDTH)
    assert f(t) >= -1e-20
    assert f.unconditional and f.is_positive_definite
    assert not FejerTestFunction(0.5 * MAX_WIDTH, power=4).is_positive_definite


def test_gamma_side_terms_sum():
    mp.mp.dps = 30
    f = FejerTestFunction(0.9 * MAX_WIDTH)
    p = _r0r0r0(("3", "1"))
    assert abs(mp.fsum(v for _, v, _ in gamma_side_terms(f, p)) - gamma_side(f, p)) < 1e-20


def test_zero_side():
    f = FejerTestFunction(0.9 * MAX_WIDTH, damped=False)
    assert zero_side(f, []) == 0
    assert abs(zero_side(f, [0.0], tail=1.0) - (f.X + 1)) < 1e-20


def test_excluded_point():
    cert = exclusion_certificate(_r0r0r0(EXCLUDED_POINT))
    assert cert.excluded and cert.unconditional
    assert cert.value < -cert.margin
    assert abs(cert.value - mp.mpf("-3.5818")) < 1e-3
    data = cert.to_dict()
    assert json.loads(json.dumps(data))["verdict"] == "excluded"


def test_inconclusive_point():
    cert = exclusion_certificate(_r0r0r0(INCONCLUSIVE_POINT))
    assert cert.verdict == "inconclusive"
    assert cert.value > 0


def test_frontier_validation():
    with pytest.raises(ValueError):
        exclusion_frontier("r0r0r0", (0, 0), (1, 0), 0)
    with pytest.raises(ValueError):
        exclusion_frontier("r0r0r0", (0, 0), (0, 0), 0.1)


def test_frontier_from_inconclusive_origin():
    assert exclusion_frontier("r0r0r0", INCONCLUSIVE_POINT, (1, 0), 0.5) == 0.0


def test_explicit_formula_consistent_at_an_l_function(r0c5):
    mp.mp.dps = 30
    scan = zero_scan(r0c5, (-40, 40), step=0.05, max_unknown=1e9)
    f = FejerTestFunction(0.9 * MAX_WIDTH, power=8)
    check = explicit_formula_check(f, r0c5.point, scan.zeros, (-40, 40))
    assert check.consistent
    assert check.allowance < 1e-4
    # dropping a zero breaks the balance
    nearest = min(scan.zeros, key=abs)
    worse = explicit_formula_check(f, r0c5.point, [z for z in scan.zeros if z != nearest], (-40, 40))
    assert not worse.consistent
