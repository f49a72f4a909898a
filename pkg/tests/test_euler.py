import math

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lspace.euler import divisor_d3, euler_extend, euler_extend_with_gradient, factorize
from lspace.modular import primes_up_to

PRIMES = primes_up_to(100)
unit = st.floats(-3, 3, allow_nan=False)


@st.composite
def prime_data(draw):
    return {p: mp.mpc(draw(unit), draw(unit)) for p in PRIMES}


@given(prime_data())
def test_multiplicative(ap):
    a = euler_extend(ap, 100)
    for m in range(1, 101):
        for n in range(1, 100 // m + 1):
            if math.gcd(m, n) == 1:
                assert abs(a[m * n] - a[m] * a[n]) <= 1e-9 * (1 + abs(a[m * n]))


def _series_inverse(ap, k_max):
    # 1 / (1 - a x + conj(a) x^2 - x^3) by power-series division
    den = [mp.mpc(1), -ap, mp.conj(ap), mp.mpc(-1)]
    out = [mp.mpc(1)]
    for k in range(1, k_max + 1):
        out.append(-sum(den[j] * out[k - j] for j in range(1, min(k, 3) + 1)))
    return out


@pytest.mark.parametrize("p", [2, 3, 5])
def test_prime_powers_match_local_factor(p):
    ap = mp.mpc("0.7", "-1.3")
    a = euler_extend({q: ap for q in primes_up_to(p ** 6)}, p ** 6)
    series = _series_inverse(ap, 6)
    for k in range(1, 7):
        assert abs(a[p ** k] - series[k]) < 1e-12


@given(st.floats(-3, 3, allow_nan=False))
def test_real_closure(x):
    a = euler_extend({p: x for p in PRIMES}, 100)
    assert all(mp.im(v) == 0 for v in a.values())


def test_missing_prime():
    with pytest.raises(KeyError):
        euler_extend({2: 1}, 3)
    a = euler_extend({2: 1}, 6, strict=False)
    assert a[4] is not None and a[3] is None and a[6] is None


def test_gradient_against_finite_differences():
    mp.mp.dps = 30
    ap = {2: mp.mpc("0.3", "0.4"), 3: mp.mpc("-0.5", "0.2"), 5: mp.mpc("1.1", "-0.7")}
    primes = [2, 3]
    out = euler_extend_with_gradient(ap, primes, 40)
    h = mp.mpf(10) ** -12
    for i, (p, part) in enumerate((p, q) for p in primes for q in (1, 1j)):
        bumped = dict(ap)
        bumped[p] = ap[p] + h * part
        plus = euler_extend(bumped, 40, strict=False)
        bumped[p] = ap[p] - h * part
        minus = euler_extend(bumped, 40, strict=False)
        for n in range(1, 41):
            if out[n] is None:
                continue
            fd = (plus[n] - minus[n]) / (2 * h)
            assert abs(out[n][1][i] - fd) < 1e-10


@pytest.mark.parametrize("n, d", [(1, 1), (2, 3), (4, 6), (12, 18), (30, 27)])
def test_divisor_d3(n, d):
    assert divisor_d3(n) == d
    assert divisor_d3(n) == sum(1 for a in range(1, n + 1) for b in range(1, n + 1) if n % (a * b) == 0)


def test_factorize():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    with pytest.raises(ValueError):
        factorize(0)
