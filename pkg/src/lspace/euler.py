"""Dirichlet coefficients from prime coefficients for degree-3, conductor-1 Euler products.

The local factor is 1 - a_p x + conj(a_p) x^2 - x^3, so
a_{p^k} = a_p a_{p^(k-1)} - conj(a_p) a_{p^(k-2)} + a_{p^(k-3)}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath as mp

__all__ = ["EulerRelations", "factorize", "euler_extend", "euler_extend_with_gradient", "divisor_d3"]


@lru_cache(maxsize=4096)
def _factor_tuple(n: int):
    out, p = [], 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def factorize(n: int) -> dict:
    if n < 1:
        raise ValueError("n must be positive")
    return dict(_factor_tuple(n))


def divisor_d3(n: int) -> int:
    """Number of ordered factorizations n = abc; bounds |a_n| under the Ramanujan conjecture."""
    out = 1
    for _, e in _factor_tuple(n):
        out *= (e + 1) * (e + 2) // 2
    return out


@dataclass(frozen=True)
class EulerRelations:
    """Recursion data for the cubic local factor with trivial central character."""

    degree: int = 3

    def prime_powers(self, ap, p: int, n_max: int) -> dict:
        a = mp.mpc(ap)
        ac = mp.conj(a)
        vals = [mp.mpc(1)]
        out = {}
        k = 1
        while p ** k <= n_max:
            v = a * vals[k - 1]
            if k >= 2:
                v -= ac * vals[k - 2]
            if k >= 3:
                v += vals[k - 3]
            vals.append(v)
            out[p ** k] = v
            k += 1
        return out


def euler_extend(ap, n_max: int, strict: bool = True) -> dict:
    """a_n for n <= n_max from the prime coefficients ``ap`` (map p -> a_p).

    With ``strict`` a missing prime raises; otherwise those a_n are None.
    """
    rel = EulerRelations()
    powers = {}
    for p, v in ap.items():
        powers.update(rel.prime_powers(v, p, n_max))
    out = {1: mp.mpc(1)}
    for n in range(2, n_max + 1):
        val = mp.mpc(1)
        for p, e in _factor_tuple(n):
            if p not in ap:
                if strict:
                    raise KeyError(f"prime {p} is needed for a_{n} but missing")
                val = None
                break
            val *= powers[p ** e]
        out[n] = val
    return out


def euler_extend_with_gradient(ap, primes, n_max: int) -> dict:
    """Like ``euler_extend`` but also returns d a_n / d x for the real unknowns
    x = (Re a_p, Im a_p for p in primes).  Values are (a_n, [grad...]) or None."""
    nv = 2 * len(primes)
    zero = [mp.mpc(0)] * nv
    index = {p: i for i, p in enumerate(primes)}
    powers = {}
    for p, v in ap.items():
        a = mp.mpc(v)
        ac = mp.conj(a)
        g = list(zero)
        if p in index:
            g[2 * index[p]] = mp.mpc(1)
            g[2 * index[p] + 1] = mp.mpc(0, 1)
        gc = [mp.conj(c) for c in g]
        seq = [(mp.mpc(1), zero)]
        k = 1
        while p ** k <= n_max:
            v1, g1 = seq[k - 1]
            val = a * v1
            gr = [g[i] * v1 + a * g1[i] for i in range(nv)]
            if k >= 2:
                v2, g2 = seq[k - 2]
                val -= ac * v2
                gr = [gr[i] - gc[i] * v2 - ac * g2[i] for i in range(nv)]
            if k >= 3:
                v3, g3 = seq[k - 3]
                val += v3
                gr = [gr[i] + g3[i] for i in range(nv)]
            seq.append((val, gr))
            powers[p ** k] = (val, gr)
            k += 1
    out = {1: (mp.mpc(1), zero)}
    for n in range(2, n_max + 1):
        fac = _factor_tuple(n)
        if any(p not in ap for p, _ in fac):
            out[n] = None
            continue
        val, gr = mp.mpc(1), zero
        for p, e in fac:
            pv, pg = powers[p ** e]
            gr = [gr[i] * pv + val * pg[i] for i in range(nv)]
            val = val * pv
        out[n] = (val, gr)
    return out
