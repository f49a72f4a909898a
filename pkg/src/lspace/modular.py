"""Level-one modular forms data used as oracles: Ramanujan tau and symmetric squares."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

__all__ = ["eta_product_coefficients", "ramanujan_tau", "primes_up_to", "sym_square_prime_coefficient"]


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, v in enumerate(sieve) if v]


def _euler_function(m: int) -> list[int]:
    # prod_{n>=1} (1 - q^n) mod q^(m+1), from the pentagonal number theorem
    c = [0] * (m + 1)
    k = 0
    while True:
        hit = False
        for j in (k, -k) if k else (0,):
            e = j * (3 * j - 1) // 2
            if e <= m:
                c[e] = -1 if j % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return c


@lru_cache(maxsize=8)
def eta_product_coefficients(m: int) -> tuple:
    """Coefficients of q * prod (1 - q^n)^24 up to q^m, as exact integers."""
    e = _euler_function(m)
    sparse = [(i, v) for i, v in enumerate(e) if v]
    poly = [1] + [0] * m
    for _ in range(24):
        nxt = [0] * (m + 1)
        for i, v in sparse:
            for j in range(m + 1 - i):
                if poly[j]:
                    nxt[i + j] += v * poly[j]
        poly = nxt
    return tuple([0] + poly[:m])


def ramanujan_tau(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    size = max(64, 1 << (n.bit_length()))
    return eta_product_coefficients(size)[n]


def sym_square_prime_coefficient(ap: int, p: int, weight: int) -> Fraction:
    """b_p = (a_p / p^((k-1)/2))^2 - 1 for a level-one eigenform with trivial character."""
    return Fraction(ap * ap, p ** (weight - 1)) - 1
