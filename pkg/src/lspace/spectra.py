"""Gamma-factor bookkeeping: types, spectral points, dot diagrams, signs.

A Gamma-factor of degree d is a product of real factors Gamma_R(s + delta + i*lam)
and complex factors Gamma_C(s + kappa + i*beta).  The discrete data (the deltas and
the doubled kappas) is a ``GammaType`` written as in ``r0r1c5``; the continuous
data lives in a ``SpectralPoint``.
"""

from __future__ import annotations

import itertools
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

__all__ = [
    "GammaType",
    "SpectralPoint",
    "DotDiagram",
    "RefinedSignature",
    "parse_gamma_type",
    "format_gamma_type",
    "refined_signature",
    "central_character_parity",
    "is_admissible",
    "epsilon_infinity",
    "dual",
    "component_count",
    "enumerate_signatures",
    "gamma_type_table",
    "landscape_coordinates",
    "point_from_landscape",
]

_TOKEN = re.compile(r"r[01]|c\d+")


@dataclass(frozen=True)
class GammaType:
    """Discrete part of a Gamma-factor.

    ``kappa_halves`` holds the integers 2*kappa (the number after each ``c``),
    so all arithmetic on the type stays exact.
    """

    deltas: tuple[int, ...] = ()
    kappa_halves: tuple[int, ...] = ()

    def __post_init__(self):
        if any(d not in (0, 1) for d in self.deltas):
            raise ValueError(f"deltas must be 0 or 1, got {self.deltas}")
        if any(int(k) != k or k <= 0 for k in self.kappa_halves):
            raise ValueError(f"kappa must be a positive half-integer, got {self.kappa_halves}")
        object.__setattr__(self, "deltas", tuple(sorted(int(d) for d in self.deltas)))
        object.__setattr__(self, "kappa_halves", tuple(sorted(int(k) for k in self.kappa_halves)))
        if self.degree == 0:
            raise ValueError("empty Gamma-type")

    @property
    def kappas(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(k, 2) for k in self.kappa_halves)

    @property
    def degree(self) -> int:
        return len(self.deltas) + 2 * len(self.kappa_halves)

    def __str__(self):
        return format_gamma_type(self)


@dataclass(frozen=True)
class RefinedSignature:
    d_plus: int
    d_minus: int
    d_two: int

    def __post_init__(self):
        if min(self.d_plus, self.d_minus, self.d_two) < 0:
            raise ValueError("signature entries must be nonnegative")

    @property
    def degree(self) -> int:
        return self.d_plus + self.d_minus + 2 * self.d_two

    @property
    def d_one(self) -> int:
        return self.d_plus + self.d_minus

    def __str__(self):
        return "+" * self.d_plus + "-" * self.d_minus + "c" * self.d_two

    @classmethod
    def parse(cls, text: str) -> "RefinedSignature":
        if not text or set(text) - set("+-c"):
            raise ValueError(f"bad signature string {text!r}")
        return cls(text.count("+"), text.count("-"), text.count("c"))


def parse_gamma_type(text: str) -> GammaType:
    """Parse an LMFDB-style Gamma-type string such as ``r0r0r1c5``."""
    if not text:
        raise ValueError("empty Gamma-type string")
    pos, deltas, halves = 0, [], []
    for m in _TOKEN.finditer(text):
        if m.start() != pos:
            break
        tok = m.group()
        if tok[0] == "r":
            deltas.append(int(tok[1]))
        else:
            k = int(tok[1:])
            if k == 0:
                raise ValueError("c0 is not allowed (kappa must be positive)")
            halves.append(k)
        pos = m.end()
    if pos != len(text):
        raise ValueError(f"malformed Gamma-type token at position {pos} in {text!r}")
    return GammaType(tuple(deltas), tuple(halves))


def format_gamma_type(g: GammaType) -> str:
    return "".join(f"r{d}" for d in g.deltas) + "".join(f"c{k}" for k in g.kappa_halves)


def refined_signature(g: GammaType) -> RefinedSignature:
    return RefinedSignature(g.deltas.count(0), g.deltas.count(1), len(g.kappa_halves))


def central_character_parity(g: GammaType) -> int:
    """chi(-1) = (-1)^(sum delta + sum (2 kappa + 1))."""
    e = sum(g.deltas) + sum(k + 1 for k in g.kappa_halves)
    return -1 if e % 2 else 1


def is_admissible(g: GammaType, N: int = 1) -> bool:
    """Whether the Gamma-type can occur at conductor N.

    Only the parity of the central character is checked.  Conductors 1 and 2
    only carry even characters; for N >= 3 both parities occur, so the answer
    is True and a warning records that nothing finer was checked.
    """
    if N < 1:
        raise ValueError("conductor must be positive")
    if N in (1, 2):
        return central_character_parity(g) == 1
    warnings.warn(f"admissibility at N={N} checks parity realizability only", stacklevel=2)
    return True


_I_POWERS = (1, 1j, -1, -1j)


def epsilon_infinity(g: GammaType) -> complex:
    """Archimedean root number: r0 -> 1, r1 -> i, cK -> i^(K+1)."""
    e = sum(g.deltas) + sum(k + 1 for k in g.kappa_halves)
    return complex(_I_POWERS[e % 4])


def _mpf(x):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return x if isinstance(x, mp.mpf) else mp.mpf(x)


def _key(x):
    # sort key that is stable for mpf/Fraction/int mixtures
    return mp.mpf(x) if not isinstance(x, Fraction) else mp.mpf(x.numerator) / x.denominator


@dataclass(frozen=True)
class SpectralPoint:
    """Gamma-factor prod Gamma_R(s + delta_j + i lambda_j) prod Gamma_C(s + kappa_k + i beta_k).

    ``kappa_lambdas`` holds the (kappa, beta) pairs.  kappa is a ``Fraction`` for an
    actual Gamma-factor and may be any positive real for the generalized spaces.
    Data is kept in lexicographic normal form: (delta, lambda) pairs ascending,
    then (kappa, beta) pairs ascending.
    """

    deltas: tuple[int, ...]
    lambdas: tuple
    kappa_lambdas: tuple = ()

    def __post_init__(self):
        if len(self.deltas) != len(self.lambdas):
            raise ValueError("one lambda per real factor is required")
        if any(d not in (0, 1) for d in self.deltas):
            raise ValueError("deltas must be 0 or 1")
        real = sorted(((int(d), _mpf(l)) for d, l in zip(self.deltas, self.lambdas)),
                      key=lambda p: (p[0], p[1]))
        cplx = []
        for kap, beta in self.kappa_lambdas:
            kap = Fraction(kap) if isinstance(kap, (int, Fraction)) else _mpf(kap)
            if kap <= 0:
                raise ValueError("kappa must be positive")
            cplx.append((kap, _mpf(beta)))
        cplx.sort(key=lambda p: (_key(p[0]), p[1]))
        object.__setattr__(self, "deltas", tuple(d for d, _ in real))
        object.__setattr__(self, "lambdas", tuple(l for _, l in real))
        object.__setattr__(self, "kappa_lambdas", tuple(cplx))
        if self.degree == 0:
            raise ValueError("empty spectral point")

    @classmethod
    def from_type(cls, g: GammaType | str, lambdas=(), betas=()):
        if isinstance(g, str):
            g = parse_gamma_type(g)
        if len(betas) != len(g.kappa_halves):
            raise ValueError("one beta per complex factor is required")
        return cls(g.deltas, tuple(lambdas), tuple(zip(g.kappas, betas)))

    @property
    def degree(self) -> int:
        return len(self.deltas) + 2 * len(self.kappa_lambdas)

    @property
    def kappas(self):
        return tuple(k for k, _ in self.kappa_lambdas)

    @property
    def betas(self):
        return tuple(b for _, b in self.kappa_lambdas)

    @property
    def is_generalized(self) -> bool:
        return any(not isinstance(k, Fraction) or k.denominator not in (1, 2) for k in self.kappas)

    @property
    def gamma_type(self) -> GammaType:
        if self.is_generalized:
            raise ValueError("kappa is not half-integral; no Gamma-type")
        return GammaType(self.deltas, tuple(int(2 * k) for k in self.kappas))

    @property
    def signature(self) -> RefinedSignature:
        return RefinedSignature(self.deltas.count(0), self.deltas.count(1), len(self.kappa_lambdas))

    def imbalance(self):
        return mp.fsum(self.lambdas) + 2 * mp.fsum(self.betas)

    def is_balanced(self, tol=None) -> bool:
        if tol is None:
            tol = mp.mpf(10) ** (-(mp.mp.dps - 10))
        scale = 1 + sum(abs(l) for l in self.lambdas) + sum(abs(b) for b in self.betas)
        return abs(self.imbalance()) <= tol * scale

    def mus(self):
        """Shifts delta_j + i lambda_j of the real factors."""
        return [mp.mpc(d, l) for d, l in zip(self.deltas, self.lambdas)]

    def nus(self):
        """Shifts kappa_k + i beta_k of the complex factors."""
        return [mp.mpc(_key(k), b) for k, b in self.kappa_lambdas]

    def to_dot_diagram(self) -> "DotDiagram":
        zp = tuple(l for d, l in zip(self.deltas, self.lambdas) if d == 0)
        zm = tuple(l for d, l in zip(self.deltas, self.lambdas) if d == 1)
        return DotDiagram(zp, zm, tuple((b, k) for k, b in self.kappa_lambdas))


@dataclass(frozen=True)
class DotDiagram:
    """Triple (Z+, Z-, Z2) of points in the plane.

    Z+ and Z- are multisets of reals; each entry (lam, kappa) of ``z_two`` stands
    for the conjugate pair lam +- i*kappa.
    """

    z_plus: tuple = ()
    z_minus: tuple = ()
    z_two: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "z_plus", tuple(sorted(_mpf(x) for x in self.z_plus)))
        object.__setattr__(self, "z_minus", tuple(sorted(_mpf(x) for x in self.z_minus)))
        pairs = []
        for lam, kap in self.z_two:
            kap = Fraction(kap) if isinstance(kap, (int, Fraction)) else _mpf(kap)
            if kap <= 0:
                raise ValueError("conjugate pairs need kappa > 0")
            pairs.append((_mpf(lam), kap))
        object.__setattr__(self, "z_two", tuple(sorted(pairs, key=lambda p: (_key(p[1]), p[0]))))

    @property
    def degree(self) -> int:
        return len(self.z_plus) + len(self.z_minus) + 2 * len(self.z_two)

    @property
    def signature(self) -> RefinedSignature:
        return RefinedSignature(len(self.z_plus), len(self.z_minus), len(self.z_two))

    def points(self):
        """All points as complex numbers, tagged by multiset: '+', '-' or 'c'."""
        out = [(mp.mpc(x), "+") for x in self.z_plus]
        out += [(mp.mpc(x), "-") for x in self.z_minus]
        for lam, kap in self.z_two:
            out += [(mp.mpc(lam, _key(kap)), "c"), (mp.mpc(lam, -_key(kap)), "c")]
        return out

    def total(self):
        return mp.fsum(self.z_plus) + mp.fsum(self.z_minus) + 2 * mp.fsum(l for l, _ in self.z_two)

    def to_spectral_point(self) -> SpectralPoint:
        deltas = (0,) * len(self.z_plus) + (1,) * len(self.z_minus)
        return SpectralPoint(deltas, self.z_plus + self.z_minus,
                             tuple((k, l) for l, k in self.z_two))

    def dual(self) -> "DotDiagram":
        return DotDiagram(tuple(-x for x in self.z_plus), tuple(-x for x in self.z_minus),
                          tuple((-l, k) for l, k in self.z_two))


def dual(p: SpectralPoint) -> SpectralPoint:
    """Negate every imaginary shift; kappas are unchanged."""
    return SpectralPoint(p.deltas, tuple(-l for l in p.lambdas),
                         tuple((k, -b) for k, b in p.kappa_lambdas))


def enumerate_signatures(d: int):
    """All refined signatures of degree d, by brute force."""
    out = []
    for dp, dm, d2 in itertools.product(range(d + 1), repeat=3):
        if dp + dm + 2 * d2 == d:
            out.append(RefinedSignature(dp, dm, d2))
    return out


def component_count(d: int) -> int:
    """Number of connected components of the generalized degree-d space."""
    if d < 1:
        raise ValueError("degree must be positive")
    return (d + 2) ** 2 // 4


def gamma_type_table(d_max: int = 3):
    """Rows (d, chi(-1), eps_inf, type pattern, signature, dim X_type, dim X'_sig).

    A complex factor appears symbolically as ``c2k`` with k = 2*kappa + 1, and the
    chi(-1) / eps_inf entries are then returned as functions of k.  For types
    with at most one complex factor (all of d <= 3) they are ``("(-1)^k", e)`` /
    ``("i^k", e)`` strings with e the extra exponent contributed by the real part.
    """
    rows = []
    for d in range(1, d_max + 1):
        for sig in _table_order(d):
            pattern = "r0" * sig.d_plus + "r1" * sig.d_minus + "c2k" * sig.d_two
            dims = (sig.d_one + sig.d_two - 1, d - 1)
            if sig.d_two == 0:
                g = GammaType((0,) * sig.d_plus + (1,) * sig.d_minus)
                rows.append((d, central_character_parity(g), epsilon_infinity(g), pattern, str(sig)) + dims)
            else:
                shift = sig.d_minus
                chi = "(-1)^k" if shift % 2 == 0 else "(-1)^(k+1)"
                eps = "i^k" if shift == 0 else f"i^(k+{shift})"
                rows.append((d, chi, eps, pattern, str(sig)) + dims)
    return rows


def _table_order(d):
    sigs = enumerate_signatures(d)
    return sorted(sigs, key=lambda s: (s.d_two, -s.d_plus))


# presentation conventions for the three-dimensional landscapes


def landscape_coordinates(p: SpectralPoint):
    """Coordinates used to draw a degree-3 point, after choosing between it and its dual.

    * r0r0r0: (lam1, lam2) with lam3 <= lam2 <= lam1 and lam2 >= 0.
    * r0r1r1: (lam1, lam2) with lam1 the delta=0 shift, lam2 >= lam3 and lam1 >= 0.
    * one real and one complex factor: (kappa, lam) with lam = -(real shift) >= 0,
      so that the trivial zeros of the real factor sit at height lam.
    Returns (coords, used_dual).
    """
    sig = p.signature
    if p.degree != 3:
        raise ValueError("landscape coordinates are defined for degree 3")
    if sig.d_two == 0:
        if sig.d_plus == 3 or sig.d_minus == 3:
            lam = sorted(p.lambdas, reverse=True)
            if lam[1] < 0:
                return (-lam[2], -lam[1]), True
            return (lam[0], lam[1]), False
        lone = 0 if sig.d_plus == 1 else 1
        l1 = [l for d, l in zip(p.deltas, p.lambdas) if d == lone][0]
        rest = sorted((l for d, l in zip(p.deltas, p.lambdas) if d != lone), reverse=True)
        if l1 < 0:
            return (-l1, -rest[1]), True
        return (l1, rest[0]), False
    kap = p.kappas[0]
    lam = -p.lambdas[0]
    if lam < 0:
        return (kap, -lam), True
    return (kap, lam), False


def point_from_landscape(gtype: GammaType | str, coords) -> SpectralPoint:
    """Inverse of ``landscape_coordinates`` (without the dual choice)."""
    g = parse_gamma_type(gtype) if isinstance(gtype, str) else gtype
    if g.degree != 3:
        raise ValueError("landscape coordinates are defined for degree 3")
    sig = refined_signature(g)
    if sig.d_two == 0:
        a, b = (_mpf(c) for c in coords)
        if sig.d_plus in (3, 0):
            return SpectralPoint(g.deltas, (a, b, -a - b))
        lone = 0 if sig.d_plus == 1 else 1
        other = 1 - lone
        return SpectralPoint((lone, other, other), (a, b, -a - b))
    kap, lam = coords
    kap = Fraction(str(kap)) if isinstance(kap, mp.mpf) else Fraction(kap)
    if kap * 2 != g.kappa_halves[0]:
        raise ValueError("kappa does not match the Gamma-type")
    lam = _mpf(lam)
    return SpectralPoint(g.deltas, (-lam,), ((kap, lam / 2),))

