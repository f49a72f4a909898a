"""Map from dot diagrams to the coefficient space of monic depressed polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import mpmath as mp

from .spectra import DotDiagram, RefinedSignature, SpectralPoint

__all__ = [
    "CoefficientPoint",
    "to_coefficients",
    "discriminant3",
    "discriminant",
    "dual_coefficients",
    "cover_degree",
    "kappa_line_point",
    "kappa_line_discriminant",
    "contour_level",
    "kappa_line_parameters",
]


@dataclass(frozen=True)
class CoefficientPoint:
    """The polynomial x^d + c2 x^(d-2) + ... + cd, stored as (c2, ..., cd)."""

    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(mp.mpf(c) for c in self.coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) + 1

    def __getitem__(self, j):
        """c_j for j >= 2."""
        if j < 2 or j > self.degree:
            raise IndexError(j)
        return self.coeffs[j - 2]

    def monic(self):
        """Full coefficient list [1, 0, c2, ..., cd], highest degree first."""
        return [mp.mpf(1), mp.mpf(0)] + list(self.coeffs)


def _roots(dd):
    if isinstance(dd, SpectralPoint):
        dd = dd.to_dot_diagram()
    return [z for z, _ in dd.points()]


def to_coefficients(dd: DotDiagram | SpectralPoint, rel_tol=None) -> CoefficientPoint:
    """Expand prod (x - z) over all points of the diagram."""
    roots = _roots(dd)
    if rel_tol is None:
        rel_tol = mp.mpf(10) ** (-(mp.mp.dps - 10))
    poly = [mp.mpc(1)]
    for z in roots:
        nxt = poly + [mp.mpc(0)]
        for i, c in enumerate(poly):
            nxt[i + 1] -= z * c
        poly = nxt
    scale = max([mp.mpf(1)] + [abs(z) for z in roots])
    if abs(poly[1]) > rel_tol * scale * len(roots):
        raise ValueError(f"diagram is not balanced: c1 = {mp.nstr(poly[1].real, 5)}")
    out = []
    for j, c in enumerate(poly[2:], start=2):
        if abs(c.imag) > rel_tol * scale ** j * 2 ** len(roots):
            raise ValueError("expansion left a non-real coefficient")
        out.append(c.real)
    return CoefficientPoint(tuple(out))


def discriminant3(c: CoefficientPoint):
    """-27 c3^2 - 4 c2^3 for x^3 + c2 x + c3."""
    if c.degree != 3:
        raise ValueError("discriminant3 needs a cubic")
    return -27 * c[3] ** 2 - 4 * c[2] ** 3


def discriminant(c: CoefficientPoint):
    """Discriminant of the monic polynomial, via the Sylvester resultant with f'."""
    f = c.monic()
    d = len(f) - 1
    if d == 1:
        return mp.mpf(1)
    fp = [(d - i) * f[i] for i in range(d)]
    n = 2 * d - 1
    S = mp.zeros(n, n)
    for r in range(d - 1):
        for i, a in enumerate(f):
            S[r, r + i] = a
    for r in range(d):
        for i, a in enumerate(fp):
            S[d - 1 + r, r + i] = a
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * mp.det(S)


def dual_coefficients(c: CoefficientPoint) -> CoefficientPoint:
    """Coefficient image of the dual diagram: c_j -> (-1)^j c_j."""
    return CoefficientPoint(tuple(v if j % 2 == 0 else -v for j, v in enumerate(c.coeffs, start=2)))


def cover_degree(sig: RefinedSignature) -> int:
    """Degree d1!/(d+! d-!) of the map from a signature component to its image."""
    return factorial(sig.d_one) // (factorial(sig.d_plus) * factorial(sig.d_minus))


# degree 3 with one conjugate pair: roots lam, -lam/2 +- i kappa


def kappa_line_point(kappa, lam) -> CoefficientPoint:
    """Image of the real root lam together with the pair -lam/2 +- i*kappa."""
    kappa, lam = mp.mpf(kappa), mp.mpf(lam)
    return CoefficientPoint((kappa ** 2 - 3 * lam ** 2 / 4, -lam * (lam ** 2 / 4 + kappa ** 2)))


def kappa_line_discriminant(kappa, lam):
    """Closed form of the discriminant along a fixed-kappa line: -4 kappa^2 (9 lam^2/4 + kappa^2)^2."""
    kappa, lam = mp.mpf(kappa), mp.mpf(lam)
    return -4 * kappa ** 2 * (9 * lam ** 2 / 4 + kappa ** 2) ** 2


def contour_level(kappa):
    """The level -4 kappa^6 of the discriminant contour through the lam = 0 point of a kappa line."""
    return -4 * mp.mpf(kappa) ** 6


def kappa_line_parameters(c: CoefficientPoint):
    """Invert ``kappa_line_point``: the (kappa, lam) over a cubic with negative discriminant."""
    if c.degree != 3:
        raise ValueError("needs a cubic")
    if discriminant3(c) >= 0:
        raise ValueError("all roots are real")
    roots = mp.polyroots([1, 0, c[2], c[3]], maxsteps=200, extraprec=2 * mp.mp.prec)
    lam = min(roots, key=lambda z: abs(mp.im(z)))
    lam = mp.re(lam)
    return mp.sqrt(c[2] + 3 * lam ** 2 / 4), lam
