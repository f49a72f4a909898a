"""Plancherel densities on parameter and coefficient spaces, and the d=2 calibration.

The density of L-points with a given Gamma-factor is modelled by the archimedean
Plancherel measure mu_d, a product over pairs of dot-diagram points of modified
absolute values, and by its Euclidean approximation mu'_d whose push-forward to
coefficient space is the constant P_d.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp
import numpy as np

from .spectra import DotDiagram, RefinedSignature, SpectralPoint

__all__ = [
    "ModAbsKind",
    "MeasureDensity",
    "mod_abs",
    "pairing_kind",
    "plancherel_constant",
    "plancherel_constant_via_volumes",
    "mu_density",
    "mu_prime_density",
    "closed_form_density3",
    "coefficient_density3",
    "region_mass",
    "pushforward_mass_mc",
    "pushforward_samples",
    "dim_Sk",
    "d2_counts",
    "cusp_form_count",
    "cusp_form_count_closed_form",
    "secondary_density",
    "nu1",
]


class ModAbsKind(enum.Enum):
    PLUS = "+"
    MINUS = "-"
    ZERO = "0"


def mod_abs(t, kind: ModAbsKind):
    """|t|_+ = t tanh(pi t/2), |t|_- = t coth(pi t/2), |t|_0 = |t|."""
    t = mp.mpf(t)
    if kind is ModAbsKind.ZERO:
        return abs(t)
    if kind is ModAbsKind.PLUS:
        return t * mp.tanh(mp.pi * t / 2)
    if t == 0:
        return 2 / mp.pi
    return t / mp.tanh(mp.pi * t / 2)


def pairing_kind(tag_i: str, tag_j: str) -> ModAbsKind:
    """Kind of |z_i - z_j| by multiset membership ('+', '-', 'c').

    Same real multiset gives +, one point from each real multiset gives -, and
    any point from a conjugate pair gives the plain absolute value.  This is the
    product rule eps_i * eps_j with eps = +1 on Z+ and -1 on Z-, and it
    reproduces the closed forms in ``closed_form_density3``.
    """
    if "c" in (tag_i, tag_j):
        return ModAbsKind.ZERO
    return ModAbsKind.PLUS if tag_i == tag_j else ModAbsKind.MINUS


def plancherel_constant(d: int):
    """P_d = d^(3/2) / 2^((d+3)(d-1)/2) * prod_{j=2}^d zeta(j)/pi^j."""
    if d < 1:
        raise ValueError("degree must be positive")
    val = mp.mpf(d) ** mp.mpf(1.5) / mp.mpf(2) ** (mp.mpf((d + 3) * (d - 1)) / 2)
    for j in range(2, d + 1):
        val *= mp.zeta(j) / mp.pi ** j
    return val


def plancherel_constant_via_volumes(d: int, r=None):
    """P_d as the ratio of the Weyl-law count of Maass forms to the Euclidean
    volume of the totally real coefficient region, both at radius r."""
    if d < 2:
        raise ValueError("volume comparison needs d >= 2")
    r = mp.mpf(10) if r is None else mp.mpf(r)
    m = mp.mpf((d + 2) * (d - 1)) / 2
    vol_M = d / mp.pi ** (m / 2)
    for j in range(2, d + 1):
        vol_M *= mp.zeta(j) * mp.gamma(mp.mpf(j) / 2)
    T = r ** 2 / 2
    count = vol_M / (mp.gamma(m / 2 + 1) * (4 * mp.pi) ** (m / 2)) * T ** (m / 2)
    vol_Y = mp.mpf(1)
    for j in range(2, d + 1):
        vol_Y *= mp.gamma(mp.mpf(j) / 2)
    vol_Y /= mp.mpf(2) ** (mp.mpf(d * (d - 1)) / 4) * mp.sqrt(d) * mp.gamma(m / 2 + 1)
    vol_Y *= r ** m
    return count / vol_Y


def _diagram(p):
    return p.to_dot_diagram() if isinstance(p, SpectralPoint) else p


def mu_density(p: SpectralPoint | DotDiagram):
    """Density of mu_d at p with respect to d lambda_1 ... d lambda_{d1+d2-1}."""
    dd = _diagram(p)
    pts = dd.points()
    sig = dd.signature
    val = plancherel_constant(dd.degree) / mp.mpf(2) ** (sig.d_one + sig.d_two)
    for (zi, ti), (zj, tj) in itertools.combinations(pts, 2):
        kind = pairing_kind(ti, tj)
        if kind is ModAbsKind.ZERO:
            val *= abs(zi - zj)
        else:
            val *= mod_abs(mp.re(zi - zj), kind)
    return abs(val)


def mu_prime_density(p: SpectralPoint | DotDiagram):
    """Density of mu'_d: P_d/2^d1 times the product of plain distances."""
    dd = _diagram(p)
    sig = dd.signature
    val = plancherel_constant(dd.degree) / mp.mpf(2) ** sig.d_one
    for (zi, _), (zj, _) in itertools.combinations(dd.points(), 2):
        val *= abs(zi - zj)
    return val


def closed_form_density3(signature: str, a, b):
    """The degree-3 densities in two landscape coordinates.

    '+++': (a, b) = (lam1, lam2), lam3 = -lam1 - lam2.
    '+--': (a, b) = (lam1, lam2) where lam2 is the delta = 0 shift and lam1, lam3
           are the delta = 1 shifts; the printed product pairs lam1 with lam3 under |.|_+.
    '+c', '-c': (a, b) = (kappa, lam) with lam the real shift.
    """
    P = plancherel_constant(3) / 8
    a, b = mp.mpf(a), mp.mpf(b)
    plus, minus = ModAbsKind.PLUS, ModAbsKind.MINUS
    if signature == "+++":
        return P * mod_abs(a - b, plus) * mod_abs(2 * a + b, plus) * mod_abs(a + 2 * b, plus)
    if signature == "+--":
        return P * mod_abs(a - b, minus) * mod_abs(2 * a + b, plus) * mod_abs(a + 2 * b, minus)
    if signature in ("+c", "-c"):
        return P * a * (4 * a ** 2 + 9 * b ** 2)
    raise ValueError(f"no closed form for {signature}")


# coefficient space, degree 3


def _real_cubic_roots(c2, c3):
    r = np.roots([1.0, 0.0, float(c2), float(c3)])
    return r


def coefficient_density3(c2, c3, signature: str, mode: str = "prime") -> float:
    """Push-forward density at (c2, c3) of mu (mode 'exact') or mu' (mode 'prime')
    restricted to one refined signature of degree 3 (double precision)."""
    sig = RefinedSignature.parse(signature)
    if sig.degree != 3:
        raise ValueError("degree-3 signature required")
    D = -27 * c3 ** 2 - 4 * c2 ** 3
    P = float(plancherel_constant(3))
    if sig.d_two == 0:
        if D <= 0:
            return 0.0
        lam = np.sort(np.real(_real_cubic_roots(c2, c3)))
        total = 0.0
        for plus_set in itertools.combinations(range(3), sig.d_plus):
            tags = ["+" if i in plus_set else "-" for i in range(3)]
            if mode == "prime":
                total += P / 8
                continue
            val = P / 8
            for i, j in itertools.combinations(range(3), 2):
                diff = lam[i] - lam[j]
                kind = pairing_kind(tags[i], tags[j])
                val *= float(mod_abs(diff, kind)) / abs(diff)
            total += val
        return total
    if D >= 0:
        return 0.0
    # mu lives on the half-integral kappa lines; spread over kappa-spacing 1/2 it
    # has the same push-forward P/2 as mu' up to exponentially small terms.
    return P / 2


@dataclass(frozen=True)
class MeasureDensity:
    """Evaluator for mu_d or mu'_d on one refined signature."""

    signature: RefinedSignature
    mode: str = "exact"

    @property
    def degree(self):
        return self.signature.degree

    @property
    def constant(self):
        return plancherel_constant(self.degree)

    def __call__(self, p):
        if self.mode == "exact":
            return mu_density(p)
        if self.mode == "euclidean":
            return mu_prime_density(p)
        raise ValueError(self.mode)

    def on_coefficients(self, c2, c3):
        return coefficient_density3(c2, c3, str(self.signature), "exact" if self.mode == "exact" else "prime")


def region_mass(density, bounds, method: str = "quad", budget: int = 64, rng=None):
    """Mass of a box under a density.

    ``density`` takes one float per coordinate; ``bounds`` is a list of (lo, hi).
    'quad' uses tensor Gauss-Legendre with ``budget`` nodes per axis and reports
    half the difference to the rule with half as many nodes; 'mc' uses stratified
    Monte Carlo with ``budget`` strata per axis and reports the standard error.
    Returns (mass, error).
    """
    bounds = [(float(lo), float(hi)) for lo, hi in bounds]
    if any(hi <= lo for lo, hi in bounds):
        return 0.0, 0.0
    if method == "quad":
        fine = _gauss_box(density, bounds, budget)
        coarse = _gauss_box(density, bounds, max(budget // 2, 1))
        return fine, abs(fine - coarse) / 2
    if method == "mc":
        rng = np.random.default_rng(rng)
        dim = len(bounds)
        cells = list(itertools.product(range(budget), repeat=dim))
        vol = np.prod([hi - lo for lo, hi in bounds])
        vals = []
        for cell in cells:
            x = [lo + (hi - lo) * (k + rng.random()) / budget for (lo, hi), k in zip(bounds, cell)]
            vals.append(density(*x))
        vals = np.asarray(vals, dtype=float)
        return float(vol * vals.mean()), float(vol * vals.std(ddof=1) / np.sqrt(len(vals)))
    raise ValueError(f"unknown method {method!r}")


def _gauss_box(density, bounds, n):
    x, w = np.polynomial.legendre.leggauss(n)
    axes = []
    for lo, hi in bounds:
        axes.append(((hi - lo) / 2 * x + (hi + lo) / 2, (hi - lo) / 2 * w))
    total = 0.0
    for idx in itertools.product(range(n), repeat=len(bounds)):
        pt = [axes[k][0][i] for k, i in enumerate(idx)]
        wt = np.prod([axes[k][1][i] for k, i in enumerate(idx)])
        total += wt * density(*pt)
    return float(total)


# Monte Carlo push-forward of mu' from the complex-pair component of X'_3


def _pair_component_box(rect):
    """(kappa, lam) box containing the preimage of a c-rectangle on X'_{+-c}."""
    c2lo, c2hi, c3lo, c3hi = rect
    lam_max = 2 * (abs(c3lo) + abs(c3hi) + abs(c2lo) + abs(c2hi)) ** (1 / 3) + 1
    kap_max = np.sqrt(max(c2hi, 0) + 3 * lam_max ** 2 / 4) + 1
    return (0.0, kap_max), (-lam_max, lam_max)


def _pair_density(kap, lam):
    return 2 * kap * (9 * lam ** 2 / 4 + kap ** 2)


def pushforward_samples(rect, n, rng=None):
    """Samples (c2, c3) of mu' on X'_{+c}, conditioned to land in ``rect``.

    Rejection sampling in (kappa, lam) against the Euclidean-distance density."""
    rng = np.random.default_rng(rng)
    (k0, k1), (l0, l1) = _pair_component_box(rect)
    bound = _pair_density(k1, max(abs(l0), abs(l1)))
    out = []
    while len(out) < n:
        m = 4 * (n - len(out)) + 1000
        kap = rng.uniform(k0, k1, m)
        lam = rng.uniform(l0, l1, m)
        keep = rng.uniform(0, bound, m) < _pair_density(kap, lam)
        c2 = kap ** 2 - 3 * lam ** 2 / 4
        c3 = -lam * (lam ** 2 / 4 + kap ** 2)
        inside = (c2 >= rect[0]) & (c2 <= rect[1]) & (c3 >= rect[2]) & (c3 <= rect[3])
        sel = keep & inside
        out.extend(zip(c2[sel], c3[sel]))
    return np.asarray(out[:n])


def pushforward_mass_mc(rect, n, rng=None):
    """Monte-Carlo estimate of the mu' mass of X'_{+c} over a c-rectangle, with its standard error."""
    rng = np.random.default_rng(rng)
    (k0, k1), (l0, l1) = _pair_component_box(rect)
    kap = rng.uniform(k0, k1, n)
    lam = rng.uniform(l0, l1, n)
    c2 = kap ** 2 - 3 * lam ** 2 / 4
    c3 = -lam * (lam ** 2 / 4 + kap ** 2)
    inside = (c2 >= rect[0]) & (c2 <= rect[1]) & (c3 >= rect[2]) & (c3 <= rect[3])
    P = float(plancherel_constant(3))
    vals = np.where(inside, P / 2 * _pair_density(kap, lam), 0.0)
    area = (k1 - k0) * (l1 - l0)
    return float(area * vals.mean()), float(area * vals.std(ddof=1) / np.sqrt(n))


# d = 2 calibration


def dim_Sk(k: int) -> int:
    """Dimension of the cusp forms of weight k on SL2(Z)."""
    if k < 1:
        raise ValueError("weight must be positive")
    if k % 2 or k < 12:
        return 0
    return k // 12 - 1 if k % 12 == 2 else k // 12


def cusp_form_count(K: int) -> int:
    """sum_{k=2}^K dim S_k(1), by direct summation."""
    return sum(dim_Sk(k) for k in range(2, K + 1))


def cusp_form_count_closed_form(K: int) -> Fraction:
    """K^2/48 - 14K/48 + 244/192; equal to ``cusp_form_count`` when K = 1 mod 12."""
    K = Fraction(K)
    return K ** 2 / 48 - 14 * K / 48 + Fraction(244, 192)


def d2_counts(K: int):
    """(mu' mass, mu mass, count of holomorphic L-points) up to the cutoff ((K+1/2-1)/2)^2.

    The first two are exact for every K; the third is the closed form, stated
    for K a multiple of 12.
    """
    if K <= 0 or K % 12:
        raise ValueError("K must be a positive multiple of 12")
    K = Fraction(K)
    mu_prime = ((K - Fraction(1, 2)) / 2) ** 2 / 12
    mu = sum((Fraction(k) - 1) / 24 for k in range(2, int(K) + 1))
    return mu_prime, mu, cusp_form_count_closed_form(int(K))


def secondary_density(kind: str, arg, printed: bool = False):
    """Refined densities of d=2 L-points in the c2 coordinate (b = |c2|).

    kind 'c' (c2 > 10): (1 - 3.25/sqrt(c2))/12.
    kind 'pp': (1 - (9 log b - 3 log(pi^4/2)) / (pi sqrt b))/24.
    kind 'mm': (1 - (3 log b + 3 log 8) / (pi sqrt b))/24.
    ``printed=True`` gives the variants with + 3 log(pi^4/2) and 8 pi sqrt b, which do
    not reproduce the quoted values at b = 10000 (see notes).
    """
    x = mp.mpf(arg)
    if x <= 0:
        raise ValueError("argument must be positive")
    if kind == "c":
        if x <= 10:
            raise ValueError("the c2 density is stated for c2 > 10")
        return (1 - mp.mpf("3.25") / mp.sqrt(x)) / 12
    if kind == "pp":
        const = 3 * mp.log(mp.pi ** 4 / 2)
        num = 9 * mp.log(x) + (const if printed else -const)
        return (1 - num / (mp.pi * mp.sqrt(x))) / 24
    if kind == "mm":
        den = (8 if printed else 1) * mp.pi * mp.sqrt(x)
        return (1 - (3 * mp.log(x) + 3 * mp.log(8)) / den) / 24
    raise ValueError(f"unknown kind {kind!r}")


def _factor(n: int):
    f, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            f[p] = f.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        f[n] = f.get(n, 0) + 1
    return f


def nu1(N: int) -> int:
    """Number of primitive Dirichlet characters of conductor N."""
    if N < 1:
        raise ValueError("N must be positive")
    out = 1
    for p, e in _factor(N).items():
        phi = lambda j: 1 if j == 0 else (p - 1) * p ** (j - 1)
        out *= phi(e) - phi(e - 1) if e >= 2 else p - 2
    return out
