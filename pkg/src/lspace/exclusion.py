"""Explicit-formula certificates that no L-function has given Gamma-data.

For h(t) = int G(x) e^{itx} dx with G even and supported in [-X, X], X < log 2,
and an L-function of conductor N with Gamma-factor gamma(s),

    sum_rho h(gamma_rho - t0) = G(0) log N + (1/pi) int h(t - t0) Re gamma'/gamma(1/2 + it) dt,

the prime-power terms vanishing because G(log n) = 0 for n >= 2.  The
archimedean integral is evaluated on the Fourier side with
psi(z) = int_0^inf (e^-u/u - e^(-zu)/(1 - e^-u)) du, which turns it into short
integrals over [0, X] plus exponential-integral tails.

Zeros come in pairs 1/2 + i gamma, 1/2 + i conj(gamma), and a pair contributes
int G(x) 2 cosh(eta x) e^{i gamma_r x} dx (eta = Im gamma, |eta| < 1/2).  With
G = triangle * sech(x/2), every G cosh(eta x) is a product of positive-definite
functions, so the zero side is >= 0 whether or not the zeros lie on the
critical line.  A negative right side is then a contradiction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
from scipy import optimize, special

from .spectra import SpectralPoint, point_from_landscape

__all__ = [
    "FejerTestFunction",
    "ExclusionCertificate",
    "gamma_side",
    "gamma_side_terms",
    "exclusion_certificate",
    "exclusion_frontier",
    "zero_side",
    "explicit_formula_check",
    "ExplicitFormulaCheck",
    "MAX_WIDTH",
]

MAX_WIDTH = math.log(2) / (2 * math.pi)
DEFAULT_FRACTIONS = (0.9, 0.95, 0.99)


@dataclass(frozen=True)
class FejerTestFunction:
    """h(t) = int G(x) e^{i(t - t0)x} dx with G supported in [-2 pi width, 2 pi width].

    ``damped`` multiplies the triangle G by sech(x/2), which keeps the zero side
    nonnegative without assuming the zeros lie on the critical line.  The
    undamped triangle gives the Fejer kernel
    f(t) = X (sin(X(t - t0)/2) / (X(t - t0)/2))^2, X = 2 pi width.  ``power`` > 0
    replaces the triangle by (1 - (x/X)^2)^power, a smooth profile whose h decays
    fast; it is not positive-definite and serves the self-consistency check.
    """

    width: float
    center: float = 0.0
    damped: bool = True
    power: int = 0

    def __post_init__(self):
        if not 0 < self.width < MAX_WIDTH:
            raise ValueError(f"width must lie in (0, log 2/(2 pi)) = (0, {MAX_WIDTH:.6f})")

    @property
    def X(self):
        return 2 * mp.pi * mp.mpf(self.width)

    def G(self, x):
        x = abs(mp.mpf(x))
        X = self.X
        if x >= X:
            return mp.mpf(0)
        base = (1 - (x / X) ** 2) ** self.power if self.power else 1 - x / X
        return base * mp.sech(x / 2) if self.damped else base

    def __call__(self, t):
        """h(t - t0), computed from the Fourier side."""
        u = mp.mpf(t) - self.center
        if not self.damped and not self.power:
            X = self.X
            if u == 0:
                return X
            return X * (mp.sin(X * u / 2) / (X * u / 2)) ** 2
        return 2 * mp.quad(lambda x: self.G(x) * mp.cos(u * x), [0, self.X])

    @property
    def is_positive_definite(self) -> bool:
        return self.power == 0

    @property
    def unconditional(self) -> bool:
        return self.damped and self.power == 0

    def with_center(self, t0) -> "FejerTestFunction":
        return FejerTestFunction(self.width, float(t0), self.damped, self.power)


def _quad(f, a, b, digits):
    with mp.workdps(digits):
        v1, e1 = mp.quad(f, [a, b], error=True, maxdegree=8)
        v2 = mp.quad(f, [a, (a + b) / 2, b], maxdegree=8)
    return v1, max(float(e1), float(abs(v1 - v2)))


def _real_term(f: FejerTestFunction, delta, lam, digits):
    # Gamma_R(s + delta + i lam)
    X, t0 = f.X, mp.mpf(f.center)

    def g(u):
        if u == 0:
            return mp.mpf(0)
        return mp.exp(-u) / u - f.G(u / 2) * mp.exp(-(mp.mpf(1) / 2 + delta) * u / 2) * mp.cos(
            (lam + t0) * u / 2) / -mp.expm1(-u)

    v, err = _quad(g, mp.mpf(0), 2 * X, digits)
    return -mp.log(mp.pi) + v + mp.e1(2 * X), err


def _complex_term(f: FejerTestFunction, kappa, beta, digits):
    # Gamma_C(s + kappa + i beta)
    X, t0 = f.X, mp.mpf(f.center)

    def g(u):
        if u == 0:
            return mp.mpf(0)
        return mp.exp(-u) / u - f.G(u) * mp.exp(-(mp.mpf(1) / 2 + kappa) * u) * mp.cos((beta + t0) * u) / -mp.expm1(-u)

    v, err = _quad(g, mp.mpf(0), X, digits)
    return -2 * mp.log(2 * mp.pi) + 2 * (v + mp.e1(X)), 2 * err


def gamma_side_terms(f: FejerTestFunction, gamma: SpectralPoint, digits: int = 30):
    """Per-factor archimedean contributions as (label, value, error)."""
    out = []
    with mp.workdps(digits):
        for d, l in zip(gamma.deltas, gamma.lambdas):
            v, e = _real_term(f, mp.mpf(d), mp.mpf(l), digits)
            out.append((f"R(delta={d}, lambda={mp.nstr(l, 8)})", v, e))
        for k, b in gamma.kappa_lambdas:
            kf = mp.mpf(k.numerator) / k.denominator if hasattr(k, "denominator") else mp.mpf(k)
            v, e = _complex_term(f, kf, mp.mpf(b), digits)
            out.append((f"C(kappa={k}, beta={mp.nstr(b, 8)})", v, e))
    return out


def gamma_side(f: FejerTestFunction, gamma: SpectralPoint, digits: int = 30, with_error: bool = False):
    """(1/pi) int h(t - t0) Re gamma'/gamma(1/2 + it) dt."""
    terms = gamma_side_terms(f, gamma, digits)
    v = mp.fsum(t[1] for t in terms)
    err = sum(t[2] for t in terms) + 10.0 ** (-(digits - 5))
    return (v, err) if with_error else v


def zero_side(f: FejerTestFunction, zeros, tail: float = 0.0):
    """sum over critical-line zero ordinates of h(gamma - t0)."""
    return mp.fsum(f(g) for g in zeros) + tail


def _h_numpy(f: FejerTestFunction, t, nodes: int = 400):
    # h(t - t0) = 2 int_0^X G(x) cos((t - t0) x) dx by Gauss-Legendre
    X = float(f.X)
    x, w = np.polynomial.legendre.leggauss(nodes)
    x = X * (x + 1) / 2
    w = w * X / 2
    base = (1 - (x / X) ** 2) ** f.power if f.power else 1 - x / X
    G = base / np.cosh(x / 2) if f.damped else base
    u = np.asarray(t, dtype=float) - f.center
    return 2 * np.cos(np.outer(u, x)) @ (G * w)


def _zero_density(gamma: SpectralPoint, t):
    """(1/pi) Re gamma'/gamma(1/2 + it): the smooth density of zeros for N = 1."""
    s = 0.5 + 1j * np.asarray(t, dtype=float)
    v = np.zeros(s.shape, dtype=complex)
    for d, l in zip(gamma.deltas, gamma.lambdas):
        v += (-math.log(math.pi) + special.digamma((s + d + 1j * float(l)) / 2)) / 2
    for k, b in gamma.kappa_lambdas:
        v += -math.log(2 * math.pi) + special.digamma(s + float(k) + 1j * float(b))
    return v.real / math.pi


@dataclass
class ExplicitFormulaCheck:
    right_side: float
    zero_sum: float
    tail: float
    residual: float
    allowance: float

    @property
    def consistent(self) -> bool:
        return abs(self.residual) <= self.allowance


def explicit_formula_check(f: FejerTestFunction, gamma: SpectralPoint, zeros, window, N: int = 1,
                           digits: int = 30, slack: float = 4.0) -> ExplicitFormulaCheck:
    """Compare both sides of the explicit formula at an actual L-function.

    ``zeros`` are all critical-line zeros in ``window`` = (T0, T1).  Zeros outside
    the window are replaced by the smooth density of zeros; the error of that
    replacement is bounded by ``slack`` times the largest |h| outside the window
    (the zero-counting remainder stays within a few units at these heights).
    """
    t0, t1 = (float(v) for v in window)
    rhs, qerr = _right_side(gamma, N, f, digits)
    rhs = float(rhs)
    zs = float(np.sum(_h_numpy(f, np.asarray(zeros, dtype=float)))) if len(zeros) else 0.0
    # smooth count inside the window; the tail is the rest of the right side
    n = max(2000, int(40 * (t1 - t0)))
    x, w = np.polynomial.legendre.leggauss(n)
    t = (t1 - t0) / 2 * x + (t1 + t0) / 2
    inside = float(np.sum(w * _h_numpy(f, t) * _zero_density(gamma, t)) * (t1 - t0) / 2)
    inside += (math.log(N) / math.pi) * float(np.sum(w * _h_numpy(f, t)) * (t1 - t0) / 2) if N > 1 else 0.0
    tail = rhs - inside
    far = np.concatenate([np.linspace(t1, t1 + 200, 4001), np.linspace(t0 - 200, t0, 4001)])
    allowance = slack * float(np.max(np.abs(_h_numpy(f, far)))) + 10 * qerr
    return ExplicitFormulaCheck(rhs, zs, tail, rhs - zs - tail, allowance)


@dataclass
class ExclusionCertificate:
    point: SpectralPoint
    conductor: int
    test_function: FejerTestFunction
    value: object
    error: float
    margin: float
    verdict: str  # "excluded" or "inconclusive"
    unconditional: bool
    trials: list = field(default_factory=list)

    @property
    def excluded(self) -> bool:
        return self.verdict == "excluded"

    def to_dict(self) -> dict:
        return {
            "point": {"deltas": list(self.point.deltas), "lambdas": [mp.nstr(l, 20) for l in self.point.lambdas],
                      "kappa_betas": [[str(k), mp.nstr(b, 20)] for k, b in self.point.kappa_lambdas]},
            "conductor": self.conductor,
            "test_function": {"family": "fejer-damped" if self.test_function.damped else "fejer",
                              "width": self.test_function.width, "center": self.test_function.center},
            "right_side": mp.nstr(self.value, 15),
            "quadrature_error": self.error,
            "margin": self.margin,
            "verdict": self.verdict,
            "unconditional": self.unconditional,
        }


def _right_side(point, N, f, digits):
    v, err = gamma_side(f, point, digits, with_error=True)
    return v + (mp.log(N) if N > 1 else 0) * f.G(0), err


def exclusion_certificate(gamma: SpectralPoint, N: int = 1, fractions=DEFAULT_FRACTIONS, centers=None,
                          damped: bool = True, digits: int = 30) -> ExclusionCertificate:
    """Minimize the right side over the width fractions and a grid of centers t0.

    Excluded iff the best value is below -margin with margin = 10 x quadrature error.
    """
    if centers is None:
        centers = [0.0, -2.0, 2.0, -4.0, 4.0]
    best, trials = None, []
    for frac in fractions:
        width = frac * MAX_WIDTH
        for t0 in centers:
            f = FejerTestFunction(width, float(t0), damped)
            v, err = _right_side(gamma, N, f, digits)
            trials.append((width, float(t0), v, err))
            if best is None or v < best[2]:
                best = (width, float(t0), v, err)
    # local refinement of the center at the best width
    width = best[0]

    def obj(t0):
        return float(_right_side(gamma, N, FejerTestFunction(width, t0, damped), 20)[0])

    res = optimize.minimize_scalar(obj, bounds=(best[1] - 2, best[1] + 2), method="bounded",
                                   options={"xatol": 1e-4, "maxiter": 40})
    if res.success and res.fun < float(best[2]):
        f = FejerTestFunction(width, float(res.x), damped)
        v, err = _right_side(gamma, N, f, digits)
        trials.append((width, float(res.x), v, err))
        if v < best[2]:
            best = (width, float(res.x), v, err)
    width, t0, v, err = best
    margin = 10 * err
    verdict = "excluded" if v < -margin else "inconclusive"
    f = FejerTestFunction(width, t0, damped)
    return ExclusionCertificate(gamma, N, f, v, err, margin, verdict, f.unconditional, trials)


def exclusion_frontier(gtype, origin, direction, resolution: float, r_max: float = 40.0, **kw) -> float:
    """Distance from ``origin`` along ``direction`` (landscape coordinates) at which
    certificates stop excluding, located by bisection to ``resolution``.

    Returns 0 if the origin itself is not excluded and r_max if everything up to
    r_max is excluded.
    """
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    origin = [mp.mpf(c) if not hasattr(c, "denominator") else c for c in origin]
    norm = math.sqrt(sum(float(d) ** 2 for d in direction))
    if norm == 0:
        raise ValueError("direction must be nonzero")
    direction = [float(d) / norm for d in direction]

    def excluded(r):
        c = [o + r * d if not hasattr(o, "denominator") or d else o for o, d in zip(origin, direction)]
        return exclusion_certificate(point_from_landscape(gtype, c), **kw).excluded

    if not excluded(0.0):
        return 0.0
    if excluded(r_max):
        return r_max
    lo, hi = 0.0, r_max
    while hi - lo > resolution:
        mid = (lo + hi) / 2
        if excluded(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
