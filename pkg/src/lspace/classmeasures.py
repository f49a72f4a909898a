"""Measures on the trace triangle of SU(3).

A conjugacy class diag(e^{i t1}, e^{i t2}, e^{i t3}), t1 + t2 + t3 = 0, has trace
x + iy.  The traces fill a curvilinear triangle T bounded by the zero set of
``trace_boundary``.  Densities on T are built on the maximal torus and pushed
forward: the trace map is 6-to-1 with Jacobian |Vandermonde| / 2, and
|Vandermonde|^2 equals the boundary quartic, so a Weyl-invariant torus density
rho (normalized to mean 1) pushes forward to 3 rho / (pi^2 sqrt(f)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import integrate

__all__ = [
    "TraceSample",
    "trace_boundary",
    "sato_tate_density",
    "TraceDensity",
    "padic_plancherel_density",
    "theoretical_second_moment",
    "second_moment",
    "ramanujan_check",
    "integrate_over_triangle",
    "sup_distance",
]

INSIDE_TOL = 1e-3


@dataclass(frozen=True)
class TraceSample:
    x: float
    y: float

    @classmethod
    def from_complex(cls, z) -> "TraceSample":
        z = complex(z)
        return cls(z.real, z.imag)

    def inside(self, tol: float = INSIDE_TOL) -> bool:
        return trace_boundary(self.x, self.y) >= -tol


def trace_boundary(x, y):
    """The quartic f(x, y) whose nonnegative set is the trace triangle."""
    x2, y2 = x * x, y * y
    return 27 - 18 * x2 + 8 * x2 * x - x2 * x2 - 18 * y2 - 24 * x * y2 - 2 * x2 * y2 - y2 * y2


def sato_tate_density(x, y, tol: float = 1e-12):
    """Pushforward of Haar measure: sqrt(f)/(2 pi^2)."""
    f = trace_boundary(x, y)
    if np.any(np.asarray(f) < -tol):
        raise ValueError(f"({x}, {y}) lies outside the trace triangle")
    return np.sqrt(np.maximum(f, 0.0)) / (2 * math.pi ** 2)


def _y_band(x):
    # f is a quadratic in Y = y^2 with negative leading coefficient
    b = 18 + 24 * x + 2 * x * x
    c = 27 - 18 * x * x + 8 * x ** 3 - x ** 4
    disc = b * b + 4 * c
    if disc < 0:
        return None
    r = math.sqrt(disc)
    hi = (-b + r) / 2
    lo = (-b - r) / 2
    if hi <= 0:
        return None
    return math.sqrt(max(lo, 0.0)), math.sqrt(hi)


def _slices(fn, epsabs, epsrel):
    def arc(x, a, b):
        # y = c + r sin(theta) absorbs square-root behaviour at both ends
        c, r = (a + b) / 2, (b - a) / 2

        def g(th):
            w = r * math.cos(th)
            if w <= 0:
                return 0.0
            v = fn(x, c + r * math.sin(th))
            # a density may be infinite on the boundary, which has measure zero
            return v * w if math.isfinite(v) else 0.0

        return integrate.quad(g, -math.pi / 2, math.pi / 2, epsabs=epsabs, epsrel=epsrel, limit=200)[0]

    def slice_integral(x):
        band = _y_band(x)
        if band is None:
            return 0.0
        lo, hi = band
        return arc(x, lo, hi) + arc(x, -hi, -lo)

    # the cusps at x = -3/2 and the vertical tangent at x = -1 are breakpoints
    return integrate.quad(slice_integral, -1.5, 3.0, points=[-1.0], epsabs=epsabs,
                          epsrel=epsrel, limit=200)[0]


def _on_torus(fn, n):
    # grid offsets chosen so no node lies on a wall u_j = u_k
    t1 = 2 * np.pi * (np.arange(n) + 0.1) / n
    t2 = 2 * np.pi * (np.arange(n) + 0.35) / n
    a, b = np.meshgrid(t1, t2, indexing="ij")
    u1, u2, u3 = np.exp(1j * a), np.exp(1j * b), np.exp(-1j * (a + b))
    z = u1 + u2 + u3
    jac = np.abs(np.imag(np.conj(1j * (u1 - u3)) * 1j * (u2 - u3)))
    try:
        vals = np.asarray(fn(z.real, z.imag), dtype=float)
        if vals.shape != z.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([[fn(float(x), float(y)) for x, y in zip(rx, ry)] for rx, ry in zip(z.real, z.imag)])
    # six torus points over each trace
    return float(np.mean(vals * jac)) * (2 * np.pi) ** 2 / 6


def integrate_over_triangle(fn, grid: int = 96, method: str = "torus", epsabs: float = 1e-10,
                            epsrel: float = 1e-10):
    """Integral of fn(x, y) dx dy over T.

    ``torus`` pulls back to the maximal torus, where dx dy = |Vandermonde|/2 dt1 dt2
    and the densities built here become smooth periodic functions, so the trapezoid
    rule on a grid x grid mesh converges geometrically.  ``slices`` is adaptive
    quadrature in x and y, for integrands that are not smooth on the torus.
    """
    if method == "torus":
        return _on_torus(fn, grid)
    if method == "slices":
        return _slices(fn, epsabs, epsrel)
    raise ValueError("method must be 'torus' or 'slices'")


def _torus_grid(n):
    t = 2 * np.pi * (np.arange(n) + 0.5) / n
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    return np.exp(1j * t1), np.exp(1j * t2), np.exp(-1j * (t1 + t2))


def _torus_weight(u, p, power):
    # u: triple of eigenvalue arrays; p = inf gives the Haar weight
    num = np.ones(u[0].shape)
    den = np.ones(u[0].shape)
    for j, k in ((0, 1), (0, 2), (1, 2)):
        num = num * np.abs(u[j] - u[k]) ** 2
        if p != math.inf:
            den = den * np.abs(1 - u[j] * np.conj(u[k]) / p) ** (2 * power)
    if p == 1 and power == 1:
        return np.ones(u[0].shape)
    return num / den


class TraceDensity:
    """Pushforward to T of the torus density prod |u_j - u_k|^2 / |1 - u_j conj(u_k)/p|^(2 power).

    p = inf gives Sato-Tate.  ``power`` = 1 is the spherical Plancherel
    density; ``power`` = 2 is kept only to document that it fails the moment check.
    The normalization is the torus mean, computed by the periodic trapezoid
    rule, which converges geometrically for p > 1.
    """

    def __init__(self, p=math.inf, power: int = 1, grid: int = 256):
        if p < 1:
            raise ValueError("p must be >= 1")
        self.p = p
        self.power = power
        self.grid = grid

    def _weight(self, u):
        return _torus_weight(u, self.p, self.power)

    @cached_property
    def normalization(self) -> float:
        return float(np.mean(self._weight(_torus_grid(self.grid))))

    def torus_expectation(self, fn) -> float:
        """E[fn(trace)] under the normalized density, computed on the torus."""
        u = _torus_grid(self.grid)
        w = self._weight(u)
        return float(np.mean(w * fn(u[0] + u[1] + u[2])) / self.normalization)

    def __call__(self, x, y):
        f = trace_boundary(x, y)
        if f < -1e-12:
            raise ValueError(f"({x}, {y}) lies outside the trace triangle")
        if f <= 0:
            return 0.0 if self.p > 1 else math.inf
        z = complex(x, y)
        roots = np.roots([1, -z, z.conjugate(), -1])
        roots = roots / np.abs(roots)
        rho = float(self._weight(tuple(np.array([r]) for r in roots))[0])
        return 3 * rho / (math.pi ** 2 * self.normalization * math.sqrt(f))


def padic_plancherel_density(p, x, y):
    return _density_cache(p)(x, y)


_DENSITIES = {}


def _density_cache(p):
    if p not in _DENSITIES:
        _DENSITIES[p] = TraceDensity(p)
    return _DENSITIES[p]


def theoretical_second_moment(p) -> float:
    """1 + 1/p + 1/p^2 (1 for p = inf)."""
    if p == math.inf:
        return 1.0
    return 1 + 1 / p + 1 / p ** 2


def second_moment(source) -> float:
    """Mean of x^2 + y^2 under a TraceDensity, a density callable on T, or a sample list."""
    if isinstance(source, TraceDensity):
        return source.torus_expectation(lambda z: np.abs(z) ** 2)
    if callable(source):
        return integrate_over_triangle(lambda x, y: (x * x + y * y) * source(x, y))
    samples = list(source)
    if not samples:
        raise ValueError("empty sample list")
    return float(np.mean([s.x ** 2 + s.y ** 2 for s in map(_as_sample, samples)]))


def _as_sample(s):
    if isinstance(s, TraceSample):
        return s
    if isinstance(s, complex):
        return TraceSample.from_complex(s)
    x, y = s
    return TraceSample(float(x), float(y))


def ramanujan_check(samples, tol: float = INSIDE_TOL):
    """Samples outside T by more than tol, as (index, sample, f(x, y))."""
    out = []
    for i, s in enumerate(map(_as_sample, samples)):
        f = trace_boundary(s.x, s.y)
        if f < -tol:
            out.append((i, s, f))
    return out


def sup_distance(density_a, density_b, n: int = 61) -> float:
    """Max |a - b| over an n x n grid of the bounding box, restricted to T."""
    best = 0.0
    for x in np.linspace(-1.5, 3.0, n):
        for y in np.linspace(-2.6, 2.6, n):
            if trace_boundary(x, y) > 0:
                best = max(best, abs(density_a(x, y) - density_b(x, y)))
    return best
