"""Smoothed approximate functional equation for Lambda(s) = Q^s gamma(s) L(s).

With gamma(s) = prod Gamma_R(s + mu_j) prod Gamma_C(s + nu_k) and a test function
g(s) = exp(i a s), shifting a vertical contour across w = 0 gives

    Lambda(s) g(s) = sum_n a_n w1_n + eps * sum_n conj(a_n) w2_n,
    w1_n = (Q/n)^s f1(s, n),        f1(s, n) = 1/(2 pi i) int gamma(s+w) g(s+w) (Q/n)^w dw/w,
    w2_n = (Q/n)^(1-s) f2(1-s, n),  f2(1-s, n) = 1/(2 pi i) int gammabar(1-s+w) g(s-w) (Q/n)^w dw/w,

both integrals on Re w = 3/2.  The integrands are entire-analytic in a strip
around the line, so the trapezoid rule with step h converges like
exp(-2 pi d / h), d the distance to the nearest pole.  Node values are computed
in ball arithmetic (python-flint); the Dirichlet sums over the nodes are
evaluated as blocks of short polynomials in n^(-ih), which keeps ball radii
small even for thousands of nodes.

The Z-function is Z(t) = eps^(-1/2) Lambda(1/2+it) / |Q^s gamma(s)|, with the
overall sign chosen so that Z is positive just above t = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

import mpmath as mp
import numpy as np
from flint import acb, acb_poly, arb, ctx as flint_ctx
from scipy import optimize, special

from .euler import divisor_d3, euler_extend
from .spectra import SpectralPoint, epsilon_infinity, is_admissible

__all__ = [
    "PrecisionContext",
    "TestFunction",
    "AfeRow",
    "AfeEngine",
    "LPoint",
    "ZEvaluation",
    "TrivialZero",
    "ZeroScan",
    "InsufficientCoefficients",
    "gamma_R",
    "gamma_C",
    "gamma_factor",
    "afe_row",
    "a_for_height",
    "z_value",
    "trivial_zeros",
    "zero_scan",
    "FastZ",
]

LN10 = math.log(10)


class InsufficientCoefficients(ValueError):
    """Raised when unknown Dirichlet coefficients could change a value by more than allowed."""


@dataclass(frozen=True)
class PrecisionContext:
    """Accuracy settings.

    ``truncation_cutoff`` of None lets each row extend its Dirichlet sum until the
    tail majorant (with |a_n| <= d_3(n)) falls below ``tail_bound``.
    """

    working_digits: int = 60
    truncation_cutoff: int | None = 40
    tail_bound: float = 1e-30
    abscissa: Fraction = Fraction(3, 2)
    block: int = 32
    max_cutoff: int = 4000

    def __post_init__(self):
        if self.working_digits < 30:
            raise ValueError("working_digits must be at least 30")
        if self.truncation_cutoff is not None and self.truncation_cutoff < 1:
            raise ValueError("truncation_cutoff must be positive")
        if not self.tail_bound > 0:
            raise ValueError("tail_bound must be positive")

    def replace(self, **kw) -> "PrecisionContext":
        return replace(self, **kw)


DEFAULT_CONTEXT = PrecisionContext()


# -- gamma functions (mpmath, public) -----------------------------------------


def _digits(ctx):
    return (ctx or DEFAULT_CONTEXT).working_digits


def _check_pole(z, label, shift=mp.mpf(0)):
    x = z / 2 if label == "R" else z
    if mp.im(x) == 0 and mp.re(x) <= 0 and mp.re(x) == mp.floor(mp.re(x)):
        raise ValueError(f"Gamma_{label} has a pole at s = {mp.nstr(z - shift, 10)}")


def gamma_R(s, ctx: PrecisionContext | None = None):
    """pi^(-s/2) Gamma(s/2)."""
    with mp.workdps(_digits(ctx) + 5):
        s = mp.mpmathify(s)
        _check_pole(s, "R")
        return mp.pi ** (-s / 2) * mp.gamma(s / 2)


def gamma_C(s, ctx: PrecisionContext | None = None):
    """(2 pi)^(-s) Gamma(s); equals Gamma_R(s) Gamma_R(s+1) / 2."""
    with mp.workdps(_digits(ctx) + 5):
        s = mp.mpmathify(s)
        _check_pole(s, "C")
        return (2 * mp.pi) ** (-s) * mp.gamma(s)


def gamma_factor(point: SpectralPoint, s, ctx: PrecisionContext | None = None):
    with mp.workdps(_digits(ctx) + 5):
        s = mp.mpmathify(s)
        v = mp.mpc(1)
        for mu in point.mus():
            v *= gamma_R(s + mu, ctx)
        for nu in point.nus():
            v *= gamma_C(s + nu, ctx)
        return v


@dataclass(frozen=True)
class TestFunction:
    """g(s) = exp(i a s) with real a."""

    a: object = 0

    def __post_init__(self):
        object.__setattr__(self, "a", mp.mpf(self.a))

    def __call__(self, s):
        return mp.exp(mp.mpc(0, 1) * self.a * s)

    def check_wedge(self, degree: int):
        """The integrands decay like exp(-(pi d/4 - |a|)|Im w|)."""
        if abs(self.a) >= math.pi * degree / 4:
            raise ValueError(f"|a| = {self.a} is outside the convergence wedge for degree {degree}")


def a_for_height(t) -> float:
    """Exponential test-function parameter that keeps cancellation small at height t."""
    t = float(t)
    return -math.copysign(min(1.2, abs(t) / 20), t) if t else 0.0


# -- exact conversions between mpmath and flint --------------------------------


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    sign, man, exp, _ = mp.mpf(x)._mpf_
    if not man:
        return Fraction(0)
    v = Fraction(int(man)) * (Fraction(2) ** exp)
    return -v if sign else v


def _arb(x) -> arb:
    if isinstance(x, Fraction):
        return arb(x.numerator) / x.denominator
    if isinstance(x, int):
        return arb(x)
    sign, man, exp, _ = mp.mpf(x)._mpf_
    if not man:
        return arb(0)
    v = arb(int(man)) * arb(2) ** int(exp)
    return -v if sign else v


def _acb(z) -> acb:
    z = mp.mpc(z)
    return acb(_arb(z.real), _arb(z.imag))


def _mpf(x: arb):
    m, e = x.mid().man_exp()
    return mp.mpf((int(m), int(e)))


def _mpc(z: acb):
    return mp.mpc(_mpf(z.real), _mpf(z.imag))


def _rad(z: acb) -> float:
    return float(z.real.rad()) + float(z.imag.rad())


class _flint_prec:
    def __init__(self, bits):
        self.bits = int(bits)

    def __enter__(self):
        self.old = flint_ctx.prec
        flint_ctx.prec = self.bits

    def __exit__(self, *exc):
        flint_ctx.prec = self.old


# -- the engine -----------------------------------------------------------------


@dataclass
class AfeRow:
    """Weights of one approximate functional equation at a point s.

    ``w1[n-1]``, ``w2[n-1]`` are the weights of a_n and conj(a_n).
    """

    s: object
    test_function: TestFunction
    sign: object
    conductor: int
    gamma_value: object
    w1: list
    w2: list
    tail: float
    loss_digits: float
    digits: int

    @property
    def cutoff(self) -> int:
        return len(self.w1)

    @property
    def weights(self) -> dict:
        return {n: (self.w1[n - 1], self.w2[n - 1]) for n in range(1, self.cutoff + 1)}

    @property
    def constant(self):
        return self.w1[0] + self.sign * self.w2[0]

    def value(self, coefficients) -> object:
        """Lambda(s) g(s) given a_n (dict or 1-based sequence); missing entries count as 0."""
        total = mp.mpc(0)
        for n in range(1, self.cutoff + 1):
            a = _get(coefficients, n)
            if a is None:
                continue
            total += a * self.w1[n - 1] + self.sign * mp.conj(a) * self.w2[n - 1]
        return total

    def z_scale(self):
        """Factor turning Lambda(s) g(s) into the raw Z value on the critical line."""
        q = mp.mpf(self.conductor) ** (mp.re(self.s) / 2)
        return mp.sqrt(mp.conj(self.sign)) / (self.test_function(self.s) * q * abs(self.gamma_value))

    def z_forms(self):
        """Per n, the complex coefficients (u_n, v_n) with r*Lambda*g = sum u_n Re a_n + v_n Im a_n."""
        r = self.z_scale()
        out = []
        for n in range(self.cutoff):
            A = r * self.w1[n]
            B = r * self.sign * self.w2[n]
            out.append((A + B, mp.mpc(0, 1) * (A - B)))
        return out

    def z_weights(self):
        """Real weights (of a_n^r, a_n^i) of the raw Z value."""
        return [(mp.re(u), mp.re(v)) for u, v in self.z_forms()]

    def z_value(self, coefficients):
        return self.z_scale() * self.value(coefficients)


def _get(coefficients, n):
    if isinstance(coefficients, dict):
        return coefficients.get(n)
    if n - 1 < len(coefficients):
        return coefficients[n - 1]
    return None


class AfeEngine:
    """Builds AfeRows for one Gamma-factor, caching gamma values along vertical lines.

    Rows at the same height t share their gamma values across test functions, and
    rows whose heights differ by multiples of the quadrature step share them too.
    """

    def __init__(self, point: SpectralPoint, conductor: int = 1, ctx: PrecisionContext = DEFAULT_CONTEXT,
                 sign=None):
        self.point = point
        self.conductor = int(conductor)
        self.ctx = ctx
        if sign is None:
            sign = epsilon_infinity(point.gamma_type) if self.conductor == 1 else None
        if sign is None:
            raise ValueError("the sign must be given when N > 1")
        self.sign = mp.mpc(sign)
        self._mu = [(_to_fraction(d), _to_fraction(l)) for d, l in zip(point.deltas, point.lambdas)]
        self._nu = [(_to_fraction(k), _to_fraction(b)) for k, b in point.kappa_lambdas]
        self._cache = {}
        self._base_step = self._step_for(ctx.working_digits + 30, float(ctx.abscissa))

    # double-precision magnitude model used to place nodes and estimate loss
    def _log_gamma_np(self, sigma, u):
        z = sigma + 1j * np.asarray(u, dtype=float)
        out = np.zeros(z.shape)
        for d, l in self._mu:
            x = (z + float(d) + 1j * float(l)) / 2
            out += (-x * math.log(math.pi) + special.loggamma(x)).real
        for k, b in self._nu:
            x = z + float(k) + 1j * float(b)
            out += (-x * math.log(2 * math.pi) + special.loggamma(x)).real
        return out

    @staticmethod
    def _step_for(digits, distance):
        return int(math.ceil(digits * LN10 / (2 * math.pi * distance)))

    def _pole_distance(self, sigma):
        nu0 = float(self.ctx.abscissa)
        d = nu0
        for dl, _ in self._mu:
            d = min(d, nu0 + sigma + float(dl))
        for k, _ in self._nu:
            d = min(d, nu0 + sigma + float(k))
        return d

    def _node_range(self, sigma_line, t, a, direction, ref, digits, m):
        """Index range [j0, j1] of nodes y = j/m whose integrand matters."""
        nu0 = float(self.ctx.abscissa)
        span = 60.0
        while True:
            y = np.arange(-span, span, 0.125)
            lg = self._log_gamma_np(sigma_line, t + direction * y)
            mag = lg - a * (t + direction * y) - 0.5 * np.log(nu0 ** 2 + y ** 2)
            peak = float(mag.max())
            keep = np.nonzero(mag >= ref - (digits + 12) * LN10)[0]
            if keep[0] > 0 and keep[-1] < len(y) - 1:
                break
            span *= 2
            if span > 8000:
                raise RuntimeError("contour integral does not converge: integrand fails to decay")
        y_lo, y_hi = y[keep[0]] - 1, y[keep[-1]] + 1
        return int(math.floor(y_lo * m)), int(math.ceil(y_hi * m)), peak

    def _line_gamma(self, sigma: Fraction, u: Fraction) -> acb:
        key = (sigma, u)
        hit = self._cache.get(key)
        if hit is not None and hit[0] >= flint_ctx.prec:
            return hit[1]
        v = self._gamma_at(acb(_arb(sigma), _arb(u)))
        self._cache[key] = (flint_ctx.prec, v)
        return v

    def gamma(self, s) -> object:
        return gamma_factor(self.point, s, self.ctx)

    def row(self, s, g: TestFunction | float = 0, cutoff: int | None = None) -> AfeRow:
        if not isinstance(g, TestFunction):
            g = TestFunction(g)
        g.check_wedge(self.point.degree)
        ctx = self.ctx
        s = mp.mpc(s)
        sig, t = _to_fraction(s.real), _to_fraction(s.imag)
        nu0 = ctx.abscissa
        a = g.a
        digits = ctx.working_digits
        ref = float(self._log_gamma_np(float(sig), [float(t)])[0]) - float(a) * float(t)
        # f1 runs along sigma + nu0 at heights t + y; f2 along 1 - sigma + nu0 at t - y
        lines = ((sig + nu0, 1), (1 - sig + nu0, -1))
        dist = min(self._pole_distance(float(sig)), self._pole_distance(float(1 - sig)))
        if dist < 0.5:
            raise ValueError("a Gamma pole lies too close to the integration contour")
        ranges, peak = [], -math.inf
        m = self._base_step
        for line, direction in lines:
            j0, j1, pk = self._node_range(float(line), float(t), float(a), direction, ref, digits, m)
            ranges.append((j0, j1))
            peak = max(peak, pk)
        loss = max(0.0, (peak - ref) / LN10)
        if loss > 30:
            m = self._step_for(digits + loss + 10, dist)
            ranges = [self._node_range(float(line), float(t), float(a), direction, ref, digits, m)[:2]
                      for line, direction in lines]
        elif dist < float(nu0):
            m = self._step_for(digits + 40, dist)
        bits = int((digits + loss + 20) * math.log2(10))
        with _flint_prec(bits), mp.workdps(digits + int(loss) + 20):
            return self._assemble(s, sig, t, g, m, ranges, loss, cutoff)

    def _assemble(self, s, sig, t, g, m, ranges, loss, cutoff):
        ctx = self.ctx
        nu0 = _arb(ctx.abscissa)
        a = _arb(g.a)
        I = acb(0, 1)
        s_b = acb(_arb(sig), _arb(t))
        h = arb(1) / m
        polys = []
        for (j0, j1), line, direction in zip(ranges, (sig + ctx.abscissa, 1 - sig + ctx.abscissa), (1, -1)):
            vals = []
            for j in range(j0, j1 + 1):
                y = Fraction(j, m)
                w = acb(nu0, _arb(y))
                gam = self._line_gamma(line, t + direction * y)
                if direction == 1:
                    vals.append(gam * (I * a * (s_b + w)).exp() / w)
                else:
                    vals.append(gam.conjugate() * (I * a * (s_b - w)).exp() / w)
            B = ctx.block
            blocks = [(j0 + q * B, acb_poly(vals[q * B:(q + 1) * B])) for q in range((len(vals) + B - 1) // B)]
            polys.append(blocks)
        gs = self._gamma_at(s_b)
        scale = abs(_mpc(gs) * mp.exp(-g.a * mp.im(s)))
        q_log = arb(self.conductor).log() / 2
        twopi = 2 * arb.pi()

        def weights(n):
            L = q_log - arb(n).log()
            z = (I * h * L).exp()
            out = []
            for blocks, expo in zip(polys, (s_b, 1 - s_b)):
                tot = acb(0)
                for j, poly in blocks:
                    tot += (I * (arb(j) / m) * L).exp() * poly(z)
                f = tot * (nu0 * L).exp() * h / twopi
                out.append((expo * L).exp() * f)
            return out

        n_fixed = cutoff or ctx.truncation_cutoff
        w1, w2 = [], []
        tol = mp.mpf(ctx.tail_bound)
        n = 1
        while True:
            x1, x2 = weights(n)
            if max(_rad(x1), _rad(x2)) > float(scale) * 10.0 ** (-ctx.working_digits):
                raise RuntimeError("ball radii exceed the requested accuracy; raise working_digits")
            w1.append(_mpc(x1))
            w2.append(_mpc(x2))
            if n_fixed is not None and n >= n_fixed:
                break
            if n_fixed is None and n >= 8:
                if self._tail(weights, n, scale) < tol:
                    break
                if n >= ctx.max_cutoff:
                    raise RuntimeError("cutoff too small for tail_bound")
            n += 1
        tail = self._tail(weights, len(w1), scale)
        return AfeRow(s=s, test_function=g, sign=self.sign, conductor=self.conductor, gamma_value=_mpc(gs),
                      w1=w1, w2=w2, tail=float(tail), loss_digits=loss, digits=ctx.working_digits)

    def _gamma_at(self, z: acb) -> acb:
        logpi = arb.pi().log()
        log2pi = (2 * arb.pi()).log()
        acc = acb(0)
        for d, l in self._mu:
            x = (z + acb(_arb(d), _arb(l))) / 2
            acc += -x * logpi + x.lgamma()
        for k, b in self._nu:
            x = z + acb(_arb(k), _arb(b))
            acc += -x * log2pi + x.lgamma()
        return acc.exp()

    @staticmethod
    def _tail(weights, cutoff, scale):
        """Majorant of sum_{n > cutoff} d_3(n)(|w1_n| + |w2_n|) on the Z-scale.

        Uses decay of the weights beyond the cutoff on dyadic blocks and the crude
        bound d_3(n) <= 4n.
        """
        total = mp.mpf(0)
        lo = cutoff
        while True:
            x1, x2 = weights(lo + 1)
            size = (abs(_mpc(x1)) + abs(_mpc(x2))) / scale
            term = size * lo * 4 * (2 * lo)
            total += term
            if term < total * mp.mpf(10) ** -3 or size < mp.mpf(10) ** -200:
                return total
            lo *= 2


_ENGINES = {}


def afe_row(point: SpectralPoint, N: int, s, g, ctx: PrecisionContext = DEFAULT_CONTEXT, sign=None,
            check_tail: bool = False) -> AfeRow:
    """One row; ``check_tail`` raises when the Dirichlet tail exceeds ctx.tail_bound."""
    key = (point, N, ctx, None if sign is None else complex(sign))
    eng = _ENGINES.get(key)
    if eng is None:
        if len(_ENGINES) > 16:
            _ENGINES.clear()
        eng = _ENGINES[key] = AfeEngine(point, N, ctx, sign)
    row = eng.row(s, g)
    if check_tail and row.tail > ctx.tail_bound:
        raise RuntimeError(f"cutoff {row.cutoff} too small: tail {row.tail:.2e} > {ctx.tail_bound:.0e}")
    return row


# -- L-points and the Z-function ------------------------------------------------


@dataclass
class LPoint:
    """An L-function as a point: Gamma data, conductor, sign and prime coefficients."""

    point: SpectralPoint
    coefficients: dict = field(default_factory=dict)
    conductor: int = 1
    sign: object = None
    digits: dict = field(default_factory=dict)
    provenance: str = "oracle"

    def __post_init__(self):
        g = self.point.gamma_type
        if not is_admissible(g, self.conductor):
            raise ValueError(f"Gamma-type {g} is not admissible at N = {self.conductor}")
        if self.sign is None:
            if self.conductor != 1:
                raise ValueError("sign must be given when N > 1")
            self.sign = epsilon_infinity(g)
        self.sign = mp.mpc(self.sign)
        self.coefficients = {int(p): mp.mpc(v) for p, v in self.coefficients.items()}
        self._z_sign = None

    @property
    def gamma_type(self):
        return self.point.gamma_type

    def dirichlet_coefficients(self, n_max: int) -> dict:
        """a_n (None where a prime factor is unknown)."""
        return euler_extend(self.coefficients, n_max, strict=False)

    def ramanujan_box_violations(self):
        d = self.point.degree
        return [p for p, v in self.coefficients.items() if abs(v) > d]


@dataclass
class ZEvaluation:
    t: float
    value: object
    imag_residual: object
    tail: float
    test_parameter: float


def _unknown_contribution(row: AfeRow, coeffs):
    r = row.z_scale()
    tot = mp.mpf(0)
    for n in range(1, row.cutoff + 1):
        if coeffs.get(n) is None:
            tot += divisor_d3(n) * (abs(r * row.w1[n - 1]) + abs(r * row.w2[n - 1]))
    return tot


def _raw_z(L: LPoint, t, ctx, a=None):
    eng = _engine_for(L, ctx)
    a = a_for_height(t) if a is None else a
    row = eng.row(mp.mpc(mp.mpf(1) / 2, t), a)
    coeffs = L.dirichlet_coefficients(row.cutoff)
    v = row.z_value(coeffs)
    tail = float(_unknown_contribution(row, coeffs)) + row.tail
    return v, tail, a


def _engine_for(L: LPoint, ctx):
    key = ("L", L.point, L.conductor, complex(L.sign), ctx)
    eng = _ENGINES.get(key)
    if eng is None:
        eng = _ENGINES[key] = AfeEngine(L.point, L.conductor, ctx, L.sign)
    return eng


def _z_orientation(L: LPoint, ctx) -> int:
    if L._z_sign is None:
        for t in ("0.001", "0.01", "0.1", "0.5"):
            v, tail, _ = _raw_z(L, mp.mpf(t), ctx)
            if abs(mp.re(v)) > 10 * tail + mp.mpf(10) ** (-ctx.working_digits // 2):
                L._z_sign = 1 if mp.re(v) > 0 else -1
                break
        else:
            raise InsufficientCoefficients("cannot fix the sign of Z near t = 0")
    return L._z_sign


def z_value(L: LPoint, t, ctx: PrecisionContext = DEFAULT_CONTEXT, full: bool = False, a=None):
    """Z(t), positive just above t = 0.

    Raises InsufficientCoefficients when the unknown a_n (bounded by d_3(n)) and the
    Dirichlet tail could move the value by more than ctx.tail_bound.
    """
    t = mp.mpf(t)
    v, tail, a = _raw_z(L, t, ctx, a)
    if tail > ctx.tail_bound:
        raise InsufficientCoefficients(f"coefficient data only pins Z({mp.nstr(t, 8)}) to {tail:.1e}")
    sgn = _z_orientation(L, ctx)
    if full:
        return ZEvaluation(float(t), sgn * mp.re(v), mp.im(v), tail, float(a))
    return sgn * mp.re(v)


@dataclass(frozen=True)
class TrivialZero:
    position: object
    projection: float
    factor: str


def trivial_zeros(point: SpectralPoint, height_window, sigma_min=-12):
    """Poles of the Gamma-factor (zeros of L forced there) with height in the window.

    Gamma_R(s + delta + i lam) contributes s = -delta - 2m - i lam and
    Gamma_C(s + kappa + i beta) contributes s = -kappa - m - i beta, m >= 0, with
    real part >= sigma_min.  ``projection`` is the height on the critical line.
    """
    lo, hi = (mp.mpf(v) for v in height_window)
    out = []
    if lo > hi:
        return out
    for d, l in zip(point.deltas, point.lambdas):
        if lo <= -l <= hi:
            m = 0
            while -d - 2 * m >= sigma_min:
                out.append(TrivialZero(mp.mpc(-d - 2 * m, -l), float(-l), f"R{d}"))
                m += 1
    for k, b in point.kappa_lambdas:
        kf = mp.mpf(k.numerator) / k.denominator if isinstance(k, Fraction) else mp.mpf(k)
        if lo <= -b <= hi:
            m = 0
            while -kf - m >= sigma_min:
                out.append(TrivialZero(mp.mpc(-kf - m, -b), float(-b), f"C{k}"))
                m += 1
    out.sort(key=lambda z: (z.projection, -float(mp.re(z.position))))
    return out


# -- double-precision Z for scans ------------------------------------------------


class FastZ:
    """Z(t) in double precision: the same quadrature with numpy, for zero scans.

    Accurate to roughly 1e-10 for heights where a_for_height keeps the
    cancellation below five digits (|t| up to about 40 in degree 3).
    """

    def __init__(self, L: LPoint, cutoff: int = 60, step: float = 0.2):
        self.L = L
        self.cutoff = cutoff
        self.h = step
        self.nu0 = 1.5
        coeffs = L.dirichlet_coefficients(cutoff)
        self.known = np.array([coeffs[n] is not None for n in range(1, cutoff + 1)])
        self.a_n = np.array([complex(coeffs[n]) if coeffs[n] is not None else 0j for n in range(1, cutoff + 1)])
        self.bound = np.array([divisor_d3(n) for n in range(1, cutoff + 1)], dtype=float)
        self.mu = [complex(m) for m in L.point.mus()]
        self.nu = [complex(n) for n in L.point.nus()]
        self.eps = complex(L.sign)
        self.logx = 0.5 * math.log(L.conductor) - np.log(np.arange(1, cutoff + 1))
        self._sign = None

    def _loggamma(self, z):
        out = np.zeros(np.shape(z), dtype=complex)
        for m in self.mu:
            x = (z + m) / 2
            out += -x * math.log(math.pi) + special.loggamma(x)
        for n in self.nu:
            x = z + n
            out += -x * math.log(2 * math.pi) + special.loggamma(x)
        return out

    def raw(self, t: float, a: float | None = None):
        """(raw Z, bound on the contribution of unknown coefficients)."""
        a = a_for_height(t) if a is None else a
        span = abs(t) + max([abs(m.imag) for m in self.mu + self.nu] + [0]) + 50 / (
            math.pi * self.L.point.degree / 4 - abs(a))
        y = np.arange(-span, span + self.h, self.h)
        w = self.nu0 + 1j * y
        s = 0.5 + 1j * t
        ref = self._loggamma(np.array([s]))[0]
        norm = ref.real + 1j * a * s
        v1 = np.exp(self._loggamma(s + w) + 1j * a * (s + w) - norm) / w
        v2 = np.exp(np.conj(self._loggamma(np.conj(1 - s) + np.conj(w))) + 1j * a * (s - w) - norm) / w
        E = np.exp(np.outer(self.logx, w))
        f1 = E @ v1 * self.h / (2 * math.pi)
        f2 = E @ v2 * self.h / (2 * math.pi)
        w1 = np.exp(s * self.logx) * f1
        w2 = np.exp((1 - s) * self.logx) * f2
        r = np.sqrt(np.conj(self.eps)) * self.L.conductor ** -0.25
        terms = r * (self.a_n * w1 + self.eps * np.conj(self.a_n) * w2)
        unknown = np.sum(self.bound[~self.known] * (np.abs(r * w1) + np.abs(r * w2))[~self.known])
        return complex(np.sum(terms)), float(unknown)

    def orientation(self) -> int:
        if self._sign is None:
            for t in (1e-3, 1e-2, 0.1, 0.5):
                v, err = self.raw(t)
                if abs(v.real) > 10 * err + 1e-12:
                    self._sign = 1 if v.real > 0 else -1
                    break
            else:
                raise InsufficientCoefficients("cannot fix the sign of Z near t = 0")
        return self._sign

    def __call__(self, t: float) -> float:
        return self.orientation() * self.raw(t)[0].real


@dataclass
class ZeroScan:
    zeros: list
    sign_changes: int
    grid: np.ndarray
    values: np.ndarray
    max_unknown: float


def zero_scan(L: LPoint, t_range, step: float = 0.05, tol: float = 1e-10, fast: FastZ | None = None,
              max_unknown: float = 1e-4) -> ZeroScan:
    """Critical-line zeros in t_range: sign changes on a grid, refined by Brent's
    bracketing method (bisection-safeguarded) to within tol."""
    t0, t1 = (float(v) for v in t_range)
    if t1 <= t0 or step <= 0:
        raise ValueError("need t0 < t1 and a positive step")
    fz = fast or FastZ(L)
    fz.orientation()
    n = int(math.ceil((t1 - t0) / step))
    grid = np.linspace(t0, t0 + n * step, n + 1)
    vals, worst = [], 0.0
    for t in grid:
        v, err = fz.raw(float(t))
        vals.append(fz._sign * v.real)
        worst = max(worst, err)
    if worst > max_unknown:
        raise InsufficientCoefficients(f"unknown coefficients move Z by up to {worst:.1e} in this range")
    vals = np.array(vals)
    zeros = []
    for i in range(n):
        if vals[i] == 0:
            zeros.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0:
            zeros.append(optimize.brentq(fz, grid[i], grid[i + 1], xtol=tol, rtol=1e-15))
    return ZeroScan(zeros, len(zeros), grid, vals, worst)
