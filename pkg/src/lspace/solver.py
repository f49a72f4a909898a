"""Locating L-points: overdetermined AFE systems, Newton solves, detectors, refinement.

Two rows of the approximate functional equation at the same height t but with
different test functions give the same Z-value, so their difference is a real
linear equation in (Re a_n, Im a_n).  Through the Euler product these become
polynomial equations in the prime coefficients.  A square subset is solved by
Newton's method; the remaining equations ("detectors") measure how consistent
the Gamma-data is, and the spectral parameters are refined by driving the
signed detector values to zero.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field

import mpmath as mp
import numpy as np
import scipy.linalg

from .afe import AfeEngine, LPoint, PrecisionContext
from .euler import euler_extend, euler_extend_with_gradient
from .modular import primes_up_to
from .spectra import SpectralPoint, epsilon_infinity, landscape_coordinates, point_from_landscape

__all__ = [
    "euler_extend",
    "Equation",
    "AfeSystem",
    "Candidate",
    "SearchState",
    "SingularSystemError",
    "NoConvergence",
    "RefinementDiverged",
    "VerificationReport",
    "assemble_system",
    "solve_system",
    "detector_vector",
    "detector_residual",
    "refine_parameters",
    "scan_region",
    "ScanResult",
    "verify_lpoint",
    "DEFAULT_HEIGHTS",
    "DEFAULT_TEST_PARAMETERS",
]

log = logging.getLogger(__name__)

DEFAULT_HEIGHTS = (-8, -4, 0, 4, 8)
DEFAULT_TEST_PARAMETERS = (0, "-0.6", "-0.3", "0.3", "0.6")
# disjoint from the defaults; used when re-checking a stored point
FRESH_HEIGHTS = (-7, -3, 1, 5, 9)
FRESH_TEST_PARAMETERS = ("0.1", "-0.45", "-0.15", "0.45", "0.75")


class SingularSystemError(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


class RefinementDiverged(RuntimeError):
    pass


@dataclass
class Equation:
    """sum_n (wr_n Re a_n + wi_n Im a_n) = 0 from two test functions at one height."""

    t: object
    a_pair: tuple
    weights: list  # [(wr_n, wi_n)] for n = 1..cutoff

    @property
    def norm(self):
        return mp.sqrt(mp.fsum(wr ** 2 + wi ** 2 for wr, wi in self.weights))


@dataclass
class AfeSystem:
    point: SpectralPoint
    sign: object
    unknown_primes: tuple
    known: dict
    self_dual: bool
    equations: list
    solve_set: list
    detector_set: list
    condition: float
    digits: int

    @property
    def n_unknowns(self) -> int:
        return len(self.unknown_primes) * (1 if self.self_dual else 2)

    @property
    def cutoff(self) -> int:
        return max(len(e.weights) for e in self.equations)

    def to_primes(self, x) -> dict:
        ap = dict(self.known)
        for i, p in enumerate(self.unknown_primes):
            if self.self_dual:
                ap[p] = mp.mpc(x[i], 0)
            else:
                ap[p] = mp.mpc(x[2 * i], x[2 * i + 1])
        return ap

    def from_primes(self, ap) -> list:
        x = []
        for p in self.unknown_primes:
            v = mp.mpc(ap.get(p, 0))
            x += [v.real] if self.self_dual else [v.real, v.imag]
        return x

    def evaluate(self, x, rows=None):
        """Equation values and Jacobian (w.r.t. the real unknowns) at x."""
        rows = range(len(self.equations)) if rows is None else rows
        ap = self.to_primes(x)
        full = euler_extend_with_gradient(ap, self.unknown_primes, self.cutoff)
        vals, jac = [], []
        for k in rows:
            eq = self.equations[k]
            v = mp.mpf(0)
            g = [mp.mpf(0)] * (2 * len(self.unknown_primes))
            for n in range(1, self.cutoff + 1):
                an = full[n]
                if an is None:
                    continue
                if n > len(eq.weights):
                    break
                wr, wi = eq.weights[n - 1]
                av, ag = an
                v += wr * av.real + wi * av.imag
                for i in range(len(g)):
                    g[i] += wr * ag[i].real + wi * ag[i].imag
            if self.self_dual:
                g = g[0::2]
            vals.append(v)
            jac.append(g)
        return vals, jac


@dataclass
class Candidate:
    coefficients: dict  # p -> a_p
    x: list
    residual: object
    detectors: list
    iterations: int


@dataclass
class SearchState:
    coordinates: list
    residual: object
    history: list = field(default_factory=list)  # (coordinates, residual, digits gained)

    def log_step(self, coords, residual):
        gained = None
        if self.history:
            prev = self.history[-1][0]
            moved = max(abs(_num(a) - _num(b)) for a, b in zip(coords, prev))
            if len(self.history) >= 2:
                prev_moved = max(abs(_num(a) - _num(b)) for a, b in zip(prev, self.history[-2][0]))
                if moved > 0 and prev_moved > 0:
                    gained = float(mp.log10(prev_moved / moved))
        self.history.append((list(coords), residual, gained))
        self.coordinates = list(coords)
        self.residual = residual


def _num(c):
    return mp.mpf(c.numerator) / c.denominator if hasattr(c, "denominator") else mp.mpf(c)


def _rows(engine: AfeEngine, heights, params, cutoff):
    out = {}
    for t in heights:
        for a in params:
            out[(t, a)] = engine.row(mp.mpc(mp.mpf(1) / 2, mp.mpf(t)), mp.mpf(a), cutoff=cutoff).z_weights()
    return out


def assemble_system(point: SpectralPoint, N: int = 1, test_functions=DEFAULT_TEST_PARAMETERS,
                    eval_points=DEFAULT_HEIGHTS, prime_cutoff: int = 13, ctx: PrecisionContext | None = None,
                    known=None, self_dual: bool = False, sign=None, start=None, engine=None,
                    cutoff: int = 40, min_detectors: int = 3) -> AfeSystem:
    """Equations Z_{a_k}(t) - Z_{a_0}(t) = 0 for each height t and test parameter a_k.

    Unknowns are Re/Im a_p for primes p <= prime_cutoff (Re only when self_dual) not
    listed in ``known``.  The solve set is chosen by column-pivoted QR of the
    row-normalized Jacobian at ``start``; the others are detectors.
    """
    ctx = ctx or PrecisionContext(truncation_cutoff=cutoff)
    params = [mp.mpf(a) for a in test_functions]
    if len(set(params)) != len(params):
        raise SingularSystemError("duplicate test functions give identical rows: the solve block is singular")
    if N != 1 and sign is None:
        raise ValueError("the sign must be supplied when N > 1")
    sign = mp.mpc(epsilon_infinity(point.gamma_type) if sign is None else sign)
    known = {int(p): mp.mpc(v) for p, v in (known or {}).items()}
    unknown = tuple(p for p in primes_up_to(prime_cutoff) if p not in known)
    engine = engine or AfeEngine(point, N, ctx, sign)
    with mp.workdps(ctx.working_digits + 10):
        rows = _rows(engine, eval_points, test_functions, cutoff)
        eqs = []
        for t in eval_points:
            base = rows[(t, test_functions[0])]
            for a in test_functions[1:]:
                # automatic cutoffs differ per row; weights past a row's cutoff are below its tail bound
                w = [(u[0] - b[0], u[1] - b[1])
                     for u, b in itertools.zip_longest(rows[(t, a)], base, fillvalue=(0, 0))]
                eqs.append(Equation(mp.mpf(t), (mp.mpf(test_functions[0]), mp.mpf(a)), w))
        system = AfeSystem(point, sign, unknown, known, self_dual, eqs, [], [], math.inf, ctx.working_digits)
        m = system.n_unknowns
        if len(eqs) < m + min_detectors:
            raise ValueError(f"{len(eqs)} equations cannot fix {m} unknowns and {min_detectors} detectors")
        x0 = system.from_primes(start or {})
        _, J = system.evaluate(x0)
        Jn = np.array([[float(c) for c in r] for r in J])
        norms = np.linalg.norm(Jn, axis=1)
        if np.any(norms == 0):
            raise SingularSystemError("an equation does not involve any unknown")
        Jn = Jn / norms[:, None]
        _, _, piv = scipy.linalg.qr(Jn.T, pivoting=True)
        system.solve_set = sorted(int(i) for i in piv[:m])
        system.detector_set = [i for i in range(len(eqs)) if i not in system.solve_set]
        cond = float(np.linalg.cond(Jn[system.solve_set]))
        system.condition = cond
        if not cond < 10 ** (ctx.working_digits / 2):
            raise SingularSystemError(f"solve block condition number {cond:.2e} is too large")
    return system


def _newton(system: AfeSystem, x, tol, max_iter=40):
    x = [mp.mpf(v) for v in x]
    for k in range(max_iter):
        v, J = system.evaluate(x, system.solve_set)
        try:
            dx = mp.lu_solve(mp.matrix(J), mp.matrix(v))
        except ZeroDivisionError:
            return None, k
        x = [x[i] - dx[i] for i in range(len(x))]
        step = mp.norm(dx)
        if step < tol:
            return x, k + 1
        # weakly determined coefficients (large p) can take large early steps
        if not mp.isfinite(step) or step > 1e15:
            return None, k
    return None, max_iter


def detector_vector(candidate, system: AfeSystem) -> list:
    """Detector values divided by their row norms (signed)."""
    x = candidate.x if isinstance(candidate, Candidate) else system.from_primes(candidate)
    vals, _ = system.evaluate(x, system.detector_set)
    return [v / system.equations[k].norm for v, k in zip(vals, system.detector_set)]


def detector_residual(candidate, system: AfeSystem):
    """Root-mean-square of the row-normalized detector values."""
    d = detector_vector(candidate, system)
    return mp.sqrt(mp.fsum(v ** 2 for v in d) / len(d))


def solve_system(system: AfeSystem, starts=None, n_random: int = 6, rng=None, dedupe: float = 1e-10):
    """Newton from each start (dicts p -> a_p or vectors) plus random starts in the box |a_p| <= 3.

    Returns candidates sorted by detector residual; raises NoConvergence if none converged.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    with mp.workdps(system.digits + 10):
        tol = mp.mpf(10) ** (-(system.digits - 12))
        pool = []
        for s in starts or []:
            pool.append(system.from_primes(s) if isinstance(s, dict) else list(s))
        for _ in range(n_random):
            r = 3 * np.sqrt(rng.random(len(system.unknown_primes)))
            th = 2 * np.pi * rng.random(len(system.unknown_primes))
            if system.self_dual:
                pool.append([mp.mpf(float(v)) for v in 3 * (2 * rng.random(len(system.unknown_primes)) - 1)])
            else:
                pool.append([mp.mpf(float(c)) for v, a in zip(r, th) for c in (v * np.cos(a), v * np.sin(a))])
        found = []
        for x0 in pool:
            x, its = _newton(system, x0, tol)
            if x is None:
                continue
            if any(max(abs(a - b) for a, b in zip(x, c.x)) < dedupe for c in found):
                continue
            ap = system.to_primes(x)
            cand = Candidate(ap, x, None, None, its)
            cand.detectors = detector_vector(cand, system)
            cand.residual = mp.sqrt(mp.fsum(v ** 2 for v in cand.detectors) / len(cand.detectors))
            found.append(cand)
        if not found:
            raise NoConvergence("Newton did not converge from any start")
        found.sort(key=lambda c: c.residual)
        for c in found[1:]:
            log.info("alternative solution with residual %s", mp.nstr(c.residual, 3))
        return found


def _landscape(initial):
    if isinstance(initial, LPoint):
        initial = initial.point
    coords, used_dual = landscape_coordinates(initial)
    if used_dual:
        raise ValueError("start from the landscape representative, not its dual")
    return initial.gamma_type, [mp.mpf(c) if not hasattr(c, "denominator") else c for c in coords]


def _free_indices(gtype, coords, free):
    names = _coordinate_names(gtype, len(coords))
    idx = []
    for f in free:
        if isinstance(f, int):
            idx.append(f)
        elif f in names:
            idx.append(names.index(f))
        else:
            raise ValueError(f"unknown coordinate {f!r}; choose from {names}")
    return idx


def _coordinate_names(gtype, n):
    if gtype.kappa_halves and len(gtype.deltas) == 1:
        return ["kappa", "lambda"]
    return [f"lambda{i + 1}" for i in range(n)]


def _evaluate_point(point, ctx, system_kw, start, detector_set=None):
    sys_ = assemble_system(point, ctx=ctx, start=start, **system_kw)
    if detector_set is not None and len(detector_set) == len(sys_.detector_set):
        sys_.detector_set = list(detector_set)
        sys_.solve_set = [i for i in range(len(sys_.equations)) if i not in detector_set]
    starts = [start] if start else None
    cands = solve_system(sys_, starts=starts, n_random=0 if start else 6)
    return sys_, cands[0]


def refine_parameters(initial, free_coordinates=("lambda",), ctx: PrecisionContext | None = None,
                      step=mp.mpf("0.01"), tol=mp.mpf("1e-12"), max_iter: int = 14, start=None,
                      system_kw=None, threshold=mp.mpf("1e-12")):
    """Drive the signed detectors to zero by secant (1 free coordinate) or Broyden (2).

    Returns (LPoint, SearchState).  The step is clamped to ``step``.
    """
    ctx = ctx or PrecisionContext()
    system_kw = dict(system_kw or {})
    gtype, coords = _landscape(initial)
    free = _free_indices(gtype, coords, free_coordinates)
    if not 1 <= len(free) <= 2:
        raise ValueError("one or two free coordinates are supported")
    step = mp.mpf(step)
    with mp.workdps(ctx.working_digits + 10):
        coords = [c if hasattr(c, "denominator") else mp.mpf(c) for c in coords]
        state = SearchState(list(coords), None)
        if isinstance(initial, LPoint) and start is None and initial.coefficients:
            start = dict(initial.coefficients)

        def evaluate(c, start, dset):
            pt = point_from_landscape(gtype, c)
            sys_, cand = _evaluate_point(pt, ctx, system_kw, start, dset)
            return sys_, cand, mp.matrix(cand.detectors)

        sys_, cand, D = evaluate(coords, start, None)
        dset = list(sys_.detector_set)
        state.log_step(coords, cand.residual)
        log.info("start %s residual %s", [mp.nstr(mp.mpf(coords[i]), 15) for i in free], mp.nstr(cand.residual, 3))
        # second point to seed the secant / Broyden Jacobian
        J = mp.matrix(len(dset), len(free))
        pts = [(list(coords), D, cand)]
        for j, i in enumerate(free):
            c2 = list(coords)
            c2[i] = c2[i] + step
            _, cand2, D2 = evaluate(c2, cand.coefficients, dset)
            for r in range(len(dset)):
                J[r, j] = (D2[r] - D[r]) / step
            if len(free) == 1:
                pts.append((c2, D2, cand2))
        cur, Dcur, ccur = (pts[-1] if len(free) == 1 else pts[0])
        grow = 0
        for it in range(max_iter):
            # least-squares step on the detector vector
            JT = J.T
            delta = mp.lu_solve(JT * J, JT * Dcur)
            delta = [-delta[j] for j in range(len(free))]
            size = max(abs(d) for d in delta)
            if size > step:
                delta = [d * step / size for d in delta]
            new = list(cur)
            for j, i in enumerate(free):
                new[i] = new[i] + delta[j]
            try:
                _, cnew, Dnew = evaluate(new, ccur.coefficients, dset)
            except Exception as exc:
                raise RefinementDiverged(f"solve failed at iteration {it}: {exc}") from exc
            # Broyden update (the 1-D case is exactly the secant method)
            dx = mp.matrix(delta)
            dD = Dnew - Dcur
            denom = (dx.T * dx)[0]
            if denom:
                J = J + (dD - J * dx) * dx.T / denom
            state.log_step(new, cnew.residual)
            log.info("iteration %d: %s residual %s", it, [mp.nstr(mp.mpf(new[i]), 16) for i in free],
                     mp.nstr(cnew.residual, 3))
            grow = grow + 1 if cnew.residual > ccur.residual else 0
            if grow >= 3:
                raise RefinementDiverged("detector residual increased three times in a row")
            cur, Dcur, ccur = new, Dnew, cnew
            if size < tol:
                break
        else:
            if ccur.residual > threshold:
                raise RefinementDiverged(f"no convergence in {max_iter} iterations "
                                         f"(residual {mp.nstr(ccur.residual, 3)})")
        if ccur.residual > threshold * 1e3:
            raise RefinementDiverged(f"converged to residual {mp.nstr(ccur.residual, 3)} above threshold")
        pt = point_from_landscape(gtype, cur)
        digits = _coefficient_digits(pt, ccur, ctx, system_kw)
        L = LPoint(pt, dict(ccur.coefficients), digits=digits, provenance="search")
        return L, state


def _coefficient_digits(point, cand, ctx, system_kw):
    """Digits per coefficient: agreement with a re-solve on a disjoint equation set."""
    kw = dict(system_kw)
    kw["test_functions"] = FRESH_TEST_PARAMETERS
    kw["eval_points"] = FRESH_HEIGHTS
    cap = ctx.working_digits - 12
    try:
        sys_ = assemble_system(point, ctx=ctx, start=cand.coefficients, **kw)
        other = solve_system(sys_, starts=[cand.coefficients], n_random=0)[0]
    except (SingularSystemError, NoConvergence):
        return {p: 0 for p in cand.coefficients}
    out = {}
    for p, v in cand.coefficients.items():
        diff = abs(other.coefficients[p] - v)
        out[p] = cap if diff == 0 else max(0, min(cap, int(mp.floor(-mp.log10(diff)))))
    return out


@dataclass
class ScanResult:
    cells: list  # (coordinates, residual)
    candidates: list  # (SpectralPoint, residual)
    exhausted: bool


def scan_region(gtype, bounds, grid_step, ctx: PrecisionContext | None = None, budget: int = 400,
                threshold=1e-3, system_kw=None) -> ScanResult:
    """Residual scores on a grid over ``bounds`` (one (lo, hi) per landscape coordinate;
    a degenerate (v, v) pins a coordinate).  Local minima below ``threshold`` are
    returned as seeds for ``refine_parameters``."""
    ctx = ctx or PrecisionContext(working_digits=40)
    system_kw = dict(system_kw or {})
    axes = []
    for lo, hi in bounds:
        if hi == lo:
            # pinned; keeps exact values such as kappa = 5/2
            axes.append([lo])
            continue
        lo, hi = _num(lo), _num(hi)
        if hi < lo:
            return ScanResult([], [], False)
        n = int(mp.floor((hi - lo) / grid_step + mp.mpf("1e-9")))
        axes.append([lo + k * mp.mpf(grid_step) for k in range(n + 1)])
    cells, exhausted = {}, False
    grid = list(itertools.product(*[range(len(a)) for a in axes]))
    for idx in grid:
        if len(cells) >= budget:
            exhausted = True
            break
        c = [axes[k][i] for k, i in enumerate(idx)]
        try:
            _, cand = _evaluate_point(point_from_landscape(gtype, c), ctx, system_kw, None)
            cells[idx] = (c, cand.residual)
        except (NoConvergence, SingularSystemError, ValueError) as exc:
            log.info("cell %s skipped: %s", idx, exc)
            cells[idx] = (c, mp.inf)
    out = []
    for idx, (c, r) in cells.items():
        if r > threshold:
            continue
        neigh = []
        for k in range(len(idx)):
            for dk in (-1, 1):
                j = list(idx)
                j[k] += dk
                if tuple(j) in cells:
                    neigh.append(cells[tuple(j)][1])
        if all(r <= v for v in neigh):
            out.append((point_from_landscape(gtype, c), r))
    out.sort(key=lambda x: x[1])
    return ScanResult(list(cells.values()), out, exhausted)


@dataclass
class VerificationReport:
    passed: bool
    residual: object
    stored_residual: object
    digits: dict
    solved: dict


def verify_lpoint(L: LPoint, ctx: PrecisionContext | None = None, threshold=1e-8, system_kw=None,
                  heights=FRESH_HEIGHTS, params=FRESH_TEST_PARAMETERS) -> VerificationReport:
    """Re-solve with test functions not used by the search and compare.

    Passes when the stored coefficients satisfy every fresh equation to
    ``threshold`` (row-normalized RMS); with no stored coefficients the fresh
    solution's own detectors must meet the threshold.
    """
    ctx = ctx or PrecisionContext()
    system_kw = dict(system_kw or {})
    system_kw.setdefault("test_functions", params)
    system_kw.setdefault("eval_points", heights)
    with mp.workdps(ctx.working_digits + 10):
        start = dict(L.coefficients) if L.coefficients else None
        sys_ = assemble_system(L.point, L.conductor, ctx=ctx, sign=L.sign, start=start, **system_kw)
        cands = solve_system(sys_, starts=[start] if start else None, n_random=0 if start else 6)
        best = cands[0]
        digits, stored_res = {}, None
        if L.coefficients:
            vals, _ = sys_.evaluate(sys_.from_primes(L.coefficients))
            norm = [v / e.norm for v, e in zip(vals, sys_.equations)]
            stored_res = mp.sqrt(mp.fsum(v ** 2 for v in norm) / len(norm))
            for p in sys_.unknown_primes:
                if p in L.coefficients:
                    diff = abs(best.coefficients[p] - L.coefficients[p])
                    digits[p] = float(-mp.log10(diff)) if diff else float(ctx.working_digits)
            passed = stored_res < threshold and best.residual < threshold
        else:
            passed = best.residual < threshold
        return VerificationReport(bool(passed), best.residual, stored_res, digits, best.coefficients)
