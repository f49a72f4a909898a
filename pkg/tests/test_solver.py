from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from lspace.afe import LPoint, PrecisionContext
from lspace.modular import primes_up_to, ramanujan_tau
from lspace.solver import (
    NoConvergence,
    SearchState,
    SingularSystemError,
    assemble_system,
    detector_residual,
    detector_vector,
    refine_parameters,
    scan_region,
    solve_system,
    verify_lpoint,
)
from lspace.spectra import SpectralPoint, point_from_landscape

from oracles import R0C5_KAPPA, R0C5_LAMBDA_REFINED, R0C5_REFINED, SYM2_DELTA_B2

SYM2 = SpectralPoint((1,), (0,), ((Fraction(11), 0),))


def _sym2_coefficients(bound=400):
    return {p: mp.mpf(ramanujan_tau(p)) ** 2 / mp.mpf(p) ** 11 - 1 for p in primes_up_to(bound)}


def _sym2_system(digits, tail_bound=1e-30):
    # call inside a precision scope of at least digits + 10
    b = _sym2_coefficients()
    known = {p: v for p, v in b.items() if p > 13}
    ctx = PrecisionContext(working_digits=digits, truncation_cutoff=None, tail_bound=tail_bound)
    truth = {p: v for p, v in b.items() if p <= 13}
    return assemble_system(SYM2, ctx=ctx, known=known, self_dual=True, cutoff=None, start=truth), truth


@pytest.fixture(scope="module")
def sym2_system():
    mp.mp.dps = 70
    return _sym2_system(60)


def test_sym2_detectors_vanish_at_truth(sym2_system):
    system, truth = sym2_system
    assert detector_residual(truth, system) < 1e-30
    bumped = {**truth, 2: truth[2] + mp.mpf("1e-6")}
    assert detector_residual(bumped, system) > 1e-12


def test_sym2_solve_from_random_starts(sym2_system):
    system, truth = sym2_system
    best = solve_system(system, n_random=4, rng=np.random.default_rng(1))[0]
    b2 = mp.mpf(SYM2_DELTA_B2.numerator) / SYM2_DELTA_B2.denominator
    assert abs(best.coefficients[2] - b2) < 1e-30
    assert best.residual < 1e-30


def _ladder_error(digits):
    # working digits and the Dirichlet tail bound tightened together
    with mp.workdps(digits + 10):
        system, truth = _sym2_system(digits, 10.0 ** -(digits - 10))
        start = {p: v + mp.mpf("1e-4") for p, v in truth.items()}
        best = solve_system(system, starts=[start], n_random=0)[0]
        return max(abs(best.coefficients[p] - truth[p]) for p in truth)


def test_precision_improves_accuracy():
    e40, e60 = _ladder_error(40), _ladder_error(60)
    assert e40 < 1e-20 and e60 < 1e-40


@pytest.mark.slow
def test_precision_improves_accuracy_to_eighty_digits():
    assert _ladder_error(80) < 1e-60


def test_duplicate_test_functions():
    with pytest.raises(SingularSystemError):
        assemble_system(SYM2, test_functions=(0, "0.3", "0.3", "0.6"))


def test_too_few_equations():
    with pytest.raises(ValueError):
        assemble_system(SYM2, eval_points=(0,), self_dual=True)


def test_sign_required_for_level():
    with pytest.raises(ValueError):
        assemble_system(SYM2, N=2)


def test_detector_vector_signed(r0c5):
    mp.mp.dps = 70
    system = assemble_system(r0c5.point, start=r0c5.coefficients, ctx=PrecisionContext())
    d = detector_vector(dict(r0c5.coefficients), system)
    assert len(d) == len(system.detector_set) >= 3
    assert max(abs(v) for v in d) < 1e-12


def test_no_convergence():
    mp.mp.dps = 70
    system, _ = _sym2_system(40)
    with pytest.raises(NoConvergence):
        solve_system(system, starts=[[mp.mpf(10 ** 30)] * system.n_unknowns], n_random=0)


def test_search_state_log():
    s = SearchState([mp.mpf(0)], None)
    s.log_step([Fraction(5, 2), mp.mpf(1)], mp.mpf("1e-3"))
    s.log_step([Fraction(5, 2), mp.mpf("1.1")], mp.mpf("1e-5"))
    s.log_step([Fraction(5, 2), mp.mpf("1.101")], mp.mpf("1e-7"))
    assert s.history[-1][2] == pytest.approx(2.0)
    assert s.coordinates[1] == mp.mpf("1.101")


def test_verify_stored_point(r0c5):
    mp.mp.dps = 70
    report = verify_lpoint(r0c5, PrecisionContext())
    assert report.passed
    assert report.stored_residual < 1e-12
    assert all(report.digits[p] > 9 for p in (2, 3, 5, 7))


def test_verify_rejects_perturbed_point(r0c5):
    mp.mp.dps = 70
    p = point_from_landscape("r0c5", (R0C5_KAPPA, mp.mpf(R0C5_LAMBDA_REFINED) + mp.mpf("1e-4")))
    bad = LPoint(p, dict(r0c5.coefficients))
    assert not verify_lpoint(bad, PrecisionContext()).passed


def test_scan_region_empty_bounds():
    res = scan_region("r0c5", [(Fraction(5, 2), Fraction(5, 2)), (2, 1)], 0.5)
    assert res.cells == [] and res.candidates == []


@pytest.mark.slow
def test_refine_from_search_start():
    mp.mp.dps = 70
    start = point_from_landscape("r0c5", (R0C5_KAPPA, mp.mpf("16.97")))
    L, state = refine_parameters(start, ctx=PrecisionContext())
    assert abs(-L.point.lambdas[0] - mp.mpf(R0C5_LAMBDA_REFINED)) < 1e-12
    for p, (re, im) in R0C5_REFINED.items():
        assert abs(L.coefficients[p] - mp.mpc(re, im)) < 1e-8
    assert state.residual < 1e-12
