import numpy as np
import pytest

from kdgmm import (
    ModelParams,
    SolverConfig,
    SolverDivergence,
    SolverError,
    bayes_optimal_error,
    free_entropy,
    solve_teacher,
)
from kdgmm.solver import teacher_free_entropy_at

from helpers import numeric_gradient

CFG = SolverConfig(tol=1e-12)


def test_balanced_bias_is_zero():
    res = solve_teacher(ModelParams(alpha=2.0, delta=1.0, rho=0.5, lambda_t=0.3), CFG)
    assert res.b_t == pytest.approx(0.0, abs=1e-10)


def test_strong_ridge_approaches_bayes_in_balanced_case():
    for alpha in (2.0, 4.0):
        p = ModelParams(alpha=alpha, delta=1.0, rho=0.5, lambda_t=1e4)
        res = solve_teacher(p, CFG)
        assert res.b_t == pytest.approx(0.0, abs=1e-10)
        gap = res.gen_error - bayes_optimal_error(alpha, 1.0, 0.5)
        assert 0 <= gap < 5e-3


def test_unbalanced_gap_strictly_positive_at_optimal_ridge():
    # at rho < 0.5 no ridge level reaches the error floor
    lams = (0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 100.0)
    for alpha in (1.0, 3.0, 6.0):
        best = min(
            solve_teacher(
                ModelParams(alpha=alpha, delta=1.0, rho=0.2, lambda_t=lam), CFG
            ).gen_error
            for lam in lams
        )
        assert best > bayes_optimal_error(alpha, 1.0, 0.2) + 1e-3


def test_stationarity_of_converged_fixed_point():
    p = ModelParams(alpha=3.0, delta=1.0, rho=0.2, lambda_t=0.1)
    res = solve_teacher(p, CFG)
    grads = numeric_gradient(lambda s: teacher_free_entropy_at(p, s, CFG),
                             res.as_state())
    assert max(abs(g) for g in grads.values()) < 1e-5


def test_free_entropy_second_order_flatness():
    p = ModelParams(alpha=2.0, delta=1.0, rho=0.3, lambda_t=0.2)
    res = solve_teacher(p, CFG)
    phi0 = free_entropy(p, teacher=res, cfg=CFG)
    state = res.as_state()
    for key in state:
        bumped = dict(state)
        bumped[key] = state[key] + 1e-4
        assert abs(teacher_free_entropy_at(p, bumped, CFG) - phi0) < 5e-8


def test_quadrature_doubling_stability():
    p = ModelParams(alpha=3.0, delta=1.0, rho=0.2, lambda_t=0.1)
    lo = solve_teacher(p, SolverConfig(tol=1e-12, quad_order=60))
    hi = solve_teacher(p, SolverConfig(tol=1e-12, quad_order=120))
    for attr in ("m_t", "q_t", "dq_t", "b_t", "gen_error"):
        assert getattr(lo, attr) == pytest.approx(getattr(hi, attr), abs=1e-6)
    assert abs(lo.phi - hi.phi) < 1e-8


def test_divergence_at_zero_ridge_below_threshold():
    # separable regime, exactly zero ridge: the norm must run away
    p = ModelParams(alpha=0.5, delta=1.0, rho=0.2, lambda_t=0.0)
    with pytest.raises(SolverError):
        solve_teacher(p, SolverConfig(tol=1e-12, max_iters=3000))


def test_warm_start_continuation_consistency():
    p1 = ModelParams(alpha=2.0, delta=1.0, rho=0.2, lambda_t=0.1)
    p2 = ModelParams(alpha=2.2, delta=1.0, rho=0.2, lambda_t=0.1)
    cold = solve_teacher(p2, CFG)
    warm = solve_teacher(p2, CFG, warm=solve_teacher(p1, CFG))
    assert cold.m_t == pytest.approx(warm.m_t, abs=1e-8)
    assert cold.q_t == pytest.approx(warm.q_t, abs=1e-8)
    assert cold.gen_error == pytest.approx(warm.gen_error, abs=1e-9)


def test_continuation_smoothness_along_alpha():
    cfg = SolverConfig(tol=1e-12)
    grid = np.arange(1.0, 3.01, 0.05)
    errs = []
    warm = None
    for alpha in grid:
        res = solve_teacher(
            ModelParams(alpha=float(alpha), delta=1.0, rho=0.2, lambda_t=0.1),
            cfg, warm=warm,
        )
        warm = res
        errs.append(res.gen_error)
    diffs = np.abs(np.diff(errs))
    # no branch jumps: successive changes stay near the local slope scale
    assert np.max(diffs) < 10 * np.median(diffs) + 1e-4
