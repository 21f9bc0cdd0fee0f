import numpy as np
import pytest

from kdgmm import (
    ModelParams,
    SolverConfig,
    free_entropy,
    solve_kd,
    solve_teacher,
)
from kdgmm.solver import kd_free_entropy_at

from helpers import numeric_gradient

CFG = SolverConfig(tol=1e-12)


def _solve_pair(params, cfg=CFG, warm=None):
    teacher = solve_teacher(params, cfg)
    return teacher, solve_kd(params, teacher, cfg, warm=warm)


def test_chi_zero_reduction_maps_to_rescaled_plain_problem():
    # {eta, alpha, delta, lam} == {1, alpha/eta, delta/eta, lam/eta^2} with
    # (m, q, dq, b) -> (m, q/eta, dq/eta, b) on the full-support side
    for alpha, delta, eta, lam in [
        (3.0, 1.0, 0.5, 0.1), (2.0, 2.0, 0.25, 0.05), (5.0, 0.5, 0.8, 0.5),
    ]:
        p = ModelParams(alpha=alpha, delta=delta, rho=0.2, eta=eta,
                        lambda_t=0.1, lambda_s=lam, chi=0.0)
        _, student = _solve_pair(p)
        p_eq = ModelParams(alpha=alpha / eta, delta=delta / eta, rho=0.2,
                           lambda_t=lam / eta**2)
        t_eq = solve_teacher(p_eq, CFG)
        assert student.gen_error == pytest.approx(t_eq.gen_error, abs=1e-6)
        assert student.m == pytest.approx(t_eq.m_t, abs=1e-8)
        assert student.q == pytest.approx(t_eq.q_t / eta, abs=1e-7)
        assert student.dq == pytest.approx(t_eq.dq_t / eta, abs=1e-7)
        assert student.b == pytest.approx(t_eq.b_t, abs=1e-8)
        # log-volumes agree after the per-dimension renormalization
        assert student.phi == pytest.approx(eta * t_eq.phi, abs=1e-8)


def test_stationarity_of_converged_fixed_point():
    p = ModelParams(alpha=3.0, delta=1.0, rho=0.2, eta=0.5,
                    lambda_t=0.1, lambda_s=1e-5, chi=1.0)
    teacher, student = _solve_pair(p)
    grads = numeric_gradient(
        lambda s: kd_free_entropy_at(p, teacher, s, CFG), student.as_state()
    )
    assert max(abs(g) for g in grads.values()) < 1e-5


def test_free_entropy_dispatcher_matches_direct_evaluation():
    p = ModelParams(alpha=2.0, delta=1.0, rho=0.3, eta=0.5,
                    lambda_t=0.2, lambda_s=0.1, chi=0.7)
    teacher, student = _solve_pair(p)
    assert free_entropy(p, teacher=teacher, student=student, cfg=CFG) == (
        pytest.approx(student.phi, abs=1e-12)
    )


def test_overlap_cauchy_schwarz():
    p = ModelParams(alpha=4.0, delta=1.0, rho=0.2, eta=0.5,
                    lambda_t=0.1, lambda_s=1e-5, chi=1.0)
    teacher, student = _solve_pair(p)
    assert student.s**2 <= student.q * teacher.q_t + 1e-8


def test_quadrature_doubling_stability():
    p = ModelParams(alpha=3.0, delta=1.0, rho=0.2, eta=0.5,
                    lambda_t=0.1, lambda_s=1e-5, chi=1.0)
    res = {}
    for order in (60, 120):
        cfg = SolverConfig(tol=1e-12, quad_order=order)
        teacher = solve_teacher(p, cfg)
        res[order] = solve_kd(p, teacher, cfg)
    for attr in ("m", "q", "dq", "s", "ds", "b", "gen_error"):
        assert getattr(res[60], attr) == pytest.approx(
            getattr(res[120], attr), abs=1e-6
        )


def test_interpolation_peak_at_support_fraction():
    # regularized teacher, baseline student ridge: error peaks at alpha = eta
    cfg = SolverConfig(tol=1e-10, max_iters=50000)
    errs = {}
    warm = None
    for alpha in (0.40, 0.45, 0.50, 0.55, 0.60):
        p = ModelParams(alpha=alpha, delta=1.0, rho=0.2, eta=0.5,
                        lambda_t=0.1, lambda_s=1e-5, chi=1.0)
        teacher = solve_teacher(p, cfg)
        student = solve_kd(p, teacher, cfg, warm=warm)
        warm = student
        errs[alpha] = student.gen_error
    peak = max(errs, key=errs.get)
    assert peak == 0.50


def test_temperature_softens_the_peak():
    cfg = SolverConfig(tol=1e-10, max_iters=50000)
    errs = []
    for temp in (1.0, 2.0, 4.0):
        p = ModelParams(alpha=0.5, delta=1.0, rho=0.2, eta=0.5,
                        lambda_t=0.15, lambda_s=1e-5, chi=1.0, temp=temp)
        teacher = solve_teacher(p, cfg)
        errs.append(solve_kd(p, teacher, cfg).gen_error)
    assert errs[0] > errs[1] > errs[2]


def test_replica_diagnostics_present_and_sane():
    p = ModelParams(alpha=1.0, delta=1.0, rho=0.2, eta=0.5,
                    lambda_t=0.1, lambda_s=1e-5, chi=1.0)
    _, student = _solve_pair(p)
    d = student.diagnostics
    assert d["train_loss"] >= 0
    assert 0 <= d["output_mse"] <= 1
    assert d["preact_mse"] >= 0
