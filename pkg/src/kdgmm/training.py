"""Finite-size empirical-risk minimization mirroring the asymptotic solver.

Both objectives are smooth and strongly convex (ridge > 0). Training is
deterministic and full-batch: an L-BFGS phase does the bulk of the work on
the mean-scaled objective, then damped Newton-CG polish steps (exact
Hessian-vector products, conjugate-gradient inner solves) push the
analytic gradient max-norm of the summed loss below `tol`. Runs that
exhaust the hard iteration cutoff first return converged=False; this is
expected at vanishing ridge below the separability threshold, where the
norm grows until the cutoff bites.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.sparse.linalg import LinearOperator, cg
from scipy.special import expit

from .classifiers import TrainMeta, TrainedClassifier, support_mask, support_size
from .data import Dataset, sample_test_batch
from .losses import smooth_label
from .macrostate import MacroState
from .params import ModelParams

HARD_CUTOFF = 2000
_TEST_CHUNK = 20000
_POLISH_MAX = 40
_CG_MAX = 120
_CG_RTOL = 1e-2


def _train_convex(objective, hessp, x0, tol, max_iter, n_samples):
    """Minimize a mean-scaled convex objective to sum-gradient max-norm tol.

    `objective` returns (loss, grad) of the per-sample mean; the convergence
    criterion applies to the summed loss, i.e. n_samples * max|grad| <= tol.
    """
    gtol_mean = tol / n_samples
    res = minimize(
        objective, x0, jac=True, method="L-BFGS-B",
        options={
            "maxiter": max_iter, "gtol": gtol_mean, "ftol": 0.0,
            "maxfun": 50 * max_iter, "maxcor": 20, "maxls": 60,
        },
    )
    theta = res.x
    iters = int(res.nit)
    f, grad = objective(theta)
    n = theta.shape[0]
    polish = 0
    while (
        n_samples * np.max(np.abs(grad)) > tol
        and iters < max_iter
        and polish < _POLISH_MAX
    ):
        op = LinearOperator((n, n), matvec=lambda v: hessp(theta, v))
        direction, _ = cg(op, -grad, rtol=_CG_RTOL, maxiter=_CG_MAX)
        step = 1.0
        improved = False
        gmax = np.max(np.abs(grad))
        slack = 64.0 * np.finfo(float).eps * max(1.0, abs(f))
        for _ in range(30):
            f_new, grad_new = objective(theta + step * direction)
            # near the float-flat optimum accept on firm gradient decrease
            if f_new < f or (
                f_new <= f + slack and np.max(np.abs(grad_new)) < 0.9 * gmax
            ):
                theta = theta + step * direction
                f, grad = f_new, grad_new
                improved = True
                break
            step *= 0.5
        iters += 1
        polish += 1
        if not improved:
            break  # float-limited optimum
    grad_norm = n_samples * float(np.max(np.abs(grad)))
    return theta, TrainMeta(
        iterations=iters, grad_norm=grad_norm, converged=grad_norm <= tol
    )


def train_teacher(
    data: Dataset,
    lambda_t: float,
    eps_smooth: float = 0.0,
    tol: float = 1e-8,
    max_iter: int = HARD_CUTOFF,
) -> TrainedClassifier:
    """Ridge-regularized logistic regression on (optionally smoothed) labels.

    Minimizes sum_mu H(y_mu, sigma(x_mu.w/sqrt(N) + b)) + lambda_t |w|^2
    over (w, b); the ridge multiplies the squared norm directly (matching
    the solver's convention) and the bias is never penalized.
    """
    if lambda_t < 0 or tol <= 0:
        raise ValueError("lambda_t must be >= 0 and tol > 0")
    x = data.inputs
    n = data.n_dim
    m_samples = data.n_samples
    targets = smooth_label(data.labels, eps_smooth)
    sqrt_n = math.sqrt(n)

    def objective(theta):
        w, b = theta[:-1], theta[-1]
        h = x @ w / sqrt_n + b
        # logit-space cross-entropy, stable for saturated preactivations
        loss = float(np.sum(np.logaddexp(0.0, -h) + (1.0 - targets) * h))
        loss += lambda_t * float(w @ w)
        r = expit(h) - targets
        grad = np.empty_like(theta)
        grad[:-1] = (r @ x) / sqrt_n + 2.0 * lambda_t * w
        grad[-1] = float(np.sum(r))
        return loss / m_samples, grad / m_samples

    def hessp(theta, v):
        w, b = theta[:-1], theta[-1]
        h = x @ w / sqrt_n + b
        p = expit(h)
        dh = p * (1.0 - p) * (x @ v[:-1] / sqrt_n + v[-1])
        out = np.empty_like(v)
        out[:-1] = (dh @ x) / sqrt_n + 2.0 * lambda_t * v[:-1]
        out[-1] = float(np.sum(dh))
        return out / m_samples

    theta, meta = _train_convex(
        objective, hessp, np.zeros(n + 1), tol, max_iter, m_samples
    )
    return TrainedClassifier(
        weights=theta[:-1], bias=float(theta[-1]),
        mask=np.ones(n, dtype=bool), meta=meta,
    )


def train_student_kd(
    data: Dataset,
    teacher: TrainedClassifier,
    params: ModelParams,
    tol: float = 1e-8,
    max_iter: int = HARD_CUTOFF,
) -> TrainedClassifier:
    """Sparse student trained on the mixed ground-truth/teacher loss.

    Only the first floor(eta N) coordinates are trainable; the rest stay
    exactly zero (ridge lambda_s |w|^2 on the trainable block). The
    teacher's preactivations on the training inputs are fixed targets;
    temperature tempers the full preactivation (bias included) inside the
    teacher-matching term.
    """
    if teacher.n_dim != data.n_dim:
        raise ValueError("teacher dimension does not match the dataset")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    n = data.n_dim
    m_samples = data.n_samples
    k = support_size(n, params.eta)
    xa = data.inputs[:, :k]
    sqrt_n = math.sqrt(n)
    chi, temp, lam = params.chi, params.temp, params.lambda_s
    targets = smooth_label(data.labels, params.eps_smooth)
    soft = expit(teacher.preactivations(data.inputs) / temp)

    def objective(theta):
        w, b = theta[:-1], theta[-1]
        h = xa @ w / sqrt_n + b
        ht = h / temp
        loss = (1.0 - chi) * np.sum(np.logaddexp(0.0, -h) + (1.0 - targets) * h)
        loss += chi * np.sum(np.logaddexp(0.0, -ht) + (1.0 - soft) * ht)
        loss = float(loss) + lam * float(w @ w)
        r = (1.0 - chi) * (expit(h) - targets) + (chi / temp) * (expit(ht) - soft)
        grad = np.empty_like(theta)
        grad[:-1] = (r @ xa) / sqrt_n + 2.0 * lam * w
        grad[-1] = float(np.sum(r))
        return loss / m_samples, grad / m_samples

    def hessp(theta, v):
        w, b = theta[:-1], theta[-1]
        h = xa @ w / sqrt_n + b
        p1 = expit(h)
        pt = expit(h / temp)
        curv = (1.0 - chi) * p1 * (1.0 - p1) + (chi / temp**2) * pt * (1.0 - pt)
        dh = curv * (xa @ v[:-1] / sqrt_n + v[-1])
        out = np.empty_like(v)
        out[:-1] = (dh @ xa) / sqrt_n + 2.0 * lam * v[:-1]
        out[-1] = float(np.sum(dh))
        return out / m_samples

    theta, meta = _train_convex(
        objective, hessp, np.zeros(k + 1), tol, max_iter, m_samples
    )
    weights = np.zeros(n)
    weights[:k] = theta[:-1]
    return TrainedClassifier(
        weights=weights, bias=float(theta[-1]),
        mask=support_mask(n, params.eta), meta=meta,
    )


def measure_macro_state(
    clf: TrainedClassifier,
    data: Dataset,
    other: TrainedClassifier | None = None,
) -> MacroState:
    """Overlaps of a trained classifier with the signal (and a second model)."""
    if clf.n_dim != data.n_dim:
        raise ValueError("classifier dimension does not match the dataset")
    n = data.n_dim
    w = clf.weights
    s = None
    if other is not None:
        if other.n_dim != n:
            raise ValueError("classifier dimensions do not match")
        s = float(w @ other.weights) / n
    return MacroState(
        m=float(w @ data.signal) / n,
        q=float(w @ w) / n,
        b=clf.bias,
        s=s,
    )


def empirical_test_error(
    clf: TrainedClassifier,
    params: ModelParams,
    n_test: int,
    seed: int,
    signal: np.ndarray,
) -> tuple[float, float]:
    """Misclassification rate on fresh mixture samples, with binomial stderr.

    Fresh rows share the training signal; they are generated in fixed-size
    chunks so memory stays bounded and results stay seed-deterministic.
    """
    if n_test < 1:
        raise ValueError("n_test must be >= 1")
    rng = np.random.default_rng(seed)
    wrong = 0
    remaining = n_test
    while remaining > 0:
        batch = min(_TEST_CHUNK, remaining)
        inputs, labels = sample_test_batch(
            signal, batch, params.delta, params.rho, rng
        )
        wrong += int(np.sum(clf.predict(inputs) != labels))
        remaining -= batch
    err = wrong / n_test
    return err, math.sqrt(max(err * (1.0 - err), 0.0) / n_test)


def empirical_test_errors_paired(
    classifiers: list[TrainedClassifier],
    params: ModelParams,
    n_test: int,
    seed: int,
    signal: np.ndarray,
) -> list[tuple[float, float]]:
    """Test errors of several classifiers on one shared fresh sample stream.

    One float32 test stream per call keeps sweep cost linear in the number
    of grid points rather than classifiers.
    """
    rng = np.random.default_rng(seed)
    wrong = [0] * len(classifiers)
    remaining = n_test
    while remaining > 0:
        batch = min(_TEST_CHUNK, remaining)
        inputs, labels = sample_test_batch(
            signal, batch, params.delta, params.rho, rng, dtype=np.float32
        )
        for i, clf in enumerate(classifiers):
            wrong[i] += int(np.sum(clf.predict(inputs) != labels))
        remaining -= batch
    out = []
    for w in wrong:
        err = w / n_test
        out.append((err, math.sqrt(max(err * (1.0 - err), 0.0) / n_test)))
    return out


@dataclass(frozen=True)
class TrainReport:
    per_pattern_loss: float
    weight_norm: float
    output_mse: float
    preact_mse: float


def diagnostics(
    teacher: TrainedClassifier,
    student: TrainedClassifier,
    data: Dataset,
    params: ModelParams | None = None,
) -> TrainReport:
    """Training-set observables of a teacher/student pair.

    per_pattern_loss is the student's mean training loss when `params` is
    given; without params it falls back to the pure teacher-matching
    cross-entropy (the two coincide at chi=1, T=1).
    """
    if teacher.n_dim != data.n_dim or student.n_dim != data.n_dim:
        raise ValueError("classifier dimensions do not match the dataset")
    ht = teacher.preactivations(data.inputs)
    h = student.preactivations(data.inputs)
    if params is None:
        loss = np.logaddexp(0.0, -h) + (1.0 - expit(ht)) * h
    else:
        chi, temp = params.chi, params.temp
        targets = smooth_label(data.labels, params.eps_smooth)
        soft = expit(ht / temp)
        hs = h / temp
        loss = (1.0 - chi) * (np.logaddexp(0.0, -h) + (1.0 - targets) * h)
        loss = loss + chi * (np.logaddexp(0.0, -hs) + (1.0 - soft) * hs)
    return TrainReport(
        per_pattern_loss=float(np.mean(loss)),
        weight_norm=float(student.weights @ student.weights) / data.n_dim,
        output_mse=float(np.mean((expit(ht) - expit(h)) ** 2)),
        preact_mse=float(np.mean((ht - h) ** 2)),
    )
