"""Independent oracles used by the test suite.

Everything here stays deliberately naive (grid search, golden section,
dense-Hessian Newton, central differences) so it cannot share a failure
mode with the code paths under test.
"""
from __future__ import annotations

import math

import numpy as np

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def prox_oracle(loss_of_h, omega, v_scale, lo=-20.0, hi=20.0, grid_step=1e-4):
    """Brute-force maximizer of -u^2/2 - loss(v u + omega).

    Grid search at `grid_step` resolution, then golden-section refinement
    of the best cell. Good to ~1e-10 in u for unimodal objectives.
    """

    def objective(u):
        return -0.5 * u * u - loss_of_h(v_scale * u + omega)

    grid = np.arange(lo, hi + grid_step, grid_step)
    values = -0.5 * grid**2 - loss_of_h(v_scale * grid + omega)
    best = int(np.argmax(values))
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, len(grid) - 1)]
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    for _ in range(80):
        if objective(c) > objective(d):
            b = d
        else:
            a = c
        c = b - _GOLDEN * (b - a)
        d = a + _GOLDEN * (b - a)
    u = 0.5 * (a + b)
    return u, objective(u)


def numeric_gradient(fn, state: dict, step: float = 1e-6) -> dict:
    """Central-difference gradient of fn(state) over every state key.

    The step is capped relative to tiny parameter magnitudes so strictly
    positive quantities are never pushed out of their domain.
    """
    grads = {}
    for key in state:
        value = state[key]
        h = step
        if abs(value) < 1e-3:
            # stiff tiny-scale directions (e.g. conjugates at vanishing
            # ridge): an absolute step would sample third-order curvature
            h = max(1e-9, step * abs(value))
        if value > 0.0:
            h = min(h, value / 2.0)  # stay inside the positive domain
        up = dict(state)
        dn = dict(state)
        up[key] = value + h
        dn[key] = value - h
        grads[key] = (fn(up) - fn(dn)) / (2.0 * h)
    return grads


def newton_reference(loss_grad_hess, x0, tol=1e-12, max_iter=200):
    """Dense-Hessian damped Newton for small strongly convex problems."""
    x = np.asarray(x0, dtype=float).copy()
    for _ in range(max_iter):
        f, g, h = loss_grad_hess(x)
        if np.max(np.abs(g)) <= tol:
            return x
        step = np.linalg.solve(h, -g)
        t = 1.0
        for _ in range(60):
            f_new, _, _ = loss_grad_hess(x + t * step)
            if f_new <= f:
                break
            t *= 0.5
        x = x + t * step
    return x


def logistic_objective_dense(inputs, targets, lam, theta):
    """(loss, grad, hess) of ridge logistic regression, naive dense form."""
    n = inputs.shape[1]
    w, b = theta[:-1], theta[-1]
    h = inputs @ w / math.sqrt(n) + b
    p = 1.0 / (1.0 + np.exp(-h))
    eps = 1e-300
    loss = float(
        -np.sum(targets * np.log(p + eps) + (1.0 - targets) * np.log(1.0 - p + eps))
    ) + lam * float(w @ w)
    r = p - targets
    xs = inputs / math.sqrt(n)
    grad = np.concatenate([r @ xs + 2.0 * lam * w, [np.sum(r)]])
    d = p * (1.0 - p)
    hess = np.zeros((n + 1, n + 1))
    hess[:n, :n] = xs.T * d @ xs + 2.0 * lam * np.eye(n)
    hess[:n, n] = hess[n, :n] = d @ xs
    hess[n, n] = np.sum(d)
    return loss, grad, hess


def kd_objective_dense(inputs, targets, soft, chi, temp, lam, k, theta):
    """(loss, grad, hess) of the masked distillation objective, naive form."""
    n = inputs.shape[1]
    xa = inputs[:, :k] / math.sqrt(n)
    w, b = theta[:-1], theta[-1]
    h = xa @ w + b
    p1 = 1.0 / (1.0 + np.exp(-h))
    pt = 1.0 / (1.0 + np.exp(-h / temp))
    eps = 1e-300

    def ce(t, p):
        return -t * np.log(p + eps) - (1.0 - t) * np.log(1.0 - p + eps)

    loss = float(np.sum((1.0 - chi) * ce(targets, p1) + chi * ce(soft, pt)))
    loss += lam * float(w @ w)
    r = (1.0 - chi) * (p1 - targets) + (chi / temp) * (pt - soft)
    grad = np.concatenate([r @ xa + 2.0 * lam * w, [np.sum(r)]])
    d = (1.0 - chi) * p1 * (1.0 - p1) + (chi / temp**2) * pt * (1.0 - pt)
    hess = np.zeros((k + 1, k + 1))
    hess[:k, :k] = xa.T * d @ xa + 2.0 * lam * np.eye(k)
    hess[:k, k] = hess[k, :k] = d @ xa
    hess[k, k] = np.sum(d)
    return loss, grad, hess
