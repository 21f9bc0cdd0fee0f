"""One-dimensional proximal problems forming the solver's energetic channel.

Each channel node solves

    u* = argmax_u  -u^2/2 - L(v u + omega)

for a convex loss L, i.e. the Moreau-envelope map of L along the local
noise direction. The objective is strictly concave (quadratic plus concave),
so the stationarity condition g(u) = -u - v L'(v u + omega) = 0 has a
unique root. Newton steps are accepted only when they stay inside the
current bracket and at least halve the previous step (the usual safeguard
against two-cycles); otherwise the element bisects, so the bracket
provably collapses. The initial bracket |u*| <= v * sup|L'| + 1 always
contains the root.

At distillation temperature T = 1 the mixed loss collapses onto a plain
logistic loss with the blended target (1 - chi) y + chi sigma(p), which
the solver exploits: one sigmoid evaluation per Newton step.
"""
from __future__ import annotations

import numpy as np
from scipy.special import expit

from .losses import kd_loss_stable, logistic_loss_stable, sigmoid
from .params import ModelParams

_GRAD_TOL = 1e-12
_MAX_NEWTON = 200


class ProxError(RuntimeError):
    """Safeguarded Newton failed to converge; carries the offending inputs."""


class LogisticTarget:
    """grad/curv of H(target, sigma(h / temp)) in one sigmoid evaluation."""

    def __init__(self, target, temp: float = 1.0):
        self.target = np.asarray(target, dtype=float)
        self.temp = temp
        self.grad_bound = float(np.max(np.maximum(self.target, 1.0 - self.target))) / temp

    def grad_curv(self, h):
        p = expit(h / self.temp)
        return (p - self.target) / self.temp, p * (1.0 - p) / self.temp**2

    def value(self, h):
        return logistic_loss_stable(self.target, h, self.temp)


class KDTarget:
    """grad/curv of the mixed ground-truth / teacher-matching loss."""

    def __init__(self, target, soft_target, chi: float, temp: float):
        self.target = np.asarray(target, dtype=float)
        self.soft = np.asarray(soft_target, dtype=float)
        self.chi = chi
        self.temp = temp
        self.grad_bound = (1.0 - chi) + chi / temp
        # T=1: both terms see the same sigmoid; fold into one blended target
        self._blend = (
            None if temp != 1.0
            else (1.0 - chi) * self.target + chi * self.soft
        )

    def grad_curv(self, h):
        if self._blend is not None:
            p = expit(h)
            return p - self._blend, p * (1.0 - p)
        chi, temp = self.chi, self.temp
        p1 = expit(h)
        pt = expit(h / temp)
        grad = (1.0 - chi) * (p1 - self.target) + chi / temp * (pt - self.soft)
        curv = (1.0 - chi) * p1 * (1.0 - p1) + chi / temp**2 * pt * (1.0 - pt)
        return grad, curv

    def value(self, h):
        return kd_loss_stable(self.target, self.soft, h, self.chi, self.temp)


def _newton_bisect(target, v, omega, u0=None):
    """Root of g(u) = -u - v L'(v u + omega); returns (u*, curv at optimum)."""
    omega = np.asarray(omega, dtype=float)
    hi0 = v * target.grad_bound + 1.0
    lo = np.full_like(omega, -hi0)
    hi = np.full_like(omega, hi0)
    u = np.zeros_like(omega) if u0 is None else np.clip(u0, lo, hi).copy()
    dx_old = np.full_like(omega, 2.0 * hi0)

    for _ in range(_MAX_NEWTON):
        grad, curv = target.grad_curv(v * u + omega)
        g = -u - v * grad
        gp = 1.0 + v * v * curv  # = -dg/du > 0
        tol = _GRAD_TOL * np.maximum(1.0, np.abs(u))
        done = (np.abs(g) <= tol) | (hi - lo <= 1e-15 * np.maximum(1.0, np.abs(u)))
        if np.all(done):
            return u, curv
        lo = np.where(g > 0, u, lo)  # g > 0: root lies above u
        hi = np.where(g < 0, u, hi)
        newton_u = u + g / gp
        take_newton = (
            (newton_u > lo) & (newton_u < hi) & (2.0 * np.abs(g) <= dx_old * gp)
        )
        u_new = np.where(take_newton, newton_u, 0.5 * (lo + hi))
        u_new = np.where(done, u, u_new)
        dx_old = np.where(done, dx_old, np.abs(u_new - u))
        u = u_new

    grad, _ = target.grad_curv(v * u + omega)
    g = -u - v * grad
    worst = int(np.argmax(np.abs(g)))
    raise ProxError(
        "prox solve did not converge: "
        f"|g|={np.abs(g).flat[worst]:.3e} at omega={omega.flat[worst]:.6g}, v={v:.6g}"
    )


def prox_logistic(y: float, omega: float, v_scale: float, temp: float = 1.0):
    """Maximize -u^2/2 - H(y, sigma((v u + omega)/temp)); returns (u*, value)."""
    if not v_scale > 0:
        raise ValueError(f"v_scale must be > 0, got {v_scale}")
    target = LogisticTarget(y, temp)
    u, _ = _newton_bisect(target, v_scale, np.asarray([omega], dtype=float))
    value = -0.5 * u**2 - target.value(v_scale * u + omega)
    return float(u[0]), float(value[0])


def prox_kd(
    y: float,
    teacher_preact: float,
    omega: float,
    v_scale: float,
    params: ModelParams,
):
    """Maximize -u^2/2 - l'(y, teacher_preact, v u + omega); returns (u*, value)."""
    if not v_scale > 0:
        raise ValueError(f"v_scale must be > 0, got {v_scale}")
    target = KDTarget(
        y, sigmoid(teacher_preact, params.temp), params.chi, params.temp
    )
    u, _ = _newton_bisect(target, v_scale, np.asarray([omega], dtype=float))
    value = -0.5 * u**2 - target.value(v_scale * u + omega)
    return float(u[0]), float(value[0])


def prox_solve(target, omega, v_scale, u0=None):
    """Array prox solve; returns (u*, curvature at the optimum)."""
    return _newton_bisect(target, v_scale, omega, u0=u0)


def prox_response(curv, v_scale):
    """d u*/d omega = -v L''(h*) / (1 + v^2 L''(h*)), given L'' at the optimum."""
    return -v_scale * curv / (1.0 + v_scale**2 * curv)
