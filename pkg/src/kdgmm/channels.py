"""Energetic channels of the zero-temperature fixed-point equations.

Each channel evaluates Gaussian-quadrature expectations of the local
proximal solutions u* and their couplings to the integration variables.
Conjugate order parameters follow from envelope differentiation of the
channel term g_e = <max_u -u^2/2 - loss(...)>:

    mhat  = alpha <(2y-1) u*> / sqrt(delta dq)
    qhat  = alpha <u*^2> / dq
    dqhat = -alpha delta <u* z> / (sqrt(delta dq) C_z)

plus, for distillation, the teacher couplings

    shat  = alpha <u* ut*> / sqrt(dq dqt)          (response to dS)
    dshat = alpha <u* dh/dS> / sqrt(delta dq)      (response to S)

where C_z is the coefficient of the student-private noise z in the field.
The label average is the exact two-point rho/(1-rho) sum; the bias solves
<u*> = 0 by a Newton iteration with a bisection safeguard (the map is
strictly decreasing in b).
"""
from __future__ import annotations

import math

import numpy as np

from .losses import sigmoid, smooth_label
from .params import ModelParams
from .prox import KDTarget, LogisticTarget, prox_response, prox_solve
from .quadrature import QuadratureGrid

_VAR_FLOOR = 1e-12
_BIAS_TOL = 1e-12
_MAX_BIAS_ITERS = 200


def _bias_root(mean_u_fn, b0: float) -> float:
    """Solve <u*>(b) = 0; mean_u_fn returns (<u*>, d<u*>/db < 0)."""
    b = float(b0)
    f, fp = mean_u_fn(b)
    scale = max(1.0, abs(fp))
    lo, hi = -np.inf, np.inf  # f(lo) > 0 > f(hi)
    for _ in range(_MAX_BIAS_ITERS):
        if abs(f) <= _BIAS_TOL * scale:
            return b
        if f > 0:
            lo = max(lo, b)
        else:
            hi = min(hi, b)
        b_new = b - f / fp
        if not (lo < b_new < hi):
            if math.isinf(lo):
                b_new = min(hi, b) - max(1.0, abs(b))
            elif math.isinf(hi):
                b_new = max(lo, b) + max(1.0, abs(b))
            else:
                b_new = 0.5 * (lo + hi)
        if hi - lo <= 5e-16 * max(1.0, abs(b)):
            return b  # bracket exhausted at float resolution
        b = b_new
        f, fp = mean_u_fn(b)
    raise RuntimeError(f"bias update did not converge: <u*>={f:.3e} at b={b:.6g}")


class TeacherChannel:
    """Plain regularized-logistic channel (full-support classifier)."""

    def __init__(self, params: ModelParams, grid: QuadratureGrid):
        self.params = params
        self.grid = grid
        self.z = grid.nodes[None, :]                      # (1, K)
        y = np.array([1.0, 0.0])
        self.spins = (2.0 * y - 1.0)[:, None]             # (2, 1)
        self.target = LogisticTarget(smooth_label(y, params.eps_smooth)[:, None])
        p_y = np.array([params.rho, 1.0 - params.rho])
        self.w = p_y[:, None] * grid.weights[None, :]     # (2, K)
        self._warm = None

    def _expect(self, arr):
        return float(np.sum(arr * self.w))

    def _solve(self, m, q, dq, b):
        delta = self.params.delta
        omega = math.sqrt(delta * q) * self.z + self.spins * m + b
        v = math.sqrt(delta * dq)
        u, curv = prox_solve(self.target, omega, v, u0=self._warm)
        self._warm = u
        return u, curv, omega, v

    def solve_bias(self, m, q, dq, b0) -> float:
        def mean_u(b):
            u, curv, _, v = self._solve(m, q, dq, b)
            return self._expect(u), self._expect(prox_response(curv, v))

        return _bias_root(mean_u, b0)

    def moments(self, m, q, dq, b) -> dict:
        alpha, delta = self.params.alpha, self.params.delta
        u, _, _, v = self._solve(m, q, dq, b)
        cz = math.sqrt(delta * q)
        return {
            "mhat": alpha * self._expect(self.spins * u) / v,
            "qhat": alpha * self._expect(u * u) / dq,
            "dqhat": -alpha * delta * self._expect(u * self.z) / (v * cz),
        }

    def energetic(self, m, q, dq, b) -> float:
        u, _, omega, v = self._solve(m, q, dq, b)
        return self._expect(-0.5 * u * u - self.target.value(v * u + omega))


class KDChannel:
    """Distillation channel: teacher inner problem nested in the student's.

    Teacher order parameters are fixed inputs; the inner proximal solutions
    ut*(y, zt) and the resulting teacher preactivations are precomputed once.
    Student expectations run over the (z, zt) tensor-product grid with
    axis order (label, zt, z).
    """

    def __init__(self, params: ModelParams, teacher_state: dict,
                 grid: QuadratureGrid):
        self.params = params
        self.grid = grid
        delta = params.delta
        mt, qt, dqt, bt = (teacher_state[k] for k in ("m", "q", "dq", "b"))
        if not (qt > 0 and dqt > 0):
            raise ValueError("teacher state must have q, dq > 0")
        self.qt, self.dqt = qt, dqt

        y = np.array([1.0, 0.0])
        self.spins = (2.0 * y - 1.0)[:, None, None]          # (2,1,1)
        targets = smooth_label(y, params.eps_smooth)
        p_y = np.array([params.rho, 1.0 - params.rho])
        w = grid.weights
        self.w = p_y[:, None, None] * w[None, :, None] * w[None, None, :]
        self.zt = grid.nodes[None, :, None]                  # (1,K,1)
        self.z = grid.nodes[None, None, :]                   # (1,1,K)

        # inner teacher solve on the (y, zt) slice
        vt = math.sqrt(delta * dqt)
        omega_t = (
            math.sqrt(delta * qt) * grid.nodes[None, :]
            + (2.0 * y - 1.0)[:, None] * mt
            + bt
        )
        ut, _ = prox_solve(LogisticTarget(targets[:, None]), omega_t, vt)
        self.ut = ut[:, :, None]                             # (2,K,1)
        self.ht = (vt * ut + omega_t)[:, :, None]            # teacher preactivation
        self.target = KDTarget(
            targets[:, None, None], sigmoid(self.ht, params.temp),
            params.chi, params.temp,
        )
        self._warm = None

    def _expect(self, arr):
        return float(np.sum(arr * self.w))

    def _coefs(self, q, s):
        delta = self.params.delta
        cz = math.sqrt(delta * max(q - s * s / self.qt, _VAR_FLOOR))
        czt = math.sqrt(delta) * s / math.sqrt(self.qt)
        return cz, czt

    def _solve(self, m, q, dq, s, ds, b):
        delta = self.params.delta
        cz, czt = self._coefs(q, s)
        cut = math.sqrt(delta) * ds / math.sqrt(self.dqt)
        omega = cz * self.z + czt * self.zt + cut * self.ut + self.spins * m + b
        v = math.sqrt(delta * dq)
        u, curv = prox_solve(self.target, omega, v, u0=self._warm)
        self._warm = u
        return u, curv, omega, v

    def solve_bias(self, m, q, dq, s, ds, b0) -> float:
        def mean_u(b):
            u, curv, _, v = self._solve(m, q, dq, s, ds, b)
            return self._expect(u), self._expect(prox_response(curv, v))

        return _bias_root(mean_u, b0)

    def moments(self, m, q, dq, s, ds, b) -> dict:
        alpha, delta = self.params.alpha, self.params.delta
        u, _, _, v = self._solve(m, q, dq, s, ds, b)
        cz, _ = self._coefs(q, s)
        uz = self._expect(u * self.z)
        uzt = self._expect(u * self.zt)
        return {
            "mhat": alpha * self._expect(self.spins * u) / v,
            "qhat": alpha * self._expect(u * u) / dq,
            "dqhat": -alpha * delta * uz / (v * cz),
            "shat": alpha * self._expect(u * self.ut) / math.sqrt(dq * self.dqt),
            "dshat": alpha
            * (-delta * s / (self.qt * cz) * uz + math.sqrt(delta / self.qt) * uzt)
            / v,
        }

    def energetic(self, m, q, dq, s, ds, b) -> float:
        u, _, omega, v = self._solve(m, q, dq, s, ds, b)
        return self._expect(-0.5 * u * u - self.target.value(v * u + omega))

    def diagnostics(self, m, q, dq, s, ds, b) -> dict:
        """Training-set observables: mean loss, output MSE, preactivation MSE."""
        u, _, omega, v = self._solve(m, q, dq, s, ds, b)
        h = v * u + omega
        return {
            "train_loss": self._expect(self.target.value(h)),
            "output_mse": self._expect((sigmoid(self.ht) - sigmoid(h)) ** 2),
            "preact_mse": self._expect((self.ht - h) ** 2),
        }


class BOChannel:
    """Distillation from the noisy-signal optimal teacher.

    The teacher side is analytic: field (2y-1) + bt + sqrt(delta * qt_eff) zt
    with qt_eff = 1 + delta/alpha under the default "plus" variant and the
    log-odds bias at that norm. The "minus" variant (1 - delta/alpha) exists
    only to document that it fails to reproduce the optimal teacher error.
    The s order parameter is the overlap with the teacher's noise component;
    the physical teacher-student overlap is m + sqrt(delta/alpha) s.
    """

    def __init__(self, params: ModelParams, grid: QuadratureGrid,
                 variant: str = "plus"):
        if variant not in ("plus", "minus"):
            raise ValueError(f"unknown variant {variant!r}")
        self.params = params
        self.grid = grid
        self.variant = variant
        alpha, delta, rho = params.alpha, params.delta, params.rho
        sign = 1.0 if variant == "plus" else -1.0
        qt_eff = 1.0 + sign * delta / alpha
        if not qt_eff > 0:
            raise ValueError(
                f"teacher field variance delta*(1 {'+' if sign > 0 else '-'} "
                f"delta/alpha) not positive at alpha={alpha}, delta={delta}"
            )
        self.bt = 0.5 * delta * qt_eff * math.log(rho / (1.0 - rho))
        self.v_big = 1.0 + delta / alpha  # teacher norm entering the covariance

        y = np.array([1.0, 0.0])
        self.spins = (2.0 * y - 1.0)[:, None, None]
        targets = smooth_label(y, params.eps_smooth)
        p_y = np.array([params.rho, 1.0 - params.rho])
        w = grid.weights
        self.w = p_y[:, None, None] * w[None, :, None] * w[None, None, :]
        self.zt = grid.nodes[None, :, None]
        self.z = grid.nodes[None, None, :]
        self.ht = (
            self.spins + self.bt + math.sqrt(delta * qt_eff) * self.zt
        ) * np.ones_like(self.z)
        self.target = KDTarget(
            targets[:, None, None], sigmoid(self.ht, params.temp),
            params.chi, params.temp,
        )
        self._warm = None

    def _expect(self, arr):
        return float(np.sum(arr * self.w))

    def _coefs(self, m, q, s):
        delta = self.params.delta
        p_eff = m + math.sqrt(delta / self.params.alpha) * s
        cz = math.sqrt(delta * max(q - p_eff**2 / self.v_big, _VAR_FLOOR))
        czt = math.sqrt(delta / self.v_big) * p_eff
        return p_eff, cz, czt

    def _solve(self, m, q, dq, s, b):
        delta = self.params.delta
        _, cz, czt = self._coefs(m, q, s)
        omega = cz * self.z + czt * self.zt + self.spins * m + b
        v = math.sqrt(delta * dq)
        u, curv = prox_solve(self.target, omega, v, u0=self._warm)
        self._warm = u
        return u, curv, omega, v

    def solve_bias(self, m, q, dq, s, b0) -> float:
        def mean_u(b):
            u, curv, _, v = self._solve(m, q, dq, s, b)
            return self._expect(u), self._expect(prox_response(curv, v))

        return _bias_root(mean_u, b0)

    def moments(self, m, q, dq, s, b) -> dict:
        alpha, delta = self.params.alpha, self.params.delta
        u, _, _, v = self._solve(m, q, dq, s, b)
        p_eff, cz, _ = self._coefs(m, q, s)
        # d omega / d p_eff, common to the m and s responses
        dfield = (
            -delta * p_eff / (self.v_big * cz) * self.z
            + math.sqrt(delta / self.v_big) * self.zt
        )
        u_dfield = self._expect(u * dfield)
        return {
            "mhat": alpha * (self._expect(self.spins * u) + u_dfield) / v,
            "qhat": alpha * self._expect(u * u) / dq,
            "dqhat": -alpha * delta * self._expect(u * self.z) / (v * cz),
            "shat": alpha * math.sqrt(delta / alpha) * u_dfield / v,
        }

    def energetic(self, m, q, dq, s, b) -> float:
        u, _, omega, v = self._solve(m, q, dq, s, b)
        return self._expect(-0.5 * u * u - self.target.value(v * u + omega))

    def diagnostics(self, m, q, dq, s, b) -> dict:
        u, _, omega, v = self._solve(m, q, dq, s, b)
        h = v * u + omega
        return {
            "train_loss": self._expect(self.target.value(h)),
            "output_mse": self._expect((sigmoid(self.ht) - sigmoid(h)) ** 2),
            "preact_mse": self._expect((self.ht - h) ** 2),
        }
