"""Zero-temperature replica-symmetric fixed-point solvers.

Three solvers share one damped alternating scheme:

  1. bias update: root of <u*> = 0 at the current macro state,
  2. energetic step: conjugate order parameters from quadrature
     expectations of the proximal solutions (see `channels`),
  3. entropic step: closed-form macro parameters from the conjugates.

Ridge convention: the quoted intensity multiplies the squared norm
directly, J = sum_mu loss_mu + lambda |w|^2, matching the finite-size
trainer; the entropic denominators therefore carry 2 lambda. All reported
ridge-intensity landmarks (optimal levels, curve orderings) are tied to
this labeling.

The closed entropic forms are validated against numerical differentiation
of the entropic potential in the test suite; every converged point must
pass a central-difference stationarity check of the free entropy.

Convergence is measured as max_i |new_i - old_i| / (1 + |old_i|) over all
order parameters before damping. Divergence (q beyond 1e12, or loss of
finiteness) raises SolverDivergence: genuine divergences are expected at
vanishing ridge near the separability and interpolation thresholds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channels import BOChannel, KDChannel, TeacherChannel
from .macrostate import _gen_error
from .params import ModelParams
from .quadrature import QuadratureGrid, gauss_hermite

_Q_DIVERGENCE = 1e12
_D_FLOOR = 1e-12


class SolverError(RuntimeError):
    pass


class SolverDivergence(SolverError):
    def __init__(self, message: str, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory or []


class SolverNonConvergence(SolverError):
    def __init__(self, message: str, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory or []


@dataclass(frozen=True)
class SolverConfig:
    damping: float = 0.5          # weight kept on the previous iterate
    tol: float = 1e-10
    max_iters: int = 20000
    quad_order: int = 60
    init: str | dict = "default"

    def __post_init__(self):
        if not 0 <= self.damping < 1:
            raise ValueError(f"damping must be in [0, 1), got {self.damping}")
        if not self.tol > 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")
        if self.quad_order < 20:
            raise ValueError(f"quad_order must be >= 20, got {self.quad_order}")

    def grid(self) -> QuadratureGrid:
        return gauss_hermite(self.quad_order)


@dataclass(frozen=True)
class TeacherOrderParams:
    m_t: float
    q_t: float
    dq_t: float
    b_t: float
    hats: tuple  # (mhat, qhat, dqhat)
    gen_error: float
    phi: float
    converged: bool = True
    iterations: int = 0
    residual: float = 0.0

    def as_state(self) -> dict:
        return {
            "m": self.m_t, "q": self.q_t, "dq": self.dq_t, "b": self.b_t,
            "mhat": self.hats[0], "qhat": self.hats[1], "dqhat": self.hats[2],
        }


@dataclass(frozen=True)
class StudentOrderParams:
    m: float
    q: float
    dq: float
    b: float
    s: float
    ds: float | None
    hats: tuple  # (mhat, qhat, dqhat, shat, dshat-or-None)
    gen_error: float
    phi: float
    kind: str = "kd"              # "kd" or "bo"
    teacher_overlap: float = 0.0  # w.wt/N (for "bo", m + sqrt(delta/alpha) s)
    diagnostics: dict = field(default_factory=dict)
    converged: bool = True
    iterations: int = 0
    residual: float = 0.0

    def as_state(self) -> dict:
        state = {
            "m": self.m, "q": self.q, "dq": self.dq, "s": self.s, "b": self.b,
            "mhat": self.hats[0], "qhat": self.hats[1], "dqhat": self.hats[2],
            "shat": self.hats[3],
        }
        if self.kind == "kd":
            state["ds"] = self.ds
            state["dshat"] = self.hats[4]
        return state


# --- entropic closed forms -------------------------------------------------

def _teacher_entropic(hats: dict, lam: float) -> dict:
    d = max(lam + hats["dqhat"], _D_FLOOR)
    mhat, qhat = hats["mhat"], hats["qhat"]
    return {"m": mhat / d, "q": (mhat**2 + qhat) / d**2, "dq": 1.0 / d}


def _teacher_gs(hats: dict, lam: float) -> float:
    d = max(lam + hats["dqhat"], _D_FLOOR)
    return (hats["mhat"] ** 2 + hats["qhat"]) / (2.0 * d)


def _kd_entropic(hats: dict, lam: float, eta: float, teacher: dict) -> dict:
    d = max(lam + hats["dqhat"], _D_FLOOR)
    dt = max(teacher["lam"] + teacher["dqhat"], _D_FLOOR)
    mhat, qhat = hats["mhat"], hats["qhat"]
    shat, dshat = hats["shat"], hats["dshat"]
    a = mhat + teacher["mhat"] * dshat / dt
    q_num = a**2 + qhat + 2.0 * dshat * shat / dt + teacher["qhat"] * dshat**2 / dt**2
    return {
        "m": eta * a / d,
        "q": eta * q_num / d**2,
        "dq": eta / d,
        "s": eta * (a * teacher["mhat"] + shat + teacher["qhat"] * dshat / dt)
        / (dt * d),
        "ds": eta * dshat / (dt * d),
    }


def _kd_gs(hats: dict, lam: float, teacher: dict) -> float:
    d = max(lam + hats["dqhat"], _D_FLOOR)
    dt = max(teacher["lam"] + teacher["dqhat"], _D_FLOOR)
    a = hats["mhat"] + teacher["mhat"] * hats["dshat"] / dt
    return 0.5 * (
        a**2
        + hats["qhat"]
        + 2.0 * hats["dshat"] * hats["shat"] / dt
        + teacher["qhat"] * hats["dshat"] ** 2 / dt**2
    ) / d


def _bo_entropic(hats: dict, lam: float, eta: float) -> dict:
    d = max(lam + hats["dqhat"], _D_FLOOR)
    mhat, qhat, shat = hats["mhat"], hats["qhat"], hats["shat"]
    return {
        "m": eta * mhat / d,
        "q": eta * (mhat**2 + shat**2 + qhat) / d**2,
        "dq": eta / d,
        "s": eta * shat / d,
    }


def _bo_gs(hats: dict, lam: float) -> float:
    d = max(lam + hats["dqhat"], _D_FLOOR)
    return (hats["mhat"] ** 2 + hats["shat"] ** 2 + hats["qhat"]) / (2.0 * d)


# --- damped fixed-point engine ---------------------------------------------

def _iterate(step, state: dict, cfg: SolverConfig):
    """Damped iteration of state <- step(state) with oscillation control."""
    gamma = cfg.damping
    trajectory = []
    prev_dq_sign = 0.0
    flips = 0
    for iteration in range(1, cfg.max_iters + 1):
        new = step(state)
        residual = max(
            abs(new[k] - state[k]) / (1.0 + abs(state[k])) for k in new
        )
        if (
            not all(math.isfinite(v) for v in new.values())
            or new["q"] > _Q_DIVERGENCE
            or new["dq"] >= _Q_DIVERGENCE
        ):
            raise SolverDivergence(
                f"order parameters diverged at iteration {iteration}: "
                f"q={new['q']:.3e}, dq={new['dq']:.3e}",
                trajectory[-10:],
            )
        dq_change = new["q"] - state["q"]
        sign = math.copysign(1.0, dq_change) if dq_change != 0 else 0.0
        if sign != 0 and sign == -prev_dq_sign:
            flips += 1
            if flips >= 4:
                gamma = min(1.0 - 0.5 * (1.0 - gamma), 0.995)
                flips = 0
        else:
            flips = 0
        prev_dq_sign = sign
        state = {
            k: gamma * state[k] + (1.0 - gamma) * new[k] for k in new
        }
        trajectory.append((iteration, residual, state["q"]))
        if residual < cfg.tol:
            return state, iteration, residual
    raise SolverNonConvergence(
        f"no fixed point after {cfg.max_iters} iterations "
        f"(residual {residual:.3e})",
        trajectory[-10:],
    )


def _default_teacher_state(lam: float) -> dict:
    m, q, dq, b = 0.1, 1.0, 1.0, 0.0
    d = 1.0 / dq
    mhat = m * d
    qhat = max(q * d**2 - mhat**2, 0.1)
    return {
        "m": m, "q": q, "dq": dq, "b": b,
        "mhat": mhat, "qhat": qhat, "dqhat": d - lam,
    }


def _default_student_state(lam: float, eta: float, kind: str) -> dict:
    m, q, dq, b = 0.1, 1.0, 1.0, 0.0
    d = eta / dq
    mhat = m * d / eta
    qhat = max(q * d**2 / eta - mhat**2, 0.1)
    state = {
        "m": m, "q": q, "dq": dq, "s": 0.0, "b": b,
        "mhat": mhat, "qhat": qhat, "dqhat": d - lam, "shat": 0.0,
    }
    if kind == "kd":
        state["ds"] = 0.0
        state["dshat"] = 0.0
    return state


def _resolve_init(cfg: SolverConfig, warm, default: dict) -> dict:
    if warm is not None:
        state = warm.as_state() if hasattr(warm, "as_state") else dict(warm)
        return {**default, **state}
    if isinstance(cfg.init, dict):
        return {**default, **cfg.init}
    return default


# --- public solvers ----------------------------------------------------------

def solve_teacher(
    params: ModelParams, cfg: SolverConfig = SolverConfig(), warm=None
) -> TeacherOrderParams:
    """Fixed point of the plain regularized-logistic problem."""
    grid = cfg.grid()
    channel = TeacherChannel(params, grid)
    lam = 2.0 * params.lambda_t

    def step(state):
        b = channel.solve_bias(state["m"], state["q"], state["dq"], state["b"])
        hats = channel.moments(state["m"], state["q"], state["dq"], b)
        macro = _teacher_entropic(hats, lam)
        return {**macro, "b": b, **hats}

    state0 = _resolve_init(cfg, warm, _default_teacher_state(lam))
    state, iters, residual = _iterate(step, state0, cfg)
    phi = _phi_teacher(params, state, channel)
    return TeacherOrderParams(
        m_t=state["m"], q_t=state["q"], dq_t=state["dq"], b_t=state["b"],
        hats=(state["mhat"], state["qhat"], state["dqhat"]),
        gen_error=_gen_error(state["m"], state["q"], state["b"],
                             params.delta, params.rho),
        phi=phi, converged=True, iterations=iters, residual=residual,
    )


def solve_kd(
    params: ModelParams,
    teacher: TeacherOrderParams,
    cfg: SolverConfig = SolverConfig(),
    warm=None,
) -> StudentOrderParams:
    """Fixed point of the sparse student distilling a trained teacher."""
    grid = cfg.grid()
    channel = KDChannel(params, teacher.as_state(), grid)
    lam, eta = 2.0 * params.lambda_s, params.eta
    t_hats = {
        "mhat": teacher.hats[0], "qhat": teacher.hats[1],
        "dqhat": teacher.hats[2], "lam": 2.0 * params.lambda_t,
    }

    def step(state):
        b = channel.solve_bias(
            state["m"], state["q"], state["dq"], state["s"], state["ds"],
            state["b"],
        )
        hats = channel.moments(
            state["m"], state["q"], state["dq"], state["s"], state["ds"], b
        )
        macro = _kd_entropic(hats, lam, eta, t_hats)
        return {**macro, "b": b, **hats}

    state0 = _resolve_init(cfg, warm, _default_student_state(lam, eta, "kd"))
    state, iters, residual = _iterate(step, state0, cfg)
    phi = _phi_kd(params, t_hats, state, channel)
    diag = channel.diagnostics(
        state["m"], state["q"], state["dq"], state["s"], state["ds"], state["b"]
    )
    return StudentOrderParams(
        m=state["m"], q=state["q"], dq=state["dq"], b=state["b"],
        s=state["s"], ds=state["ds"],
        hats=(state["mhat"], state["qhat"], state["dqhat"], state["shat"],
              state["dshat"]),
        gen_error=_gen_error(state["m"], state["q"], state["b"],
                             params.delta, params.rho),
        phi=phi, kind="kd", teacher_overlap=state["s"], diagnostics=diag,
        converged=True, iterations=iters, residual=residual,
    )


def solve_bo_kd(
    params: ModelParams,
    cfg: SolverConfig = SolverConfig(),
    warm=None,
    variant: str = "plus",
) -> StudentOrderParams:
    """Fixed point of the student distilling the noisy-signal optimal teacher."""
    grid = cfg.grid()
    channel = BOChannel(params, grid, variant=variant)
    lam, eta = 2.0 * params.lambda_s, params.eta

    def step(state):
        b = channel.solve_bias(
            state["m"], state["q"], state["dq"], state["s"], state["b"]
        )
        hats = channel.moments(
            state["m"], state["q"], state["dq"], state["s"], b
        )
        macro = _bo_entropic(hats, lam, eta)
        return {**macro, "b": b, **hats}

    state0 = _resolve_init(cfg, warm, _default_student_state(lam, eta, "bo"))
    state, iters, residual = _iterate(step, state0, cfg)
    phi = _phi_bo(params, state, channel)
    diag = channel.diagnostics(
        state["m"], state["q"], state["dq"], state["s"], state["b"]
    )
    overlap = state["m"] + math.sqrt(params.delta / params.alpha) * state["s"]
    return StudentOrderParams(
        m=state["m"], q=state["q"], dq=state["dq"], b=state["b"],
        s=state["s"], ds=None,
        hats=(state["mhat"], state["qhat"], state["dqhat"], state["shat"], None),
        gen_error=_gen_error(state["m"], state["q"], state["b"],
                             params.delta, params.rho),
        phi=phi, kind="bo", teacher_overlap=overlap, diagnostics=diag,
        converged=True, iterations=iters, residual=residual,
    )


# --- free entropy ------------------------------------------------------------

def _phi_teacher(params, state, channel) -> float:
    interaction = -(
        state["mhat"] * state["m"]
        + 0.5 * (state["qhat"] * state["dq"] - state["dqhat"] * state["q"])
    )
    gs = _teacher_gs(state, 2.0 * params.lambda_t)
    ge = channel.energetic(state["m"], state["q"], state["dq"], state["b"])
    return interaction + gs + params.alpha * ge


def _phi_kd(params, t_hats, state, channel) -> float:
    interaction = -(
        state["mhat"] * state["m"]
        + 0.5 * (state["qhat"] * state["dq"] - state["dqhat"] * state["q"])
        + state["shat"] * state["ds"]
        + state["dshat"] * state["s"]
    )
    gs = _kd_gs(state, 2.0 * params.lambda_s, t_hats)
    ge = channel.energetic(
        state["m"], state["q"], state["dq"], state["s"], state["ds"], state["b"]
    )
    return interaction + params.eta * gs + params.alpha * ge


def _phi_bo(params, state, channel) -> float:
    interaction = -(
        state["mhat"] * state["m"]
        + state["shat"] * state["s"]
        + 0.5 * (state["qhat"] * state["dq"] - state["dqhat"] * state["q"])
    )
    gs = _bo_gs(state, 2.0 * params.lambda_s)
    ge = channel.energetic(
        state["m"], state["q"], state["dq"], state["s"], state["b"]
    )
    return interaction + params.eta * gs + params.alpha * ge


def free_entropy(
    params: ModelParams,
    teacher: TeacherOrderParams | None = None,
    student: StudentOrderParams | dict | None = None,
    cfg: SolverConfig = SolverConfig(),
    variant: str = "plus",
) -> float:
    """Evaluate the relevant free entropy at a given point.

    teacher only           -> plain-classifier free entropy at the teacher point
    teacher + student      -> distillation free entropy
    student only           -> optimal-teacher distillation free entropy

    `student` may be a raw state dict (perturbed points for stationarity
    checks); the quadrature grid matches the solver's.
    """
    grid = cfg.grid()
    if student is None:
        if teacher is None:
            raise ValueError("need a teacher and/or a student point")
        return _phi_teacher(params, teacher.as_state(), TeacherChannel(params, grid))
    state = student.as_state() if hasattr(student, "as_state") else dict(student)
    if teacher is not None:
        t_hats = {
            "mhat": teacher.hats[0], "qhat": teacher.hats[1],
            "dqhat": teacher.hats[2], "lam": 2.0 * params.lambda_t,
        }
        return _phi_kd(params, t_hats, state, KDChannel(params, teacher.as_state(), grid))
    if hasattr(student, "kind") and student.kind == "bo":
        variant = getattr(student, "bo_variant", variant) or variant
    return _phi_bo(params, state, BOChannel(params, grid, variant=variant))


def teacher_free_entropy_at(params: ModelParams, state: dict,
                            cfg: SolverConfig = SolverConfig()) -> float:
    """Teacher free entropy at an arbitrary state dict (for stationarity tests)."""
    return _phi_teacher(params, state, TeacherChannel(params, cfg.grid()))


def kd_free_entropy_at(params: ModelParams, teacher: TeacherOrderParams,
                       state: dict, cfg: SolverConfig = SolverConfig()) -> float:
    t_hats = {
        "mhat": teacher.hats[0], "qhat": teacher.hats[1],
        "dqhat": teacher.hats[2], "lam": 2.0 * params.lambda_t,
    }
    return _phi_kd(params, t_hats, state,
                   KDChannel(params, teacher.as_state(), cfg.grid()))


def bo_free_entropy_at(params: ModelParams, state: dict,
                       cfg: SolverConfig = SolverConfig(),
                       variant: str = "plus") -> float:
    return _phi_bo(params, state, BOChannel(params, cfg.grid(), variant=variant))
