"""Scalar model primitives: activation, cross-entropy, distillation loss.

The distillation loss mixes a ground-truth term with a teacher-matching
term,

    l'(y, p, s) = (1 - chi) * H(y, sigma(s)) + chi * H(sigma(p/T), sigma(s/T)),

where p and s are teacher and student preactivations, H is the binary
cross-entropy and T the distillation temperature. Both the fixed-point
solver and the finite-size trainer differentiate this loss, so its
gradient lives here as the single source of truth.
"""
from __future__ import annotations

import numpy as np
from scipy.special import expit

from .params import ModelParams

# Probabilities are clipped to this floor before logs: saturated classifiers
# (diverging norms) otherwise hit -log(0).
PROB_FLOOR = 1e-15


def sigmoid(x, temp: float = 1.0):
    """Logistic activation sigma(x / temp). Saturates gracefully."""
    if not temp > 0:
        raise ValueError(f"temp must be > 0, got {temp}")
    return expit(np.asarray(x, dtype=float) / temp)


def cross_entropy(p, q):
    """Binary cross-entropy H(p, q) = -p log q - (1-p) log(1-q).

    q is clipped to [PROB_FLOOR, 1 - PROB_FLOOR] before the logs; NaN in
    either argument is a hard error.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(np.isnan(p)) or np.any(np.isnan(q)):
        raise ValueError("cross_entropy received NaN input")
    if np.any(p < 0) or np.any(p > 1):
        raise ValueError("cross_entropy target p must lie in [0, 1]")
    qc = np.clip(q, PROB_FLOOR, 1.0 - PROB_FLOOR)
    return -p * np.log(qc) - (1.0 - p) * np.log1p(-qc)


def smooth_label(y, eps: float):
    """Uniform label smoothing y -> y (1 - eps) + (1 - y) eps."""
    if not 0 <= eps < 0.5:
        raise ValueError(f"eps must be in [0, 0.5), got {eps}")
    y = np.asarray(y, dtype=float)
    return y * (1.0 - eps) + (1.0 - y) * eps


def kd_loss(y, teacher_preact, student_preact, params: ModelParams):
    """Distillation loss l'(y, p, s) for one (or an array of) sample(s).

    The temperature divides both preactivations inside the teacher-matching
    term only; the ground-truth term always sees sigma(s) at T=1.
    """
    chi, temp = params.chi, params.temp
    truth = cross_entropy(y, sigmoid(student_preact))
    distill = cross_entropy(
        sigmoid(teacher_preact, temp), sigmoid(student_preact, temp)
    )
    return (1.0 - chi) * truth + chi * distill


def kd_loss_grad(y, teacher_preact, student_preact, params: ModelParams):
    """d kd_loss / d student_preact, exact."""
    chi, temp = params.chi, params.temp
    s = np.asarray(student_preact, dtype=float)
    g_truth = sigmoid(s) - np.asarray(y, dtype=float)
    g_distill = (sigmoid(s, temp) - sigmoid(teacher_preact, temp)) / temp
    return (1.0 - chi) * g_truth + chi * g_distill


# --- numerically hardened forms used by the trainer and the solver -------
#
# Equivalent to cross_entropy(target, sigmoid(h)) but written in logit
# space, so they stay finite and accurate for |h| up to ~1e4 (saturated
# regimes with diverging norms).

def logistic_loss_stable(target, h, temp: float = 1.0):
    x = np.asarray(h, dtype=float) / temp
    return np.logaddexp(0.0, -x) + (1.0 - np.asarray(target, dtype=float)) * x


def logistic_grad(target, h, temp: float = 1.0):
    return (expit(np.asarray(h, dtype=float) / temp) - target) / temp


def logistic_curv(h, temp: float = 1.0):
    p = expit(np.asarray(h, dtype=float) / temp)
    return p * (1.0 - p) / temp**2


def kd_loss_stable(y, soft_target, h, chi: float, temp: float):
    """kd_loss with the teacher output already mapped to sigma(p/T)."""
    return (1.0 - chi) * logistic_loss_stable(y, h) + chi * logistic_loss_stable(
        soft_target, h, temp
    )


def kd_grad_stable(y, soft_target, h, chi: float, temp: float):
    return (1.0 - chi) * logistic_grad(y, h) + chi * logistic_grad(
        soft_target, h, temp
    )


def kd_curv_stable(h, chi: float, temp: float):
    return (1.0 - chi) * logistic_curv(h) + chi * logistic_curv(h, temp)
