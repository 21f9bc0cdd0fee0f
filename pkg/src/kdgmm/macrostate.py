"""Macroscopic summary of a linear classifier and its asymptotic test error."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc


def gaussian_tail(x):
    """Upper tail of a standard normal, H(x) = P(Z > x)."""
    return 0.5 * erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


@dataclass(frozen=True)
class MacroState:
    """Overlaps that determine a linear classifier's asymptotic behaviour.

    m is the signal overlap w.v/N, q the norm w.w/N, b the bias; s is the
    teacher-student overlap w.wt/N when a teacher is in play, and m_t, q_t,
    b_t are the teacher's own values.
    """

    m: float
    q: float
    b: float
    s: float | None = None
    m_t: float | None = None
    q_t: float | None = None
    b_t: float | None = None


def _gen_error(m: float, q: float, b: float, delta: float, rho: float) -> float:
    if not q > 0:
        raise ValueError(f"degenerate classifier: q must be > 0, got {q}")
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    if any(math.isnan(v) for v in (m, q, b)):
        raise ValueError("generalization_error received NaN state")
    scale = math.sqrt(delta * q)
    err = float(
        rho * gaussian_tail((m + b) / scale)
        + (1.0 - rho) * gaussian_tail((m - b) / scale)
    )
    # mathematically in (0, 1); keep float64 saturation off the endpoints
    return min(max(err, 1e-300), 1.0 - 1e-16)


def generalization_error(state: MacroState, delta: float, rho: float) -> float:
    """Asymptotic misclassification rate of the (m, q, b) macro state.

    Invariant under the joint rescaling (m, sqrt(q), b) -> c (m, sqrt(q), b)
    for c > 0, since only the ratios enter the Gaussian tails.
    """
    return _gen_error(state.m, state.q, state.b, delta, rho)
