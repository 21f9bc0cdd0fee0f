"""Closed-form estimators and the information-theoretic error floor.

The class-mean (Hebbian) plug-in estimator

    w = 1/(alpha sqrt(N)) sum_mu (2 y_mu - 1) x_mu,
    b = delta * q / 2 * log(rho / (1 - rho)),   q = |w|^2 / N,

attains the Bayes-optimal test error in this data model; its eta-sparse
trimming attains the floor of the restricted problem, which equals the
full problem at (alpha / eta, delta / eta). The bias uses the intensive
norm q = |w|^2/N: with that convention b is exactly the minimizer of the
asymptotic error at fixed (m, q).
"""
from __future__ import annotations

import math

import numpy as np

from .classifiers import TrainedClassifier, support_mask
from .data import Dataset
from .macrostate import _gen_error


def _plugin_bias(q: float, delta: float, rho: float) -> float:
    return 0.5 * delta * q * math.log(rho / (1.0 - rho))


def hebbian_estimator(data: Dataset, delta: float, rho: float) -> TrainedClassifier:
    """Class-mean-difference weights with the log-odds bias."""
    if data.n_samples < 1:
        raise ValueError("empty dataset")
    n = data.n_dim
    alpha = data.alpha
    spins = 2.0 * data.labels - 1.0
    w = (spins @ data.inputs) / (alpha * math.sqrt(n))
    q = float(w @ w) / n
    return TrainedClassifier(
        weights=w, bias=_plugin_bias(q, delta, rho), mask=np.ones(n, dtype=bool)
    )


def sparse_hebbian_estimator(
    data: Dataset, eta: float, delta: float, rho: float
) -> TrainedClassifier:
    """Hebbian weights trimmed to the first eta*N coordinates.

    The bias is kept at the full estimator's value; it is also the optimal
    bias for the trimmed macro state (eta, eta * q).
    """
    if not 0 < eta <= 1:
        raise ValueError(f"eta must be in (0, 1], got {eta}")
    full = hebbian_estimator(data, delta, rho)
    mask = support_mask(data.n_dim, eta)
    w = np.where(mask, full.weights, 0.0)
    return TrainedClassifier(weights=w, bias=full.bias, mask=mask)


def bo_teacher_proxy(
    n_dim: int,
    alpha: float,
    delta: float,
    rho: float,
    seed: int,
    signal: np.ndarray | None = None,
) -> TrainedClassifier:
    """Noisy-signal teacher w = v + sqrt(delta/alpha) z, Bayes-optimal bias.

    Statistically equivalent to the Hebbian plug-in (m=1, q=1+delta/alpha)
    but with noise independent of any training set. Pass `signal` to pair
    the teacher with an existing dataset; by default a fresh signal is
    drawn from the seed.
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")
    rng = np.random.default_rng(seed)
    if signal is None:
        signal = rng.standard_normal(n_dim)
    elif signal.shape[0] != n_dim:
        raise ValueError("signal length does not match n_dim")
    w = signal + math.sqrt(delta / alpha) * rng.standard_normal(n_dim)
    q_expected = 1.0 + delta / alpha
    return TrainedClassifier(
        weights=w,
        bias=_plugin_bias(q_expected, delta, rho),
        mask=np.ones(n_dim, dtype=bool),
    )


def bayes_optimal_error(
    alpha: float, delta: float, rho: float, eta: float = 1.0
) -> float:
    """Error floor for the eta-sparse problem.

    Evaluates the full-support floor at the rescaled instance
    (alpha/eta, delta/eta): macro state m=1, q=1+delta/alpha and the
    log-odds bias.
    """
    if not (alpha > 0 and delta > 0 and 0 < eta <= 1):
        raise ValueError("alpha, delta must be > 0 and eta in (0, 1]")
    a, d = alpha / eta, delta / eta
    q = 1.0 + d / a
    return _gen_error(1.0, q, _plugin_bias(q, d, rho), d, rho)
