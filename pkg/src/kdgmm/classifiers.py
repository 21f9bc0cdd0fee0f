"""Trained linear classifier container shared by estimators and trainers."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class TrainMeta:
    iterations: int
    grad_norm: float
    converged: bool


_CLOSED_FORM = TrainMeta(iterations=0, grad_norm=0.0, converged=True)


@dataclass(frozen=True)
class TrainedClassifier:
    """Linear classifier f(x) = x.w / sqrt(N) + b with a sparsity mask.

    Weights are exactly zero outside the mask. `meta` records how the
    classifier was obtained (closed-form constructions use a converged
    zero-iteration stamp).
    """

    weights: np.ndarray          # (N,)
    bias: float
    mask: np.ndarray             # (N,) bool, trainable support
    meta: TrainMeta = field(default=_CLOSED_FORM)

    def __post_init__(self):
        if self.weights.shape != self.mask.shape:
            raise ValueError("weights and mask shapes differ")
        if np.any(self.weights[~self.mask] != 0.0):
            raise ValueError("weights must be exactly zero outside the mask")

    @property
    def n_dim(self) -> int:
        return self.weights.shape[0]

    def preactivations(self, inputs: np.ndarray) -> np.ndarray:
        return inputs @ self.weights / np.sqrt(self.n_dim) + self.bias

    def predict(self, inputs: np.ndarray) -> np.ndarray:
        # Ties classify as 1, matching sigma(f) >= 1/2.
        return (self.preactivations(inputs) >= 0.0).astype(np.int64)


def support_size(n_dim: int, eta: float) -> int:
    """Trainable support: the first floor(eta * N) coordinates."""
    k = int(np.floor(eta * n_dim + 1e-12))
    if not 1 <= k <= n_dim:
        raise ValueError(f"support size {k} out of range for n_dim={n_dim}")
    return k


def support_mask(n_dim: int, eta: float) -> np.ndarray:
    mask = np.zeros(n_dim, dtype=bool)
    mask[: support_size(n_dim, eta)] = True
    return mask
