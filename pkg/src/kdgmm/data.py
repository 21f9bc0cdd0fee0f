"""Finite-size Gaussian-mixture sample generation.

Rows follow x = (2y - 1) v / sqrt(N) + sqrt(delta) z with v_i, z_i iid
standard normal and skewed labels P(y=1) = rho. All randomness derives
from the explicit seed; draw order is signal, labels, noise, so samples
are byte-identical for a fixed seed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ModelParams


@dataclass(frozen=True)
class Dataset:
    n_dim: int
    n_samples: int
    inputs: np.ndarray   # (M, N)
    labels: np.ndarray   # (M,) ints in {0, 1}
    signal: np.ndarray   # (N,)
    seed: int

    @property
    def alpha(self) -> float:
        return self.n_samples / self.n_dim


def _draw_inputs(signal, labels, delta, rng):
    n = signal.shape[0]
    m = labels.shape[0]
    z = rng.standard_normal((m, n))
    spins = 2.0 * labels - 1.0
    return spins[:, None] * (signal / np.sqrt(n))[None, :] + np.sqrt(delta) * z


def sample_gmm(
    n_dim: int,
    alpha: float,
    delta: float,
    rho: float,
    seed: int,
    gauge: bool = False,
) -> Dataset:
    """Draw a mixture sample with M = round(alpha * n_dim) rows.

    delta = 0 is permitted here (degenerate, for tests); `gauge=True` fixes
    the signal to the all-ones vector instead of drawing it.
    """
    if n_dim < 1:
        raise ValueError(f"n_dim must be >= 1, got {n_dim}")
    if delta < 0:
        raise ValueError(f"delta must be >= 0, got {delta}")
    m = int(round(alpha * n_dim))
    if m < 1:
        raise ValueError(
            f"empty dataset: round(alpha * n_dim) = {m} with alpha={alpha}, n_dim={n_dim}"
        )
    rng = np.random.default_rng(seed)
    if gauge:
        signal = np.ones(n_dim)
    else:
        signal = rng.standard_normal(n_dim)
    labels = (rng.random(m) < rho).astype(np.int64)
    inputs = _draw_inputs(signal, labels, delta, rng)
    return Dataset(
        n_dim=n_dim, n_samples=m, inputs=inputs, labels=labels,
        signal=signal, seed=seed,
    )


def sample_dataset(
    n_dim: int, params: ModelParams, seed: int, gauge: bool = False
) -> Dataset:
    """Sample a training set for the given problem instance."""
    return sample_gmm(n_dim, params.alpha, params.delta, params.rho, seed, gauge)


def sample_test_batch(signal, n_batch, delta, rho, rng, dtype=np.float64):
    """Fresh labelled rows sharing the training signal (for test error).

    dtype=float32 halves generation cost; classification decisions are
    insensitive to the rounding at measurement precision.
    """
    labels = (rng.random(n_batch) < rho).astype(np.int64)
    if dtype == np.float64:
        return _draw_inputs(signal, labels, delta, rng), labels
    n = signal.shape[0]
    z = rng.standard_normal((n_batch, n), dtype=np.float32)
    spins = (2.0 * labels - 1.0).astype(np.float32)
    mean = (signal / np.sqrt(n)).astype(np.float32)
    inputs = spins[:, None] * mean[None, :] + np.float32(np.sqrt(delta)) * z
    return inputs, labels
