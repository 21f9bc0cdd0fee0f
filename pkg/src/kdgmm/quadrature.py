"""Gauss-Hermite quadrature for standard-normal expectations.

Probabilists' convention: nodes/weights (z_i, w_i) such that

    E[f(Z)] = int Dz f(z) ~ sum_i w_i f(z_i),    sum_i w_i = 1,

with Dz the standard normal measure. Two-dimensional expectations use the
tensor product of the same rule.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.hermite_e import hermegauss


@dataclass(frozen=True)
class QuadratureGrid:
    nodes: np.ndarray
    weights: np.ndarray
    order: int

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be matching 1D arrays")


def gauss_hermite(order: int) -> QuadratureGrid:
    """Nodes/weights for E[f(Z)], Z ~ N(0, 1); weights sum to 1."""
    if order < 2:
        raise ValueError(f"order must be >= 2, got {order}")
    x, w = hermegauss(order)
    return QuadratureGrid(nodes=x, weights=w / math.sqrt(2.0 * math.pi), order=order)
