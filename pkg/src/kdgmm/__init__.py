"""Replica predictions and finite-size experiments for distillation on Gaussian mixtures."""

from .params import BASELINE_RIDGE, ModelParams
from .losses import cross_entropy, kd_loss, kd_loss_grad, sigmoid, smooth_label
from .data import Dataset, sample_dataset, sample_gmm
from .macrostate import MacroState, gaussian_tail, generalization_error
from .classifiers import TrainedClassifier, TrainMeta
from .estimators import (
    bayes_optimal_error,
    bo_teacher_proxy,
    hebbian_estimator,
    sparse_hebbian_estimator,
)
from .quadrature import QuadratureGrid, gauss_hermite
from .prox import ProxError, prox_kd, prox_logistic
from .solver import (
    SolverConfig,
    SolverDivergence,
    SolverError,
    SolverNonConvergence,
    StudentOrderParams,
    TeacherOrderParams,
    free_entropy,
    solve_bo_kd,
    solve_kd,
    solve_teacher,
)

__all__ = [
    "BASELINE_RIDGE",
    "ModelParams",
    "cross_entropy",
    "kd_loss",
    "kd_loss_grad",
    "sigmoid",
    "smooth_label",
    "Dataset",
    "sample_dataset",
    "sample_gmm",
    "MacroState",
    "gaussian_tail",
    "generalization_error",
    "TrainedClassifier",
    "TrainMeta",
    "bayes_optimal_error",
    "bo_teacher_proxy",
    "hebbian_estimator",
    "sparse_hebbian_estimator",
    "QuadratureGrid",
    "gauss_hermite",
    "ProxError",
    "prox_kd",
    "prox_logistic",
    "SolverConfig",
    "SolverDivergence",
    "SolverError",
    "SolverNonConvergence",
    "StudentOrderParams",
    "TeacherOrderParams",
    "free_entropy",
    "solve_bo_kd",
    "solve_kd",
    "solve_teacher",
]

__version__ = "0.1.0"
