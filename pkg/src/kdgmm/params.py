"""Problem-instance parameters shared by the solver and the simulator."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass

# Ridge intensity used throughout as a proxy for the unregularized limit,
# where plain maximum likelihood would be ill-defined on separable data.
BASELINE_RIDGE = 1e-5


@dataclass(frozen=True)
class ModelParams:
    """One instance of the mixture-classification / distillation problem.

    alpha       samples per input dimension, M/N > 0
    delta       cluster noise variance, > 0
    rho         fraction of label-1 points, in (0, 1)
    eta         trainable-weight fraction of the student, in (0, 1]
    lambda_t    teacher ridge intensity, >= 0 (penalty lambda_t |w|^2)
    lambda_s    student ridge intensity, >= 0 (penalty lambda_s |w|^2)
    chi         distillation mixing weight, in [0, 1] (0 = labels only)
    temp        distillation temperature, > 0 (applied to the teacher-output
                term only, never to the ground-truth term)
    eps_smooth  label-smoothing amount, in [0, 0.5)
    """

    alpha: float
    delta: float
    rho: float
    eta: float = 1.0
    lambda_t: float = 0.1
    lambda_s: float = BASELINE_RIDGE
    chi: float = 1.0
    temp: float = 1.0
    eps_smooth: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if not self.delta > 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if not 0 < self.rho < 1:
            raise ValueError(f"rho must be in (0, 1), got {self.rho}")
        if not 0 < self.eta <= 1:
            raise ValueError(f"eta must be in (0, 1], got {self.eta}")
        if self.lambda_t < 0:
            raise ValueError(f"lambda_t must be >= 0, got {self.lambda_t}")
        if self.lambda_s < 0:
            raise ValueError(f"lambda_s must be >= 0, got {self.lambda_s}")
        if not 0 <= self.chi <= 1:
            raise ValueError(f"chi must be in [0, 1], got {self.chi}")
        if not self.temp > 0:
            raise ValueError(f"temp must be > 0, got {self.temp}")
        if not 0 <= self.eps_smooth < 0.5:
            raise ValueError(
                f"eps_smooth must be in [0, 0.5), got {self.eps_smooth}"
            )

    def replace(self, **kwargs) -> "ModelParams":
        return dataclasses.replace(self, **kwargs)


PARAM_FIELDS = tuple(f.name for f in dataclasses.fields(ModelParams))
