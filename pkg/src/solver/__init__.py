"""
Bolza loss, schedule optimization and maximum-principle diagnostics.
"""

from .experiments import (
    beta_sweep,
    classification_accuracy,
    classification_problem,
    lift_product,
    two_moons,
)
from .loss import loss, member_discrepancies
from .optimizer import OptimizationResult, conjugate_direction, optimize
from .pmp import adjoint_consistency, interval_means, pmp_residual
from .problem import OutputMap, TrainingProblem

__all__ = [
    "beta_sweep",
    "classification_accuracy",
    "classification_problem",
    "lift_product",
    "two_moons",
    "loss",
    "member_discrepancies",
    "OptimizationResult",
    "conjugate_direction",
    "optimize",
    "adjoint_consistency",
    "interval_means",
    "pmp_residual",
    "OutputMap",
    "TrainingProblem",
]
