"""
Ensemble flows, adjoints and exact discrete gradients.
"""

from .adjoint import AdjointBundle, adjoint_pass, switching_functions
from .ensemble import Ensemble
from .gradient import (
    GradientResult,
    discrepancy_value,
    discrete_gradient,
    penalty_value,
)
from .integrator import TrajectoryBundle, flow_ensemble, rk4_substep
from .invariants import cyclic_order_preserved, flow_map_area_factor, order_preserved
from .output import OutputMap, check_targets, terminal_covector
from .schedule import (
    ControlSchedule,
    concatenate_schedules,
    rescale_schedule,
    split_schedule,
)

__all__ = [
    "AdjointBundle",
    "adjoint_pass",
    "switching_functions",
    "Ensemble",
    "GradientResult",
    "discrepancy_value",
    "discrete_gradient",
    "penalty_value",
    "TrajectoryBundle",
    "flow_ensemble",
    "rk4_substep",
    "cyclic_order_preserved",
    "flow_map_area_factor",
    "order_preserved",
    "OutputMap",
    "check_targets",
    "terminal_covector",
    "ControlSchedule",
    "concatenate_schedules",
    "rescale_schedule",
    "split_schedule",
]
