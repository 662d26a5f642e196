"""
Bolza loss of a schedule.
"""

from typing import Optional

import numpy as np

from ..dynamics.gradient import discrepancy_value, penalty_value
from ..dynamics.integrator import TrajectoryBundle
from ..dynamics.schedule import ControlSchedule
from .problem import TrainingProblem


def check_schedule(problem: TrainingProblem, sched: ControlSchedule) -> None:
    if sched.steps != problem.steps or not np.isclose(sched.T, problem.T):
        raise ValueError(
            f"schedule grid ({sched.steps} steps, T={sched.T}) differs from the problem's"
        )


def loss(
    problem: TrainingProblem,
    sched: ControlSchedule,
    traj: Optional[TrajectoryBundle] = None,
) -> float:
    """
    1/2 sum_k |p(z_k(T)) - c_k|^2 + beta/2 sum_j sum_i u_ji^2 dt.

    Raises:
        DimensionMismatchError: if the schedule width differs from the family
        IntegrationError: if the forward flow breaks down
    """
    check_schedule(problem, sched)
    traj = traj or problem.flow(sched)
    return discrepancy_value(problem.pmap, traj.terminal, problem.targets) + penalty_value(
        sched, problem.beta
    )


def member_discrepancies(problem: TrainingProblem, terminal: np.ndarray) -> np.ndarray:
    """|p(z_k(T)) - c_k| per member."""
    return np.linalg.norm(problem.pmap.difference(terminal, problem.targets), axis=-1)
