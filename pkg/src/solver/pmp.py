"""
Maximum-principle diagnostics in the normal case.

With psi(T) = -(p - c)^T Dp and F_i = sum_k psi_k f_i(z_k), an extremal
satisfies beta u_i = F_i and keeps M = (1 / 2 beta) sum_i F_i^2 constant.
"""

import logging
from typing import Optional

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy.integrate import trapezoid

from ..dynamics.adjoint import adjoint_pass, switching_functions
from ..dynamics.integrator import TrajectoryBundle
from ..dynamics.schedule import ControlSchedule
from ..schemas.reports import PMPReport
from ..utils.error_handler import ScenarioConfigError
from .loss import check_schedule
from .problem import TrainingProblem

logger = logging.getLogger(__name__)


def interval_means(values: np.ndarray, substeps: int, dt: float) -> np.ndarray:
    """Trapezoid mean over each control interval; (S*M + 1, r) -> (S, r)."""
    windows = sliding_window_view(values, substeps + 1, axis=0)[::substeps]
    return trapezoid(windows, dx=dt / substeps, axis=-1) / dt


def continuous_switching(
    problem: TrainingProblem,
    sched: ControlSchedule,
    traj: Optional[TrajectoryBundle] = None,
):
    """F_i at every substep node along the forward trajectory; returns (F, traj)."""
    traj = traj or problem.flow(sched)
    adjoint = adjoint_pass(problem.family, sched, traj, problem.targets, problem.pmap)
    return switching_functions(problem.family, traj.substep_states, adjoint.substep_psi), traj


def pmp_residual(
    problem: TrainingProblem,
    sched: ControlSchedule,
    traj: Optional[TrajectoryBundle] = None,
) -> PMPReport:
    """
    Stationarity residual sup |beta u - F_bar| and the maximized Hamiltonian
    on the control grid.

    Raises:
        ScenarioConfigError: if beta is not positive
    """
    if not problem.beta > 0:
        raise ScenarioConfigError(
            "maximum-principle diagnostics need beta > 0", beta=problem.beta
        )
    check_schedule(problem, sched)
    F, traj = continuous_switching(problem, sched, traj)
    M = traj.substeps
    F_bar = interval_means(F, M, sched.dt)
    residual = float(np.max(np.abs(problem.beta * sched.values - F_bar)))

    hamiltonian = np.sum(F[::M] ** 2, axis=-1) / (2.0 * problem.beta)
    mean = float(np.mean(hamiltonian))
    spread = float(np.max(np.abs(hamiltonian - mean)) / mean) if mean > 0 else 0.0
    logger.debug(f"PMP residual {residual:.3e}, Hamiltonian spread {spread:.3e}")
    return PMPReport(
        beta=problem.beta,
        steps=sched.steps,
        residual=residual,
        hamiltonian=[float(h) for h in hamiltonian],
        mean_hamiltonian=mean,
        spread=spread,
    )


def adjoint_consistency(
    problem: TrainingProblem, sched: ControlSchedule, substeps: int
) -> float:
    """
    Sup gap between the continuous-adjoint interval means F_bar and
    -(discrete discrepancy gradient) / dt, both at ``substeps`` per interval.
    """
    refined = problem.with_options(substeps=substeps)
    traj = refined.flow(sched)
    F, _ = continuous_switching(refined, sched, traj)
    F_bar = interval_means(F, substeps, sched.dt)
    discrete = -refined.gradient(sched, traj=traj).discrepancy_gradient / sched.dt
    return float(np.max(np.abs(F_bar - discrete)))
